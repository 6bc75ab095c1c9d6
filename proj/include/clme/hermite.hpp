#pragma once

#include <span>
#include <vector>

namespace clme {

/// Physicists' Hermite polynomial H_n(x) by three-term recurrence.
double hermite_polynomial(int n, double x);

/// Normalized Hermite functions psi_k(xi) = (2^k k! sqrt(pi))^{-1/2} H_k(xi) e^{-xi^2/2}
/// for k = 0..n_max, written into `out` (size n_max + 1). Uses the
/// normalized recurrence, so no factorials are formed.
void hermite_functions(int n_max, double xi, std::span<double> out);

/// Oscillator eigenfunctions phi_k(x) = (m omega / hbar)^{1/4} psi_k(x sqrt(m omega / hbar)).
class OscillatorBasis {
 public:
  OscillatorBasis(double mass, double omega, double hbar, int n_max);

  int n_max() const noexcept { return n_max_; }
  /// sqrt(hbar / m omega)
  double length() const noexcept { return length_; }

  /// phi_0..phi_{n_max} at x.
  std::vector<double> evaluate(double x) const;
  void evaluate(double x, std::span<double> out) const;
  double operator()(int n, double x) const;

 private:
  int n_max_;
  double length_;
};

}  // namespace clme
