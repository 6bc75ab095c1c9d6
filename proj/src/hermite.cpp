#include "clme/hermite.hpp"

#include <cmath>
#include <numbers>

#include "clme/error.hpp"

namespace clme {

double hermite_polynomial(int n, double x) {
  if (n < 0) throw Error(ErrorCode::InvalidParameter, "Hermite index must be >= 0");
  double h_prev = 1.0;
  if (n == 0) return h_prev;
  double h = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * h - 2.0 * k * h_prev;
    h_prev = h;
    h = next;
  }
  return h;
}

void hermite_functions(int n_max, double xi, std::span<double> out) {
  const double psi0 = std::exp(-0.5 * xi * xi) / std::sqrt(std::sqrt(std::numbers::pi));
  out[0] = psi0;
  if (n_max == 0) return;
  out[1] = std::numbers::sqrt2 * xi * psi0;
  for (int k = 1; k < n_max; ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * xi * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
  }
}

OscillatorBasis::OscillatorBasis(double mass, double omega, double hbar, int n_max)
    : n_max_(n_max), length_(std::sqrt(hbar / (mass * omega))) {
  if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0))
    throw Error(ErrorCode::InvalidParameter, "oscillator basis needs m, omega, hbar > 0");
  if (n_max < 0) throw Error(ErrorCode::InvalidParameter, "basis cutoff must be >= 0");
}

void OscillatorBasis::evaluate(double x, std::span<double> out) const {
  hermite_functions(n_max_, x / length_, out);
  const double scale = 1.0 / std::sqrt(length_);
  for (int k = 0; k <= n_max_; ++k) out[k] *= scale;
}

std::vector<double> OscillatorBasis::evaluate(double x) const {
  std::vector<double> out(n_max_ + 1);
  evaluate(x, out);
  return out;
}

double OscillatorBasis::operator()(int n, double x) const {
  std::vector<double> out(n + 1);
  hermite_functions(n, x / length_, out);
  return out[n] / std::sqrt(length_);
}

}  // namespace clme
