#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "clme/error.hpp"

namespace clme {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Physical parameters
// ---------------------------------------------------------------------------

/// D = 8 m gamma k_B T (high-temperature Caldeira-Leggett limit).
struct HighTemperature {
  double kT;
};

/// D = 8 m gamma hbar omega (nbar + 1/2) with a Bose-Einstein nbar.
struct OscillatorBath {
  double kT;
};

struct ExplicitDiffusion {
  double D;
};

using DiffusionMode = std::variant<HighTemperature, OscillatorBath, ExplicitDiffusion>;

struct RawParams {
  double mass = 1.0;
  double gamma = 1.0;
  double omega = 0.0;
  double hbar = 1.0;
  DiffusionMode diffusion = ExplicitDiffusion{8.0};
};

/// Relative band |gamma^2 - omega^2| / max(gamma^2, omega^2) inside which the
/// oscillator solution is singular and parameters are rejected.
inline constexpr double kCriticalDampingGuard = 1e-9;

/// Waive lets closed-form stationary quantities, which stay regular at
/// gamma = omega, be evaluated there. characteristics() still rejects it.
enum class DampingGuard { Enforce, Waive };

bool near_critical(double gamma, double omega) noexcept;

/// Validated model constants. Temperature is resolved into D at construction
/// so downstream code only ever sees the diffusion coefficient.
class ModelParams {
 public:
  double mass() const noexcept { return mass_; }
  double gamma() const noexcept { return gamma_; }
  double omega() const noexcept { return omega_; }
  double hbar() const noexcept { return hbar_; }
  double diffusion() const noexcept { return diffusion_; }
  bool free_particle() const noexcept { return omega_ == 0.0; }

  /// 4 m gamma hbar omega, the lower bound on D for the oscillator bath.
  double pure_state_diffusion() const noexcept { return 4.0 * mass_ * gamma_ * hbar_ * omega_; }

  /// Same constants with a different D; validation is rerun.
  ModelParams with_diffusion(double D) const;

  friend ModelParams make_params(const RawParams& raw, DampingGuard guard);

 private:
  ModelParams() = default;

  double mass_ = 1.0;
  double gamma_ = 1.0;
  double omega_ = 0.0;
  double hbar_ = 1.0;
  double diffusion_ = 0.0;
};

/// Mean occupation 1/(exp(hbar omega / kT) - 1); zero at kT = 0.
double bose_occupation(double hbar_omega, double kT);

ModelParams make_params(const RawParams& raw, DampingGuard guard = DampingGuard::Enforce);

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Uniform axis, symmetric about zero and endpoint-exclusive:
/// x_i = -half_width + i * step, step = 2 half_width / n.
class Axis {
 public:
  Axis() = default;
  Axis(std::size_t n, double half_width);

  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return step_; }
  double half_width() const noexcept { return half_width_; }
  double operator[](std::size_t i) const noexcept {
    return -half_width_ + static_cast<double>(i) * step_;
  }
  std::vector<double> values() const;

  /// Index of the zero node (n/2).
  std::size_t zero_index() const noexcept { return n_ / 2; }

  /// The Fourier-conjugate axis: same size, step 2 pi / (n step).
  Axis reciprocal() const;

  bool operator==(const Axis&) const = default;

 private:
  std::size_t n_ = 0;
  double half_width_ = 0.0;
  double step_ = 0.0;
};

bool is_power_of_two(std::size_t n) noexcept;

/// Complex field on a (first, second) grid, row-major: index = i * n2 + j.
template <class Tag>
class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(Axis first, Axis second)
      : first_(first), second_(second), values_(first.size() * second.size()) {}

  const Axis& first_axis() const noexcept { return first_; }
  const Axis& second_axis() const noexcept { return second_; }

  Complex& operator()(std::size_t i, std::size_t j) { return values_[i * second_.size() + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return values_[i * second_.size() + j];
  }

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  ComplexGrid& operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
  }

 private:
  Axis first_;
  Axis second_;
  std::vector<Complex> values_;
};

struct CharTag {};
struct PositionTag {};

/// rho~(K, r): the Fourier transform of rho(R, r) over R. Axes are (K, r).
using CharGrid = ComplexGrid<CharTag>;
/// rho(R, r) = <x'|rho|x>, R = (x + x')/2, r = x - x'. Axes are (R, r).
using PositionGrid = ComplexGrid<PositionTag>;

// ---------------------------------------------------------------------------
// Initial-state descriptions
// ---------------------------------------------------------------------------

struct GaussianSpec {
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
};

/// Two Gaussians at x0 +- separation/2 sharing momentum p0, the second
/// weighted by exp(i phase).
struct CatSpec {
  double x0 = 0.0;
  double separation = 2.0;
  double p0 = 0.0;
  double sigma = 1.0;
  double phase = 0.0;
};

struct FockSpec {
  int n = 0;
};

/// Oscillator thermal state at temperature kT (energy units).
struct ThermalSpec {
  double kT = 0.0;
};

using StateSpec = std::variant<GaussianSpec, CatSpec, FockSpec, ThermalSpec>;

void validate(const StateSpec& spec);

// ---------------------------------------------------------------------------
// Invariant checks on realized grids
// ---------------------------------------------------------------------------

struct TraceResult {
  double value;
  /// |Im sum rho(R, 0) dR|, should be round-off.
  double imaginary_residue;
};

TraceResult trace_of(const PositionGrid& rho);
double trace(const PositionGrid& rho);

/// max |rho(R, -r) - conj(rho(R, r))| over nodes whose mirror is on the grid.
double hermiticity_error(const PositionGrid& rho);
/// max |rho~(-K, -r) - conj(rho~(K, r))| over nodes whose mirror is on the grid.
double hermiticity_error(const CharGrid& rho);

}  // namespace clme
