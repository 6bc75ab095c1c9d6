#pragma once

#include <array>
#include <functional>
#include <span>

#include "clme/model.hpp"

namespace clme {

/// An initial (or evolved) characteristic function rho~(K, r), evaluable at
/// arbitrary real arguments.
using CharFunction = std::function<Complex(double K, double r)>;

/// Constants of the characteristic curves of the oscillator equation.
///
/// lambda_pm = (hbar / m omega^2)(gamma +- sqrt(gamma^2 - omega^2)), principal
/// square root, so the pair is real for gamma > omega and complex conjugate
/// for gamma < omega. All downstream arithmetic is done in complex numbers.
struct Characteristics {
  Complex lambda_plus;
  Complex lambda_minus;
  /// D / (16 m^2 (gamma^2 - omega^2))
  double alpha = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
  double gamma = 1.0;

  /// Decay rates 2 hbar / (m lambda_pm) of the squared characteristic modes.
  Complex decay_rate_plus() const { return 2.0 * hbar / (mass * lambda_plus); }
  Complex decay_rate_minus() const { return 2.0 * hbar / (mass * lambda_minus); }
};

Characteristics characteristics(const ModelParams& params);

/// Foot (K', r') at t = 0 of the characteristic through (K, r) at time t.
struct ShiftedArgs {
  double K;
  double r;
  /// Largest imaginary part dropped when taking the real parts.
  double imag_residue = 0.0;
};

ShiftedArgs shift_args(double K, double r, double t, const Characteristics& ch);

/// The initial-state-independent exponent: rho~(K,r,t) = rho~0(K',r') exp(alpha Z).
double z_factor(double K, double r, double t, const Characteristics& ch);

/// Z with every exponential zeroed (t -> infinity).
double z_factor_asymptotic(double K, double r, const Characteristics& ch);

// Free particle (omega = 0).

ShiftedArgs free_shift_args(double K, double r, double t, const ModelParams& params);

/// The full exponent of the free-particle damping factor (already multiplied
/// by -D / (16 m^2 gamma^2)); always <= 0.
double free_exponent(double K, double r, double t, const ModelParams& params);

/// Pointwise exact solution at (K, r, t). Routes to the free-particle
/// formulas when omega == 0.
Complex evaluate_exact(const CharFunction& rho0, double K, double r, double t,
                       const ModelParams& params);

/// The exact solution at time t as an evaluable function. Used to compose
/// propagations without gridding.
CharFunction evolved(CharFunction rho0, double t, const ModelParams& params);

CharGrid propagate_oscillator(const CharFunction& rho0, double t, const ModelParams& params,
                              const Axis& K, const Axis& r);

CharGrid propagate_free(const CharFunction& rho0, double t, const ModelParams& params,
                        const Axis& K, const Axis& r);

/// Dispatches on params.free_particle().
CharGrid propagate(const CharFunction& rho0, double t, const ModelParams& params, const Axis& K,
                   const Axis& r);

/// max |oscillator - free| over the sample points (K, r) for a small-omega
/// parameter set. With omega == 0 both sides take the free path and the
/// result is zero.
double consistency_check_omega_limit(const CharFunction& rho0, double t,
                                     const ModelParams& small_omega,
                                     std::span<const std::array<double, 2>> samples);

}  // namespace clme
