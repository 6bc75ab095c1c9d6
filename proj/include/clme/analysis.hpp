#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "clme/exact_propagator.hpp"
#include "clme/model.hpp"
#include "clme/transforms.hpp"

namespace clme {

// ---------------------------------------------------------------------------
// Long-time state of the damped oscillator
// ---------------------------------------------------------------------------

/// rho~(K, r, inf) = (1/sqrt(2 pi)) exp(-k_coef K^2 - r_coef r^2), and the
/// same state in the position basis
/// <x'|rho|x> = A exp(-alpha_plus (x^2 + x'^2) - 2 alpha_minus x x').
struct StationaryState {
  double k_coef = 0.0;  // D / (16 m^2 omega^2 gamma)
  double r_coef = 0.0;  // D / (16 gamma hbar^2)
  double A = 0.0;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  /// Set when gamma < 5 omega, outside the strongly overdamped regime.
  bool regime_warning = false;

  Complex char_value(double K, double r) const;
  /// <x'|rho|x> at R = (x + x')/2, r = x - x'.
  Complex density(double R, double r) const;
  CharFunction char_function() const;
};

StationaryState stationary_state(const ModelParams& params);

/// The t -> inf limit of the exact propagator for a normalized state:
/// (1/sqrt(2 pi)) exp(alpha Z_inf(K, r)).
Complex asymptotic_char_value(double K, double r, const ModelParams& params);

/// lambda_n = (8 m gamma hbar omega / (D + c)) ((D - c) / (D + c))^n with
/// c = 4 m gamma hbar omega, for n = 0..n_max.
std::vector<double> eigen_spectrum_analytic(const ModelParams& params, int n_max);

// ---------------------------------------------------------------------------
// Energy-basis projection
// ---------------------------------------------------------------------------

struct Spectrum {
  /// <phi_m|rho|phi_n>, m, n = 0..N
  Eigen::MatrixXcd matrix;
  /// Eigenvalues of `matrix`, descending.
  std::vector<double> eigenvalues;
  /// Largest |Im| of the eigenvalues before symmetrization.
  double eigen_imag_residue = 0.0;
  /// Frobenius norm of the off-diagonal part.
  double offdiag_norm = 0.0;
  /// offdiag_norm / Frobenius norm of the diagonal.
  double offdiag_ratio = 0.0;
  /// Worst |<phi_m|phi_n> - delta_mn| on the quadrature grid.
  double orthonormality_error = 0.0;

  std::vector<double> diagonal() const;
};

inline constexpr int kDefaultBasisCutoff = 32;

/// Quadrature of phi_m(R - r/2) rho(R, r) phi_n(R + r/2) dR dr. Throws
/// ResolutionError when the basis fails the orthonormality self-test at
/// `orthonormality_tolerance`.
Spectrum project_energy_basis(const PositionGrid& rho, const ModelParams& params,
                              int n_max = kDefaultBasisCutoff,
                              double orthonormality_tolerance = 1e-6);

/// Quadrature of integral exp(-(x - y)^2) H_n(alpha x) dx minus
/// sqrt(pi) (1 - alpha^2)^{n/2} H_n(alpha y / sqrt(1 - alpha^2)), relative
/// to the magnitude of the right-hand side (absolute when that is < 1).
double hermite_identity_residual(int n, double alpha, double y);

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

struct Uncertainties {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double dx = 0.0;
  double dp = 0.0;
  double product() const { return dx * dp; }
};

/// Second moments of a Wigner grid (normalized by its total weight).
Uncertainties uncertainties(const WignerGrid& w);
/// dx = sqrt(D / 8 m^2 gamma omega^2), dp = sqrt(D / 8 gamma).
Uncertainties uncertainties(const StationaryState& s, const ModelParams& params);

/// Tr(rho - rho^2) on the grid.
double linear_entropy(const PositionGrid& rho);
/// 1 - 4 m gamma hbar omega / D
double stationary_linear_entropy(const ModelParams& params);
/// 4 m gamma hbar omega / D
double stationary_purity(const ModelParams& params);

// ---------------------------------------------------------------------------
// Decoherence diagnostics
// ---------------------------------------------------------------------------

struct AuditSample {
  double K;
  double r;
  double t;
};

/// Deterministic uniform samples in [-K_max, K_max] x [-r_max, r_max] x [0, t_max].
std::vector<AuditSample> make_audit_samples(std::size_t count, double K_max, double r_max,
                                            double t_max, std::uint64_t seed = 20240611);

struct AuditReport {
  /// max |ratio_A / ratio_B - 1| over accepted samples.
  double max_discrepancy = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// ratio = rho~(K, r, t) / rho~0(K', r'), computed for two initial states;
/// samples where either |rho~0(K', r')| <= threshold are rejected.
AuditReport factorization_audit(const CharFunction& a, const CharFunction& b,
                                const ModelParams& params, std::span<const AuditSample> samples,
                                double threshold = 1e-6);

struct DecayReport {
  double fitted_rate = 0.0;    // c in exp(-c K^2 t)
  double expected_rate = 0.0;  // D / (16 m^2 gamma^2)
  double relative_error = 0.0;
  std::size_t fitted_modes = 0;
  /// max |rho~(0, r, t_last) - (1/sqrt(2 pi)) exp(-D r^2 / (16 gamma hbar^2))|
  double limit_profile_error = 0.0;
  /// max over snapshots of |rho~(0, 0, t) - rho~(0, 0, 0)|
  double trace_drift = 0.0;
};

/// Fits |rho~(K, 0, t)| / |rho~(K, 0, 0)| = exp(-c K^2 t) over snapshots with
/// gamma t >= min_gamma_t. The first snapshot must be t = 0.
DecayReport free_particle_diagonalization(std::span<const std::pair<double, CharGrid>> snapshots,
                                          const ModelParams& params, double min_gamma_t = 3.0);

}  // namespace clme
