#pragma once

#include <functional>
#include <span>
#include <vector>

#include "clme/model.hpp"

namespace clme {

/// Method-of-lines settings: central differences of the given order in the
/// interior, one-sided closures of the same order at the edges, classical
/// RK4 in time.
struct OracleConfig {
  int stencil_order = 4;
  double dt = 1e-4;
  /// Stability constant c in dt * lambda_max <= c, where lambda_max bounds
  /// the spectral radius of the discrete operator (see stability_limit).
  double stability_constant = 2.5;
  /// Fraction of sum |f|^2 allowed within 4 cells of the edges.
  double boundary_leak_tolerance = 1e-6;
  bool check_boundary = true;
};

/// Largest dt allowed for the characteristic-space integrator:
///   c / (1.372 (v_r / dr + v_K / dK) + D r_max^2 / 4 hbar^2)
/// with v_r = 2 gamma r_max + hbar K_max / m and v_K = m omega^2 r_max / hbar.
/// 1.372 is the largest modified wavenumber of the fourth-order central
/// stencil (1.0 for second order).
double stability_limit(const Axis& K, const Axis& r, const ModelParams& params,
                       const OracleConfig& config);

/// Same bound for the (R, r) integrator; the mixed-derivative and potential
/// terms enter the spectral-radius estimate.
double stability_limit_position(const Axis& R, const Axis& r, const ModelParams& params,
                                const OracleConfig& config);

/// First derivative along one axis of a row-major block, using the configured
/// stencil. axis 0 differentiates over the first index.
void differentiate(std::span<const Complex> f, std::span<Complex> out, std::size_t n1,
                   std::size_t n2, int axis, double step, int order);

/// d rho~ / dt = -[(2 gamma r - hbar K / m) d_r + (m omega^2 r / hbar) d_K + D r^2 / 4 hbar^2] rho~
CharGrid rhs(const CharGrid& rho, const ModelParams& params, int stencil_order = 4);

struct OracleDiagnostics {
  std::size_t steps = 0;
  double dt = 0.0;
  /// |rho~(0, 0, t) - rho~(0, 0, 0)| at the final time.
  double trace_drift = 0.0;
  /// Largest edge fraction seen at the output times.
  double boundary_fraction = 0.0;
};

/// Integrates from t = 0 to each of the ascending output times.
std::vector<CharGrid> evolve(const CharGrid& initial, std::span<const double> times,
                             const OracleConfig& config, const ModelParams& params,
                             OracleDiagnostics* diagnostics = nullptr);

CharGrid evolve(const CharGrid& initial, double t, const OracleConfig& config,
                const ModelParams& params, OracleDiagnostics* diagnostics = nullptr);

/// d rho / dt = -[(i hbar / m) d_r d_R + 2 gamma r d_r + D r^2 / 4 hbar^2
///               + m omega^2 r R / (i hbar)] rho
PositionGrid rhs_position(const PositionGrid& rho, const ModelParams& params,
                          int stencil_order = 4);

/// Second-opinion integrator working directly on rho(R, r).
PositionGrid evolve_position(const PositionGrid& initial, double t, const OracleConfig& config,
                             const ModelParams& params, OracleDiagnostics* diagnostics = nullptr);

/// Richardson estimate of the error of evolve(initial on (K, r), t): the same
/// run on a grid with half the spacing (same extents) and dt / 2, compared on
/// the shared nodes and scaled by 2^p / (2^p - 1). `render` supplies the
/// initial state on any grid.
double richardson_error_estimate(const std::function<CharGrid(const Axis&, const Axis&)>& render,
                                 const Axis& K, const Axis& r, double t,
                                 const OracleConfig& config, const ModelParams& params);

}  // namespace clme
