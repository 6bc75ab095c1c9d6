#pragma once

#include <optional>

#include "clme/exact_propagator.hpp"
#include "clme/model.hpp"

namespace clme {

enum class Provenance { Analytic, Gridded };

struct RealizedState {
  /// rho~0(K, r); zero outside the grid for gridded states.
  CharFunction char_function;
  /// Closed-form rho(R, r), available for every built-in spec.
  std::function<Complex(double R, double r)> density;
  Provenance provenance = Provenance::Analytic;
  bool pure = true;
  /// Natural length of the state, used to size default grids.
  double length_scale = 1.0;
};

struct RealizeOptions {
  /// Grid on which gridded states are sampled before interpolation. The K
  /// axis is the reciprocal of R, so a wide R axis means a fine K spacing.
  std::size_t gridded_R_points = 2048;
  std::size_t gridded_r_points = 2048;
  /// Half-widths in units of the state's length scale.
  double gridded_R_half_width = 64.0;
  double gridded_r_half_width = 12.0;
};

RealizedState realize(const StateSpec& spec, const ModelParams& params,
                      const RealizeOptions& opts = {});

/// rho(R, r) of the realized state on the given axes.
PositionGrid render_position(const RealizedState& state, const Axis& R, const Axis& r);

/// rho~0(K, r) of the realized state on the given axes.
CharGrid render_char(const RealizedState& state, const Axis& K, const Axis& r);

/// Throws AliasingError when the state does not fit on (R, r): support
/// beyond the half-widths or structure finer than the grid resolves.
void check_fits(const RealizedState& state, const Axis& R, const Axis& r, double tolerance = 1e-10);

/// Bicubic (Keys, a = -1/2) interpolant of a characteristic-function grid;
/// zero outside the grid.
CharFunction interpolate(CharGrid grid);

struct PurityReport {
  double value;
  /// Fraction of sum |rho|^2 found in the outer 1/16 band of either axis.
  double truncation_fraction;
  bool truncation_warning;
};

/// Tr rho^2 = integral |rho(R, r)|^2 dR dr.
PurityReport purity_report(const PositionGrid& rho);
double purity(const PositionGrid& rho);

/// Oscillator thermal-state variances (sigma_x^2, sigma_p^2).
std::pair<double, double> thermal_variances(const ModelParams& params, double kT);

}  // namespace clme
