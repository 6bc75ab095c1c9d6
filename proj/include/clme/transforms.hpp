#pragma once

#include <span>
#include <vector>

#include "clme/model.hpp"

namespace clme {

/// Real phase-space distribution W(x, p), row-major over (x, p).
struct WignerGrid {
  Axis x;
  /// Momentum axis: hbar times the wavenumber axis conjugate to r.
  Axis p;
  std::vector<double> values;
  /// max |Im W| discarded when taking the real part.
  double imag_residue = 0.0;

  double operator()(std::size_t i, std::size_t j) const { return values[i * p.size() + j]; }
};

struct TransformOptions {
  /// Fraction of sum |f|^2 allowed in the outer 1/16 of the transformed
  /// axis (each side) before the input is considered under-resolved.
  double alias_tolerance = 1e-10;
  bool check_aliasing = true;
};

enum class Direction { Forward, Inverse };

/// Continuous-normalized transform along one axis of a row-major block.
///
/// Forward:  out_k = (step / sqrt(2 pi)) sum_j exp(-i k_k x_j) in_j
/// Inverse:  out_k = (step / sqrt(2 pi)) sum_j exp(+i k_k x_j) in_j
///
/// where x_j and k_k are the centered axes of the given size and step, and
/// k is the reciprocal axis. The inverse is computed as conj(Forward(conj)),
/// so both directions share one kernel. `stride` and `count` select the
/// axis: stride == 1 transforms rows, stride == count transforms columns.
void centered_transform(std::span<Complex> data, std::size_t n, std::size_t stride,
                        std::size_t count, std::size_t distance, double step, Direction dir);

/// rho(R, r) -> rho~(K, r); the K axis is the reciprocal of the R axis.
CharGrid to_char(const PositionGrid& rho, const TransformOptions& opts = {});

/// rho~(K, r) -> rho(R, r); the R axis is the reciprocal of the K axis.
PositionGrid to_position(const CharGrid& rho, const TransformOptions& opts = {});

/// W(x, p) = (1 / 2 pi hbar) integral dy rho(R = x, r = y) exp(i p y / hbar).
WignerGrid wigner(const PositionGrid& rho, double hbar, const TransformOptions& opts = {});

/// Fraction of sum |f|^2 held in the outer 1/16 of `axis_index` (0 or 1).
template <class Tag>
double edge_fraction(const ComplexGrid<Tag>& grid, int axis_index);

/// sum |f|^2 d(first) d(second)
template <class Tag>
double l2_norm_squared(const ComplexGrid<Tag>& grid) {
  double s = 0.0;
  for (const auto& v : grid.values()) s += std::norm(v);
  return s * grid.first_axis().step() * grid.second_axis().step();
}

/// Marginal over p: integral W dp, one value per x node.
std::vector<double> position_marginal(const WignerGrid& w);
/// Marginal over x: integral W dx, one value per p node.
std::vector<double> momentum_marginal(const WignerGrid& w);
/// integral W dx dp
double total_weight(const WignerGrid& w);

}  // namespace clme
