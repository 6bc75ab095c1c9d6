#include "clme/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace clme {

namespace {

// The FFTW planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void forward_kernel(std::span<Complex> data, std::size_t n, std::size_t stride,
                    std::size_t count, std::size_t distance, double step) {
  // exp(-i k_k x_j) = (-1)^(k+j) exp(-2 pi i k j / n) for centered axes with
  // n a power of two >= 4, so the centered transform is a plain DFT between
  // two checkerboard sign flips.
  for (std::size_t b = 0; b < count; ++b)
    for (std::size_t j = 1; j < n; j += 2) data[b * distance + j * stride] *= -1.0;

  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int len = static_cast<int>(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &len, static_cast<int>(count), buf, nullptr,
                              static_cast<int>(stride), static_cast<int>(distance), buf, nullptr,
                              static_cast<int>(stride), static_cast<int>(distance), FFTW_FORWARD,
                              FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double scale = step / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t b = 0; b < count; ++b)
    for (std::size_t k = 0; k < n; ++k) {
      auto& v = data[b * distance + k * stride];
      v *= (k % 2 == 0) ? scale : -scale;
    }
}

void conjugate(std::span<Complex> data) {
  for (auto& v : data) v = std::conj(v);
}

template <class Tag>
void require_transformable(const ComplexGrid<Tag>& g) {
  if (!is_power_of_two(g.first_axis().size()) || !is_power_of_two(g.second_axis().size()))
    throw Error(ErrorCode::InvalidParameter, "transform axes must be powers of two");
}

template <class Tag>
void check_edges(const ComplexGrid<Tag>& g, int axis, const TransformOptions& opts,
                 const char* what) {
  if (!opts.check_aliasing) return;
  const double frac = edge_fraction(g, axis);
  if (frac > opts.alias_tolerance) {
    std::ostringstream os;
    os << what << ": edge fraction " << frac << " exceeds " << opts.alias_tolerance;
    throw Error(ErrorCode::AliasingError, os.str());
  }
}

}  // namespace

void centered_transform(std::span<Complex> data, std::size_t n, std::size_t stride,
                        std::size_t count, std::size_t distance, double step, Direction dir) {
  if (!is_power_of_two(n) || n < 4)
    throw Error(ErrorCode::InvalidParameter, "transform length must be a power of two >= 4");
  if (dir == Direction::Forward) {
    forward_kernel(data, n, stride, count, distance, step);
  } else {
    conjugate(data);
    forward_kernel(data, n, stride, count, distance, step);
    conjugate(data);
  }
}

template <class Tag>
double edge_fraction(const ComplexGrid<Tag>& grid, int axis_index) {
  const std::size_t n1 = grid.first_axis().size();
  const std::size_t n2 = grid.second_axis().size();
  const std::size_t n = axis_index == 0 ? n1 : n2;
  const std::size_t band = std::max<std::size_t>(1, n / 16);
  double total = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const double w = std::norm(grid(i, j));
      total += w;
      const std::size_t idx = axis_index == 0 ? i : j;
      if (idx < band || idx >= n - band) edge += w;
    }
  return total > 0.0 ? edge / total : 0.0;
}

template double edge_fraction(const ComplexGrid<CharTag>&, int);
template double edge_fraction(const ComplexGrid<PositionTag>&, int);

CharGrid to_char(const PositionGrid& rho, const TransformOptions& opts) {
  require_transformable(rho);
  check_edges(rho, 0, opts, "state support exceeds the R half-width");
  const Axis& R = rho.first_axis();
  const Axis& r = rho.second_axis();
  CharGrid out(R.reciprocal(), r);
  std::copy(rho.values().begin(), rho.values().end(), out.values().begin());
  centered_transform(out.values(), R.size(), r.size(), r.size(), 1, R.step(), Direction::Forward);
  check_edges(out, 0, opts, "state bandwidth exceeds the K half-width");
  return out;
}

PositionGrid to_position(const CharGrid& rho, const TransformOptions& opts) {
  require_transformable(rho);
  check_edges(rho, 0, opts, "state bandwidth exceeds the K half-width");
  const Axis& K = rho.first_axis();
  const Axis& r = rho.second_axis();
  PositionGrid out(K.reciprocal(), r);
  std::copy(rho.values().begin(), rho.values().end(), out.values().begin());
  centered_transform(out.values(), K.size(), r.size(), r.size(), 1, K.step(), Direction::Inverse);
  check_edges(out, 0, opts, "state support exceeds the R half-width");
  return out;
}

WignerGrid wigner(const PositionGrid& rho, double hbar, const TransformOptions& opts) {
  require_transformable(rho);
  check_edges(rho, 1, opts, "coherences exceed the r half-width");
  const Axis& R = rho.first_axis();
  const Axis& r = rho.second_axis();
  std::vector<Complex> buf(rho.values().begin(), rho.values().end());
  centered_transform(buf, r.size(), 1, R.size(), r.size(), r.step(), Direction::Inverse);

  WignerGrid w;
  w.x = R;
  w.p = Axis(r.size(), hbar * r.reciprocal().half_width());
  w.values.resize(buf.size());
  const double scale = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * hbar);
  double imag = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    w.values[i] = scale * buf[i].real();
    imag = std::max(imag, std::abs(scale * buf[i].imag()));
  }
  w.imag_residue = imag;
  return w;
}

std::vector<double> position_marginal(const WignerGrid& w) {
  std::vector<double> out(w.x.size(), 0.0);
  for (std::size_t i = 0; i < w.x.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.p.size(); ++j) s += w(i, j);
    out[i] = s * w.p.step();
  }
  return out;
}

std::vector<double> momentum_marginal(const WignerGrid& w) {
  std::vector<double> out(w.p.size(), 0.0);
  for (std::size_t i = 0; i < w.x.size(); ++i)
    for (std::size_t j = 0; j < w.p.size(); ++j) out[j] += w(i, j);
  for (auto& v : out) v *= w.x.step();
  return out;
}

double total_weight(const WignerGrid& w) {
  double s = 0.0;
  for (double v : w.values) s += v;
  return s * w.x.step() * w.p.step();
}

}  // namespace clme
