#include "clme/pde_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clme/parallel.hpp"
#include "clme/transforms.hpp"

namespace clme {

namespace {

constexpr double kModifiedWavenumber4 = 1.372;
constexpr double kModifiedWavenumber2 = 1.0;

void check_order(int order) {
  if (order != 2 && order != 4)
    throw Error(ErrorCode::InvalidParameter, "stencil order must be 2 or 4");
}

double modified_wavenumber(int order) {
  return order == 4 ? kModifiedWavenumber4 : kModifiedWavenumber2;
}

// Derivative at position k of a line of n samples f(0..n-1) with spacing h.
template <class Get>
Complex stencil(Get&& f, std::size_t k, std::size_t n, double h, int order) {
  if (order == 2) {
    if (k == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    if (k == n - 1) return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
    return (f(k + 1) - f(k - 1)) / (2.0 * h);
  }
  if (k == 0)
    return (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h);
  if (k == 1)
    return (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / (12.0 * h);
  if (k == n - 1)
    return (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) +
            3.0 * f(n - 5)) /
           (12.0 * h);
  if (k == n - 2)
    return (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) /
           (12.0 * h);
  return (-f(k + 2) + 8.0 * f(k + 1) - 8.0 * f(k - 1) + f(k - 2)) / (12.0 * h);
}

// Fraction of sum |f|^2 within `cells` nodes of any edge.
double boundary_fraction(std::span<const Complex> f, std::size_t n1, std::size_t n2,
                         std::size_t cells) {
  double total = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const double w = std::norm(f[i * n2 + j]);
      total += w;
      if (i < cells || j < cells || i >= n1 - cells || j >= n2 - cells) edge += w;
    }
  return total > 0.0 ? edge / total : 0.0;
}

// Classical RK4 over a flat state vector; `rate(in, out)` writes d/dt.
class Rk4 {
 public:
  explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  template <class Rate>
  void step(std::vector<Complex>& y, double dt, Rate&& rate) {
    const std::size_t n = y.size();
    rate(y, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    rate(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    rate(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    rate(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  std::vector<Complex> k1_, k2_, k3_, k4_, tmp_;
};

// Characteristic-space operator with precomputed coefficient rows.
class CharOperator {
 public:
  CharOperator(const Axis& K, const Axis& r, const ModelParams& params, int order)
      : K_(K), r_(r), order_(order), nK_(K.size()), nr_(r.size()) {
    check_order(order);
    const double m = params.mass();
    const double hb = params.hbar();
    const double g = params.gamma();
    const double w = params.omega();
    k_coef_.resize(nr_);
    decay_.resize(nr_);
    for (std::size_t j = 0; j < nr_; ++j) {
      k_coef_[j] = m * w * w * r[j] / hb;
      decay_[j] = params.diffusion() * r[j] * r[j] / (4.0 * hb * hb);
    }
    two_gamma_ = 2.0 * g;
    hbar_over_m_ = hb / m;
    has_k_term_ = w != 0.0;
  }

  void operator()(std::span<const Complex> f, std::span<Complex> out) const {
    const double hK = K_.step();
    const double hr = r_.step();
    parallel_for(nK_, [&](std::size_t i) {
      const Complex* row = f.data() + i * nr_;
      const double k = K_[i];
      for (std::size_t j = 0; j < nr_; ++j) {
        const Complex dr = stencil([&](std::size_t q) { return row[q]; }, j, nr_, hr, order_);
        Complex acc = (two_gamma_ * r_[j] - hbar_over_m_ * k) * dr + decay_[j] * row[j];
        if (has_k_term_) {
          const Complex dK = stencil([&](std::size_t q) { return f[q * nr_ + j]; }, i, nK_, hK,
                                     order_);
          acc += k_coef_[j] * dK;
        }
        out[i * nr_ + j] = -acc;
      }
    });
  }

 private:
  Axis K_, r_;
  int order_;
  std::size_t nK_, nr_;
  std::vector<double> k_coef_, decay_;
  double two_gamma_ = 0.0;
  double hbar_over_m_ = 0.0;
  bool has_k_term_ = true;
};

// Position-space operator for rho(R, r).
class PositionOperator {
 public:
  PositionOperator(const Axis& R, const Axis& r, const ModelParams& params, int order)
      : R_(R), r_(r), order_(order), nR_(R.size()), nr_(r.size()), dr_buf_(nR_ * nr_) {
    check_order(order);
    hbar_over_m_ = params.hbar() / params.mass();
    two_gamma_ = 2.0 * params.gamma();
    diff_ = params.diffusion() / (4.0 * params.hbar() * params.hbar());
    potential_ = params.mass() * params.omega() * params.omega() / params.hbar();
  }

  void operator()(std::span<const Complex> f, std::span<Complex> out) {
    differentiate(f, dr_buf_, nR_, nr_, 1, r_.step(), order_);
    const std::span<const Complex> drf(dr_buf_);
    const Complex i_unit(0.0, 1.0);
    parallel_for(nR_, [&](std::size_t i) {
      const double R = R_[i];
      for (std::size_t j = 0; j < nr_; ++j) {
        const Complex mixed =
            stencil([&](std::size_t q) { return drf[q * nr_ + j]; }, i, nR_, R_.step(), order_);
        const double r = r_[j];
        const Complex acc = i_unit * hbar_over_m_ * mixed + two_gamma_ * r * drf[i * nr_ + j] +
                            diff_ * r * r * f[i * nr_ + j] -
                            i_unit * potential_ * r * R * f[i * nr_ + j];
        out[i * nr_ + j] = -acc;
      }
    });
  }

 private:
  Axis R_, r_;
  int order_;
  std::size_t nR_, nr_;
  std::vector<Complex> dr_buf_;
  double hbar_over_m_ = 0.0, two_gamma_ = 0.0, diff_ = 0.0, potential_ = 0.0;
};

std::size_t step_count(double t, double dt) {
  return static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
}

void require_stable(double dt, double limit) {
  if (dt > limit) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the stability limit " << limit;
    throw Error(ErrorCode::StabilityViolation, os.str());
  }
}

void check_leak(double fraction, const OracleConfig& config) {
  if (config.check_boundary && fraction > config.boundary_leak_tolerance) {
    std::ostringstream os;
    os << "fraction " << fraction << " of the norm reached the grid edge";
    throw Error(ErrorCode::BoundaryLeak, os.str());
  }
}

}  // namespace

double stability_limit(const Axis& K, const Axis& r, const ModelParams& params,
                       const OracleConfig& config) {
  check_order(config.stencil_order);
  const double kw = modified_wavenumber(config.stencil_order);
  const double rmax = r.half_width();
  const double kmax = K.half_width();
  const double m = params.mass();
  const double hb = params.hbar();
  const double v_r = 2.0 * params.gamma() * rmax + hb * kmax / m;
  const double v_K = m * params.omega() * params.omega() * rmax / hb;
  const double decay = params.diffusion() * rmax * rmax / (4.0 * hb * hb);
  return config.stability_constant / (kw * (v_r / r.step() + v_K / K.step()) + decay);
}

double stability_limit_position(const Axis& R, const Axis& r, const ModelParams& params,
                                const OracleConfig& config) {
  check_order(config.stencil_order);
  const double kw = modified_wavenumber(config.stencil_order);
  const double m = params.mass();
  const double hb = params.hbar();
  const double rmax = r.half_width();
  const double mixed = hb / m * (kw / R.step()) * (kw / r.step());
  const double advect = kw * 2.0 * params.gamma() * rmax / r.step();
  const double potential = m * params.omega() * params.omega() * rmax * R.half_width() / hb;
  const double decay = params.diffusion() * rmax * rmax / (4.0 * hb * hb);
  return config.stability_constant / (mixed + advect + potential + decay);
}

void differentiate(std::span<const Complex> f, std::span<Complex> out, std::size_t n1,
                   std::size_t n2, int axis, double step, int order) {
  check_order(order);
  if (axis == 1) {
    parallel_for(n1, [&](std::size_t i) {
      const Complex* row = f.data() + i * n2;
      for (std::size_t j = 0; j < n2; ++j)
        out[i * n2 + j] = stencil([&](std::size_t q) { return row[q]; }, j, n2, step, order);
    });
  } else {
    parallel_for(n1, [&](std::size_t i) {
      for (std::size_t j = 0; j < n2; ++j)
        out[i * n2 + j] =
            stencil([&](std::size_t q) { return f[q * n2 + j]; }, i, n1, step, order);
    });
  }
}

CharGrid rhs(const CharGrid& rho, const ModelParams& params, int stencil_order) {
  CharGrid out(rho.first_axis(), rho.second_axis());
  CharOperator op(rho.first_axis(), rho.second_axis(), params, stencil_order);
  op(rho.values(), out.values());
  return out;
}

std::vector<CharGrid> evolve(const CharGrid& initial, std::span<const double> times,
                             const OracleConfig& config, const ModelParams& params,
                             OracleDiagnostics* diagnostics) {
  const Axis& K = initial.first_axis();
  const Axis& r = initial.second_axis();
  require_stable(config.dt, stability_limit(K, r, params, config));
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
    throw Error(ErrorCode::InvalidParameter, "output times must be ascending and >= 0");

  CharOperator op(K, r, params, config.stencil_order);
  Rk4 rk(initial.size());
  std::vector<Complex> y(initial.values().begin(), initial.values().end());
  const auto rate = [&](const std::vector<Complex>& in, std::vector<Complex>& out) { op(in, out); };

  const std::size_t origin = K.zero_index() * r.size() + r.zero_index();
  OracleDiagnostics diag;
  std::vector<CharGrid> out;
  double now = 0.0;
  for (double target : times) {
    const double span = target - now;
    if (span > 0.0) {
      const std::size_t n = step_count(span, config.dt);
      const double h = span / static_cast<double>(n);
      for (std::size_t s = 0; s < n; ++s) rk.step(y, h, rate);
      diag.steps += n;
      diag.dt = h;
      now = target;
    }
    CharGrid g(K, r);
    std::copy(y.begin(), y.end(), g.values().begin());
    diag.boundary_fraction =
        std::max(diag.boundary_fraction, boundary_fraction(y, K.size(), r.size(), 4));
    check_leak(diag.boundary_fraction, config);
    out.push_back(std::move(g));
  }
  diag.trace_drift = std::abs(y[origin] - initial.values()[origin]);
  if (diagnostics) *diagnostics = diag;
  return out;
}

CharGrid evolve(const CharGrid& initial, double t, const OracleConfig& config,
                const ModelParams& params, OracleDiagnostics* diagnostics) {
  const double times[] = {t};
  return std::move(evolve(initial, times, config, params, diagnostics).front());
}

PositionGrid rhs_position(const PositionGrid& rho, const ModelParams& params, int stencil_order) {
  PositionGrid out(rho.first_axis(), rho.second_axis());
  PositionOperator op(rho.first_axis(), rho.second_axis(), params, stencil_order);
  op(rho.values(), out.values());
  return out;
}

PositionGrid evolve_position(const PositionGrid& initial, double t, const OracleConfig& config,
                             const ModelParams& params, OracleDiagnostics* diagnostics) {
  const Axis& R = initial.first_axis();
  const Axis& r = initial.second_axis();
  require_stable(config.dt, stability_limit_position(R, r, params, config));
  if (t < 0.0) throw Error(ErrorCode::InvalidParameter, "time must be >= 0");

  PositionOperator op(R, r, params, config.stencil_order);
  Rk4 rk(initial.size());
  std::vector<Complex> y(initial.values().begin(), initial.values().end());
  OracleDiagnostics diag;
  if (t > 0.0) {
    const std::size_t n = step_count(t, config.dt);
    const double h = t / static_cast<double>(n);
    const auto rate = [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
      op(in, out);
    };
    for (std::size_t s = 0; s < n; ++s) rk.step(y, h, rate);
    diag.steps = n;
    diag.dt = h;
  }
  PositionGrid out(R, r);
  std::copy(y.begin(), y.end(), out.values().begin());
  diag.boundary_fraction = boundary_fraction(y, R.size(), r.size(), 4);
  diag.trace_drift = std::abs(trace(out) - trace(initial));
  check_leak(diag.boundary_fraction, config);
  if (diagnostics) *diagnostics = diag;
  return out;
}

double richardson_error_estimate(const std::function<CharGrid(const Axis&, const Axis&)>& render,
                                 const Axis& K, const Axis& r, double t,
                                 const OracleConfig& config, const ModelParams& params) {
  const Axis K_fine(2 * K.size(), K.half_width());
  const Axis r_fine(2 * r.size(), r.half_width());
  OracleConfig fine_config = config;
  fine_config.dt = 0.5 * config.dt;
  const auto coarse = evolve(render(K, r), t, config, params);
  const auto fine = evolve(render(K_fine, r_fine), t, fine_config, params);
  const double order = static_cast<double>(config.stencil_order);
  const double factor = std::pow(2.0, order) / (std::pow(2.0, order) - 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < K.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      worst = std::max(worst, std::abs(coarse(i, j) - fine(2 * i, 2 * j)));
  return factor * worst;
}

}  // namespace clme
