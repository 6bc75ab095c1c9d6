#include "clme/exact_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clme/parallel.hpp"

namespace clme {

namespace {

// e^z - 1 without cancellation for small |z|.
Complex expm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// 1 - e^{-z}
Complex one_minus_exp_neg(Complex z) { return -expm1(-z); }

}  // namespace

Characteristics characteristics(const ModelParams& params) {
  if (params.free_particle())
    throw Error(ErrorCode::FreeParticle, "omega = 0: use the free-particle propagator");
  const double m = params.mass();
  const double g = params.gamma();
  const double w = params.omega();
  const double hb = params.hbar();
  if (near_critical(g, w))
    throw Error(ErrorCode::CriticalDamping, "the characteristic solution is singular at gamma = omega");
  const double disc = g * g - w * w;

  const Complex root = std::sqrt(Complex(disc, 0.0));
  const double scale = hb / (m * w * w);

  Characteristics ch;
  ch.lambda_plus = scale * (g + root);
  ch.lambda_minus = scale * (g - root);
  ch.alpha = params.diffusion() / (16.0 * m * m * disc);
  ch.mass = m;
  ch.hbar = hb;
  ch.gamma = g;
  if (std::abs(ch.lambda_plus - ch.lambda_minus) <
      std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon())
    throw Error(ErrorCode::DegenerateLambda, "lambda_plus and lambda_minus coincide");
  return ch;
}

ShiftedArgs shift_args(double K, double r, double t, const Characteristics& ch) {
  const Complex& lp = ch.lambda_plus;
  const Complex& lm = ch.lambda_minus;
  const Complex up = (K - r / lp) * std::exp(-ch.hbar * t / (ch.mass * lp));
  const Complex um = (K - r / lm) * std::exp(-ch.hbar * t / (ch.mass * lm));
  const Complex denom = lp - lm;
  const Complex k_foot = (up * lp - um * lm) / denom;
  const Complex r_foot = (up - um) * (lp * lm / denom);
  return {k_foot.real(), r_foot.real(), std::max(std::abs(k_foot.imag()), std::abs(r_foot.imag()))};
}

double z_factor(double K, double r, double t, const Characteristics& ch) {
  const Complex& lp = ch.lambda_plus;
  const Complex& lm = ch.lambda_minus;
  const Complex ap = K - r / lp;
  const Complex am = K - r / lm;
  const double m = ch.mass;
  const double hb = ch.hbar;

  const Complex cross = ap * am * one_minus_exp_neg(2.0 * ch.gamma * t) / ch.gamma;
  const Complex plus = (m * lp / (2.0 * hb)) * ap * ap * one_minus_exp_neg(2.0 * hb * t / (m * lp));
  const Complex minus =
      (m * lm / (2.0 * hb)) * am * am * one_minus_exp_neg(2.0 * hb * t / (m * lm));
  return (cross - plus - minus).real();
}

double z_factor_asymptotic(double K, double r, const Characteristics& ch) {
  const Complex& lp = ch.lambda_plus;
  const Complex& lm = ch.lambda_minus;
  const Complex ap = K - r / lp;
  const Complex am = K - r / lm;
  const double m = ch.mass;
  const double hb = ch.hbar;
  const Complex z = ap * am / ch.gamma - (m * lp / (2.0 * hb)) * ap * ap -
                    (m * lm / (2.0 * hb)) * am * am;
  return z.real();
}

ShiftedArgs free_shift_args(double K, double r, double t, const ModelParams& params) {
  const double fixed = params.hbar() * K / (2.0 * params.mass() * params.gamma());
  return {K, fixed + (r - fixed) * std::exp(-2.0 * params.gamma() * t), 0.0};
}

double free_exponent(double K, double r, double t, const ModelParams& params) {
  const double m = params.mass();
  const double g = params.gamma();
  const double hb = params.hbar();
  const double fixed = hb * K / (2.0 * m * g);
  // r - r' = (r - fixed)(1 - e^{-2 gamma t})
  const double shift = -(r - fixed) * std::expm1(-2.0 * g * t);
  const double r_foot = r - shift;
  const double bracket = K * K * t + (m * shift / hb) * ((r + r_foot) * m * g / hb + K);
  return -params.diffusion() / (16.0 * m * m * g * g) * bracket;
}

Complex evaluate_exact(const CharFunction& rho0, double K, double r, double t,
                       const ModelParams& params) {
  if (params.free_particle()) {
    const auto foot = free_shift_args(K, r, t, params);
    return rho0(foot.K, foot.r) * std::exp(free_exponent(K, r, t, params));
  }
  const auto ch = characteristics(params);
  const auto foot = shift_args(K, r, t, ch);
  return rho0(foot.K, foot.r) * std::exp(ch.alpha * z_factor(K, r, t, ch));
}

CharFunction evolved(CharFunction rho0, double t, const ModelParams& params) {
  if (t < 0.0) throw Error(ErrorCode::InvalidParameter, "time must be >= 0");
  if (params.free_particle()) {
    return [rho0 = std::move(rho0), t, params](double K, double r) {
      const auto foot = free_shift_args(K, r, t, params);
      return rho0(foot.K, foot.r) * std::exp(free_exponent(K, r, t, params));
    };
  }
  return [rho0 = std::move(rho0), t, ch = characteristics(params)](double K, double r) {
    const auto foot = shift_args(K, r, t, ch);
    return rho0(foot.K, foot.r) * std::exp(ch.alpha * z_factor(K, r, t, ch));
  };
}

namespace {

template <class PointFn>
CharGrid fill_grid(const Axis& K, const Axis& r, PointFn&& point) {
  CharGrid out(K, r);
  const std::size_t nr = r.size();
  parallel_for(K.size(), [&](std::size_t i) {
    const double k = K[i];
    for (std::size_t j = 0; j < nr; ++j) out(i, j) = point(k, r[j]);
  });
  return out;
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidParameter, "time must be finite and >= 0");
}

}  // namespace

CharGrid propagate_oscillator(const CharFunction& rho0, double t, const ModelParams& params,
                              const Axis& K, const Axis& r) {
  check_time(t);
  if (!rho0) throw Error(ErrorCode::InvalidParameter, "initial characteristic function is empty");
  const auto ch = characteristics(params);
  return fill_grid(K, r, [&](double k, double rr) {
    const auto foot = shift_args(k, rr, t, ch);
    return rho0(foot.K, foot.r) * std::exp(ch.alpha * z_factor(k, rr, t, ch));
  });
}

CharGrid propagate_free(const CharFunction& rho0, double t, const ModelParams& params,
                        const Axis& K, const Axis& r) {
  check_time(t);
  if (!rho0) throw Error(ErrorCode::InvalidParameter, "initial characteristic function is empty");
  if (!params.free_particle())
    throw Error(ErrorCode::InvalidParameter, "free-particle propagator requires omega = 0");
  return fill_grid(K, r, [&](double k, double rr) {
    const auto foot = free_shift_args(k, rr, t, params);
    return rho0(foot.K, foot.r) * std::exp(free_exponent(k, rr, t, params));
  });
}

CharGrid propagate(const CharFunction& rho0, double t, const ModelParams& params, const Axis& K,
                   const Axis& r) {
  return params.free_particle() ? propagate_free(rho0, t, params, K, r)
                                : propagate_oscillator(rho0, t, params, K, r);
}

double consistency_check_omega_limit(const CharFunction& rho0, double t,
                                     const ModelParams& small_omega,
                                     std::span<const std::array<double, 2>> samples) {
  if (small_omega.omega() > 1e-3 * small_omega.gamma())
    throw Error(ErrorCode::InvalidParameter, "omega-limit check requires omega <= 1e-3 gamma");
  const auto free = small_omega.free_particle()
                        ? small_omega
                        : make_params({small_omega.mass(), small_omega.gamma(), 0.0,
                                       small_omega.hbar(),
                                       ExplicitDiffusion{small_omega.diffusion()}});
  double worst = 0.0;
  for (const auto& [K, r] : samples) {
    const Complex a = evaluate_exact(rho0, K, r, t, small_omega);
    const Complex b = evaluate_exact(rho0, K, r, t, free);
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

}  // namespace clme
