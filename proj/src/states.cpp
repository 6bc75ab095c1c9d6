#include "clme/states.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "clme/hermite.hpp"
#include "clme/parallel.hpp"
#include "clme/transforms.hpp"

namespace clme {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;

// A superposition of equal-width Gaussians with a common momentum kick:
// psi(x) = norm * sum_a c_a g(x - mu_a) exp(i p0 x / hbar).
struct GaussianSuperposition {
  std::vector<double> centers;
  std::vector<Complex> weights;
  double sigma;
  double p0;
  double hbar;
  double norm2;  // |norm|^2

  Complex wavefunction(double x) const {
    const double g0 = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi * sigma * sigma));
    Complex sum = 0.0;
    for (std::size_t a = 0; a < centers.size(); ++a) {
      const double u = x - centers[a];
      sum += weights[a] * std::exp(-u * u / (4.0 * sigma * sigma));
    }
    return std::sqrt(norm2) * g0 * sum * std::polar(1.0, p0 * x / hbar);
  }

  Complex density(double R, double r) const {
    return wavefunction(R - 0.5 * r) * std::conj(wavefunction(R + 0.5 * r));
  }

  Complex char_function(double K, double r) const {
    Complex sum = 0.0;
    for (std::size_t a = 0; a < centers.size(); ++a)
      for (std::size_t b = 0; b < centers.size(); ++b) {
        const double shift = r + centers[a] - centers[b];
        sum += weights[a] * std::conj(weights[b]) *
               std::polar(std::exp(-shift * shift / (8.0 * sigma * sigma)),
                          -0.5 * K * (centers[a] + centers[b]));
      }
    return norm2 * kInvSqrt2Pi * std::exp(-0.5 * sigma * sigma * K * K) *
           std::polar(1.0, -p0 * r / hbar) * sum;
  }
};

RealizedState from_superposition(GaussianSuperposition sup) {
  RealizedState s;
  s.provenance = Provenance::Analytic;
  s.pure = true;
  double extent = sup.sigma;
  for (double c : sup.centers) extent = std::max(extent, std::abs(c) + sup.sigma);
  s.length_scale = extent;
  s.char_function = [sup](double K, double r) { return sup.char_function(K, r); };
  s.density = [sup = std::move(sup)](double R, double r) { return sup.density(R, r); };
  return s;
}

void require_oscillator(const ModelParams& params, const char* what) {
  if (params.free_particle()) {
    std::ostringstream os;
    os << what << " states need omega > 0";
    throw Error(ErrorCode::InvalidParameter, os.str());
  }
}

double keys_weight(double x) {
  x = std::abs(x);
  if (x <= 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
  if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
  return 0.0;
}

}  // namespace

std::pair<double, double> thermal_variances(const ModelParams& params, double kT) {
  require_oscillator(params, "thermal");
  const double hw = params.hbar() * params.omega();
  const double coth = kT > 0.0 ? 1.0 / std::tanh(hw / (2.0 * kT)) : 1.0;
  const double sx2 = params.hbar() / (2.0 * params.mass() * params.omega()) * coth;
  const double sp2 = params.mass() * params.omega() * params.hbar() / 2.0 * coth;
  return {sx2, sp2};
}

RealizedState realize(const StateSpec& spec, const ModelParams& params,
                      const RealizeOptions& opts) {
  validate(spec);
  const double hbar = params.hbar();

  if (const auto* g = std::get_if<GaussianSpec>(&spec)) {
    return from_superposition({{g->x0}, {Complex(1.0)}, g->sigma, g->p0, hbar, 1.0});
  }

  if (const auto* c = std::get_if<CatSpec>(&spec)) {
    const double overlap = std::exp(-c->separation * c->separation / (8.0 * c->sigma * c->sigma));
    const double denom = 2.0 + 2.0 * overlap * std::cos(c->phase);
    if (denom < 1e-12)
      throw Error(ErrorCode::InvalidParameter, "cat components cancel; state is not normalizable");
    return from_superposition({{c->x0 + 0.5 * c->separation, c->x0 - 0.5 * c->separation},
                               {Complex(1.0), std::polar(1.0, c->phase)},
                               c->sigma,
                               c->p0,
                               hbar,
                               1.0 / denom});
  }

  if (const auto* th = std::get_if<ThermalSpec>(&spec)) {
    const auto [sx2, sp2] = thermal_variances(params, th->kT);
    RealizedState s;
    s.provenance = Provenance::Analytic;
    s.pure = th->kT == 0.0;
    s.length_scale = std::sqrt(sx2);
    const double sx = std::sqrt(sx2);
    s.char_function = [sx2, sp2, hbar](double K, double r) {
      return Complex(kInvSqrt2Pi * std::exp(-0.5 * sx2 * K * K - 0.5 * sp2 * r * r / (hbar * hbar)));
    };
    s.density = [sx, sx2, sp2, hbar](double R, double r) {
      return Complex(kInvSqrt2Pi / sx *
                     std::exp(-0.5 * R * R / sx2 - 0.5 * sp2 * r * r / (hbar * hbar)));
    };
    return s;
  }

  const auto& fock = std::get<FockSpec>(spec);
  require_oscillator(params, "Fock");
  if (fock.n > 60) throw Error(ErrorCode::InvalidParameter, "Fock index limited to n <= 60");
  const OscillatorBasis basis(params.mass(), params.omega(), hbar, fock.n);
  const int n = fock.n;

  RealizedState s;
  s.provenance = Provenance::Gridded;
  s.pure = true;
  s.length_scale = basis.length() * std::sqrt(n + 1.0);
  s.density = [basis, n](double R, double r) {
    return Complex(basis(n, R - 0.5 * r) * basis(n, R + 0.5 * r));
  };

  const Axis R(opts.gridded_R_points, opts.gridded_R_half_width * s.length_scale);
  const Axis r(opts.gridded_r_points, opts.gridded_r_half_width * s.length_scale);
  s.char_function = interpolate(to_char(render_position(s, R, r)));
  return s;
}

PositionGrid render_position(const RealizedState& state, const Axis& R, const Axis& r) {
  PositionGrid out(R, r);
  parallel_for(R.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < r.size(); ++j) out(i, j) = state.density(R[i], r[j]);
  });
  return out;
}

CharGrid render_char(const RealizedState& state, const Axis& K, const Axis& r) {
  CharGrid out(K, r);
  parallel_for(K.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < r.size(); ++j) out(i, j) = state.char_function(K[i], r[j]);
  });
  return out;
}

void check_fits(const RealizedState& state, const Axis& R, const Axis& r, double tolerance) {
  const auto rho = render_position(state, R, r);
  TransformOptions opts;
  opts.alias_tolerance = tolerance;
  (void)to_char(rho, opts);  // checks R support and K bandwidth
  const double r_edge = edge_fraction(rho, 1);
  if (r_edge > tolerance) {
    std::ostringstream os;
    os << "coherences exceed the r half-width (edge fraction " << r_edge << ")";
    throw Error(ErrorCode::AliasingError, os.str());
  }
}

CharFunction interpolate(CharGrid grid) {
  auto g = std::make_shared<const CharGrid>(std::move(grid));
  return [g](double K, double r) -> Complex {
    const Axis& ka = g->first_axis();
    const Axis& ra = g->second_axis();
    const double u = (K - ka[0]) / ka.step();
    const double v = (r - ra[0]) / ra.step();
    const auto nk = static_cast<long>(ka.size());
    const auto nr = static_cast<long>(ra.size());
    if (u < -2.0 || v < -2.0 || u > static_cast<double>(nk + 1) || v > static_cast<double>(nr + 1))
      return 0.0;
    const long i0 = static_cast<long>(std::floor(u));
    const long j0 = static_cast<long>(std::floor(v));
    std::array<double, 4> wu{}, wv{};
    for (int a = 0; a < 4; ++a) {
      wu[a] = keys_weight(u - static_cast<double>(i0 - 1 + a));
      wv[a] = keys_weight(v - static_cast<double>(j0 - 1 + a));
    }
    Complex sum = 0.0;
    for (int a = 0; a < 4; ++a) {
      const long i = i0 - 1 + a;
      if (i < 0 || i >= nk) continue;
      Complex row = 0.0;
      for (int b = 0; b < 4; ++b) {
        const long j = j0 - 1 + b;
        if (j < 0 || j >= nr) continue;
        row += wv[b] * (*g)(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      sum += wu[a] * row;
    }
    return sum;
  };
}

PurityReport purity_report(const PositionGrid& rho) {
  const double value = l2_norm_squared(rho);
  const double edge = std::max(edge_fraction(rho, 0), edge_fraction(rho, 1));
  return {value, edge, edge > 1e-6};
}

double purity(const PositionGrid& rho) { return purity_report(rho).value; }

}  // namespace clme
