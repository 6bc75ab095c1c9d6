#include "clme/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "clme/hermite.hpp"
#include "clme/states.hpp"

namespace clme {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;

void require_oscillator(const ModelParams& params) {
  if (params.free_particle())
    throw Error(ErrorCode::InvalidParameter, "oscillator analysis requires omega > 0");
}

}  // namespace

// ---------------------------------------------------------------------------

Complex StationaryState::char_value(double K, double r) const {
  return kInvSqrt2Pi * std::exp(-k_coef * K * K - r_coef * r * r);
}

Complex StationaryState::density(double R, double r) const {
  const double x = R + 0.5 * r;
  const double xp = R - 0.5 * r;
  return A * std::exp(-alpha_plus * (x * x + xp * xp) - 2.0 * alpha_minus * x * xp);
}

CharFunction StationaryState::char_function() const {
  return [s = *this](double K, double r) { return s.char_value(K, r); };
}

StationaryState stationary_state(const ModelParams& params) {
  require_oscillator(params);
  const double m = params.mass();
  const double g = params.gamma();
  const double w = params.omega();
  const double hb = params.hbar();
  const double D = params.diffusion();

  StationaryState s;
  s.k_coef = D / (16.0 * m * m * w * w * g);
  s.r_coef = D / (16.0 * g * hb * hb);
  s.A = 4.0 * m * w * std::sqrt(g / (4.0 * std::numbers::pi * D));
  s.alpha_plus = m * m * w * w * g / D + D / (16.0 * hb * hb * g);
  s.alpha_minus = m * m * w * w * g / D - D / (16.0 * hb * hb * g);
  s.regime_warning = g < 5.0 * w;
  return s;
}

Complex asymptotic_char_value(double K, double r, const ModelParams& params) {
  const auto ch = characteristics(params);
  return kInvSqrt2Pi * std::exp(ch.alpha * z_factor_asymptotic(K, r, ch));
}

std::vector<double> eigen_spectrum_analytic(const ModelParams& params, int n_max) {
  require_oscillator(params);
  if (n_max < 0) throw Error(ErrorCode::InvalidParameter, "n_max must be >= 0");
  const double c = params.pure_state_diffusion();
  const double D = params.diffusion();
  if (D < c) {
    std::ostringstream os;
    os << "D = " << D << " is below 4 m gamma hbar omega = " << c;
    throw Error(ErrorCode::InvalidParameter, os.str());
  }
  const double first = 2.0 * c / (D + c);
  const double ratio = (D - c) / (D + c);
  std::vector<double> out(n_max + 1);
  double term = first;
  for (int n = 0; n <= n_max; ++n) {
    out[n] = term;
    term *= ratio;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> Spectrum::diagonal() const {
  std::vector<double> d(matrix.rows());
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) d[i] = matrix(i, i).real();
  return d;
}

Spectrum project_energy_basis(const PositionGrid& rho, const ModelParams& params, int n_max,
                              double orthonormality_tolerance) {
  require_oscillator(params);
  const OscillatorBasis basis(params.mass(), params.omega(), params.hbar(), n_max);
  const Axis& R = rho.first_axis();
  const Axis& r = rho.second_axis();
  const int nb = n_max + 1;

  Spectrum out;

  // Self-test: orthonormality on the finest x spacing the quadrature uses.
  {
    const double h = std::min(R.step(), 0.5 * r.step());
    const auto nx = static_cast<std::size_t>(std::ceil(2.0 * R.half_width() / h));
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nb, nb);
    std::vector<double> phi(nb);
    for (std::size_t k = 0; k < nx; ++k) {
      basis.evaluate(-R.half_width() + static_cast<double>(k) * h, phi);
      const Eigen::Map<const Eigen::VectorXd> v(phi.data(), nb);
      gram.noalias() += h * v * v.transpose();
    }
    out.orthonormality_error = (gram - Eigen::MatrixXd::Identity(nb, nb)).cwiseAbs().maxCoeff();
    if (out.orthonormality_error > orthonormality_tolerance) {
      std::ostringstream os;
      os << "basis up to n = " << n_max << " is not resolved on the grid (orthonormality error "
         << out.orthonormality_error << ")";
      throw Error(ErrorCode::ResolutionError, os.str());
    }
  }

  // M = Phi_-^T diag(rho w) Phi_+ with Phi_pm(point, n) = phi_n(R +- r/2).
  const std::size_t npts = R.size() * r.size();
  Eigen::MatrixXd bra(npts, nb);
  Eigen::MatrixXd ket(npts, nb);
  Eigen::VectorXcd weights(npts);
  std::vector<double> phi(nb);
  const double cell = R.step() * r.step();
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) {
      const std::size_t p = i * r.size() + j;
      basis.evaluate(R[i] - 0.5 * r[j], phi);
      bra.row(p) = Eigen::Map<const Eigen::RowVectorXd>(phi.data(), nb);
      basis.evaluate(R[i] + 0.5 * r[j], phi);
      ket.row(p) = Eigen::Map<const Eigen::RowVectorXd>(phi.data(), nb);
      weights(p) = rho(i, j) * cell;
    }
  out.matrix = bra.cast<Complex>().transpose() * (weights.asDiagonal() * ket.cast<Complex>());

  // Round-off leaves M Hermitian to ~1e-16; diagonalize the Hermitian part
  // and report the anti-Hermitian part's effect as the imaginary residue.
  const Eigen::MatrixXcd herm = 0.5 * (out.matrix + out.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.eigenvalues.rbegin(), out.eigenvalues.rend());
  out.eigen_imag_residue = (0.5 * (out.matrix - out.matrix.adjoint())).norm();

  double off2 = 0.0;
  double diag2 = 0.0;
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      const double v = std::norm(out.matrix(a, b));
      (a == b ? diag2 : off2) += v;
    }
  out.offdiag_norm = std::sqrt(off2);
  out.offdiag_ratio = diag2 > 0.0 ? std::sqrt(off2 / diag2) : 0.0;
  return out;
}

double hermite_identity_residual(int n, double alpha, double y) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidParameter, "Hermite identity needs 0 < alpha < 1");
  // The integrand is a Gaussian times a polynomial; the trapezoid rule on a
  // uniform grid is spectrally accurate for it.
  const double half = 14.0;
  const double h = 1.0 / 64.0;
  const auto count = static_cast<int>(2.0 * half / h);
  double sum = 0.0;
  for (int k = 0; k <= count; ++k) {
    const double u = -half + k * h;
    sum += std::exp(-u * u) * hermite_polynomial(n, alpha * (y + u));
  }
  sum *= h;
  const double s = std::sqrt(1.0 - alpha * alpha);
  const double rhs =
      std::sqrt(std::numbers::pi) * std::pow(s, n) * hermite_polynomial(n, alpha * y / s);
  return std::abs(sum - rhs) / std::max(1.0, std::abs(rhs));
}

// ---------------------------------------------------------------------------

Uncertainties uncertainties(const WignerGrid& w) {
  double s0 = 0.0, sx = 0.0, sp = 0.0;
  for (std::size_t i = 0; i < w.x.size(); ++i)
    for (std::size_t j = 0; j < w.p.size(); ++j) {
      const double v = w(i, j);
      s0 += v;
      sx += v * w.x[i];
      sp += v * w.p[j];
    }
  Uncertainties u;
  u.mean_x = sx / s0;
  u.mean_p = sp / s0;
  double vx = 0.0, vp = 0.0;
  for (std::size_t i = 0; i < w.x.size(); ++i)
    for (std::size_t j = 0; j < w.p.size(); ++j) {
      const double v = w(i, j);
      const double dx = w.x[i] - u.mean_x;
      const double dp = w.p[j] - u.mean_p;
      vx += v * dx * dx;
      vp += v * dp * dp;
    }
  u.dx = std::sqrt(vx / s0);
  u.dp = std::sqrt(vp / s0);
  return u;
}

Uncertainties uncertainties(const StationaryState&, const ModelParams& params) {
  require_oscillator(params);
  const double m = params.mass();
  const double g = params.gamma();
  const double w = params.omega();
  const double D = params.diffusion();
  Uncertainties u;
  u.dx = std::sqrt(D / (8.0 * m * m * g * w * w));
  u.dp = std::sqrt(D / (8.0 * g));
  return u;
}

double linear_entropy(const PositionGrid& rho) { return trace(rho) - purity(rho); }

double stationary_purity(const ModelParams& params) {
  require_oscillator(params);
  return params.pure_state_diffusion() / params.diffusion();
}

double stationary_linear_entropy(const ModelParams& params) {
  return 1.0 - stationary_purity(params);
}

// ---------------------------------------------------------------------------

std::vector<AuditSample> make_audit_samples(std::size_t count, double K_max, double r_max,
                                            double t_max, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  // Raw draws mapped by hand: std::uniform_real_distribution is not
  // guaranteed to give the same values across standard libraries.
  const auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<AuditSample> out(count);
  for (auto& s : out) {
    s.K = K_max * (2.0 * unit() - 1.0);
    s.r = r_max * (2.0 * unit() - 1.0);
    s.t = t_max * unit();
  }
  return out;
}

AuditReport factorization_audit(const CharFunction& a, const CharFunction& b,
                                const ModelParams& params, std::span<const AuditSample> samples,
                                double threshold) {
  AuditReport rep;
  for (const auto& s : samples) {
    const auto foot = params.free_particle() ? free_shift_args(s.K, s.r, s.t, params)
                                             : shift_args(s.K, s.r, s.t, characteristics(params));
    const Complex a0 = a(foot.K, foot.r);
    const Complex b0 = b(foot.K, foot.r);
    if (std::abs(a0) <= threshold || std::abs(b0) <= threshold) {
      ++rep.rejected;
      continue;
    }
    const Complex ratio_a = evaluate_exact(a, s.K, s.r, s.t, params) / a0;
    const Complex ratio_b = evaluate_exact(b, s.K, s.r, s.t, params) / b0;
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(ratio_a / ratio_b - 1.0));
    ++rep.accepted;
  }
  return rep;
}

DecayReport free_particle_diagonalization(std::span<const std::pair<double, CharGrid>> snapshots,
                                          const ModelParams& params, double min_gamma_t) {
  if (!params.free_particle())
    throw Error(ErrorCode::InvalidParameter, "decay fit applies to the free particle (omega = 0)");
  if (snapshots.empty() || snapshots.front().first != 0.0)
    throw Error(ErrorCode::FitDiverged, "first snapshot must be at t = 0");

  const double m = params.mass();
  const double g = params.gamma();
  const double hb = params.hbar();
  DecayReport rep;
  rep.expected_rate = params.diffusion() / (16.0 * m * m * g * g);

  const CharGrid& initial = snapshots.front().second;
  const Axis& K = initial.first_axis();
  const Axis& r = initial.second_axis();
  const std::size_t j0 = r.zero_index();
  const std::size_t i0 = K.zero_index();

  std::vector<std::size_t> late;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    rep.trace_drift =
        std::max(rep.trace_drift, std::abs(snapshots[s].second(i0, j0) - initial(i0, j0)));
    if (g * snapshots[s].first >= min_gamma_t) late.push_back(s);
  }
  if (late.size() < 2) throw Error(ErrorCode::FitDiverged, "need two snapshots with gamma t >= 3");

  // Per-mode least-squares slope of -log|rho~(K,0,t)/rho~(K,0,0)| in t,
  // then c = sum s_K K^2 / sum K^4.
  const double peak = std::abs(initial(i0, j0));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 1; i < K.size(); ++i) {
    if (i == i0) continue;
    const double a0 = std::abs(initial(i, j0));
    if (a0 < 1e-8 * peak) continue;
    bool usable = true;
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t s : late) {
      const double v = std::abs(snapshots[s].second(i, j0));
      if (!(v > 1e-250)) {
        usable = false;
        break;
      }
      const double t = snapshots[s].first;
      const double y = -std::log(v / a0);
      st += t;
      sy += y;
      stt += t * t;
      sty += t * y;
    }
    if (!usable) continue;
    const double n = static_cast<double>(late.size());
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    const double k2 = K[i] * K[i];
    num += slope * k2;
    den += k2 * k2;
    ++rep.fitted_modes;
  }
  if (rep.fitted_modes == 0 || !(den > 0.0))
    throw Error(ErrorCode::FitDiverged, "no K modes with usable amplitude");
  rep.fitted_rate = num / den;
  if (!std::isfinite(rep.fitted_rate)) throw Error(ErrorCode::FitDiverged, "non-finite fit");
  rep.relative_error = std::abs(rep.fitted_rate - rep.expected_rate) / rep.expected_rate;

  const CharGrid& last = snapshots.back().second;
  const double profile = params.diffusion() / (16.0 * g * hb * hb);
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double expected = kInvSqrt2Pi * std::exp(-profile * r[j] * r[j]);
    rep.limit_profile_error = std::max(rep.limit_profile_error, std::abs(last(i0, j) - expected));
  }
  return rep;
}

}  // namespace clme
