#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "clme/analysis.hpp"
#include "clme/exact_propagator.hpp"
#include "clme/hermite.hpp"
#include "clme/states.hpp"
#include "clme/transforms.hpp"

using namespace clme;

namespace {

const ModelParams overdamped = make_params({1, 5, 3, 1, ExplicitDiffusion{60}});
const ModelParams unit_critical = make_params({1, 1, 1, 1, ExplicitDiffusion{8}}, DampingGuard::Waive);

PositionGrid render(const std::function<Complex(double, double)>& f, const Axis& R, const Axis& r) {
  PositionGrid g(R, r);
  for (std::size_t i = 0; i < R.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) g(i, j) = f(R[i], r[j]);
  return g;
}

}  // namespace

TEST_CASE("analytic spectrum") {
  auto half = eigen_spectrum_analytic(unit_critical.with_diffusion(12), 5);
  for (int n = 0; n <= 5; ++n) CHECK(half[n] == doctest::Approx(0.5 * std::pow(0.5, n)));

  auto pure = eigen_spectrum_analytic(overdamped, 10);
  CHECK(pure[0] == 1.0);
  for (int n = 1; n <= 10; ++n) CHECK(pure[n] == 0.0);

  auto mixed = eigen_spectrum_analytic(overdamped.with_diffusion(300), 400);
  CHECK(std::accumulate(mixed.begin(), mixed.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(eigen_spectrum_analytic(overdamped.with_diffusion(59), 4), Error);
}

TEST_CASE("stationary state formulas") {
  auto st = stationary_state(unit_critical);
  CHECK(std::abs(st.char_value(0, 0) - 1.0 / std::sqrt(2 * M_PI)) < 1e-16);
  CHECK(st.alpha_plus == doctest::Approx(1.0 / 8 + 8.0 / 16));
  CHECK(st.alpha_minus == doctest::Approx(1.0 / 8 - 8.0 / 16));
  CHECK(st.alpha_plus > std::abs(st.alpha_minus));
  CHECK(st.regime_warning);
  CHECK_FALSE(stationary_state(make_params({1, 15, 3, 1, ExplicitDiffusion{200}})).regime_warning);

  auto u = uncertainties(st, unit_critical);
  CHECK(u.dx == doctest::Approx(1.0));
  CHECK(u.dp == doctest::Approx(1.0));
  CHECK(stationary_linear_entropy(unit_critical) == doctest::Approx(0.5));

  auto pu = uncertainties(stationary_state(overdamped), overdamped);
  CHECK(pu.product() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("closed-form stationary state equals the t -> inf limit of the propagator") {
  for (const auto& p : {overdamped, make_params({1, 1, 3, 1, ExplicitDiffusion{16}})}) {
    auto st = stationary_state(p);
    for (double K : {-2.0, 0.5})
      for (double r : {-1.0, 0.3}) CHECK(std::abs(asymptotic_char_value(K, r, p) - st.char_value(K, r)) < 1e-15);
  }
}

TEST_CASE("energy-basis projection of a basis projector") {
  const Axis R(256, 8), r(256, 8);
  const OscillatorBasis basis(1, 3, 1, 4);
  auto rho = render([&](double X, double y) { return Complex(basis(2, X - y / 2) * basis(2, X + y / 2)); }, R, r);
  auto spec = project_energy_basis(rho, overdamped, 8);
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n) CHECK(std::abs(spec.matrix(m, n) - (m == 2 && n == 2 ? 1.0 : 0.0)) < 1e-10);
  CHECK(spec.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(spec.offdiag_ratio < 1e-10);
  CHECK(spec.orthonormality_error < 1e-10);
}

TEST_CASE("projection of the stationary state reproduces the analytic spectrum") {
  const auto p = overdamped.with_diffusion(150);
  const Axis R(256, 8), r(256, 8);
  auto st = stationary_state(p);
  auto spec = project_energy_basis(render([&](double X, double y) { return st.density(X, y); }, R, r), p, 24);
  auto analytic = eigen_spectrum_analytic(p, 24);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(spec.eigenvalues[n] - analytic[n]) < 1e-6);
  auto diag = spec.diagonal();
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(diag[n] - analytic[n]) < 1e-6);
  CHECK(spec.offdiag_ratio < 1e-8);
  CHECK(spec.eigen_imag_residue < 1e-10);
}

TEST_CASE("coarse grids fail the orthonormality self-test") {
  const Axis R(16, 8), r(16, 8);
  PositionGrid rho(R, r);
  CHECK_THROWS_AS(project_energy_basis(rho, overdamped, 20), Error);
}

TEST_CASE("Hermite identity") {
  for (double alpha : {0.3, 0.7})
    for (int n = 0; n <= 10; ++n)
      for (double y : {-1.5, 0.0, 0.8}) CHECK(hermite_identity_residual(n, alpha, y) < 1e-8);
  CHECK(hermite_polynomial(3, 2.0) == 8 * 8 - 12 * 2);
}

TEST_CASE("linear entropy") {
  const Axis R(256, 8), r(256, 8);
  auto pure = render_position(realize(CatSpec{0, 2, 0, 0.5, 0}, overdamped), R, r);
  CHECK(std::abs(linear_entropy(pure)) < 1e-10);
  const auto p = overdamped.with_diffusion(120);
  auto st = stationary_state(p);
  auto mixed = render([&](double X, double y) { return st.density(X, y); }, R, r);
  CHECK(linear_entropy(mixed) == doctest::Approx(stationary_linear_entropy(p)).epsilon(1e-10));
  CHECK(stationary_linear_entropy(p) == doctest::Approx(0.5));
}

TEST_CASE("numeric Wigner moments of the stationary state") {
  const Axis R(256, 8), r(256, 8);
  const auto p = overdamped.with_diffusion(120);
  auto st = stationary_state(p);
  auto u = uncertainties(wigner(render([&](double X, double y) { return st.density(X, y); }, R, r), 1.0));
  auto a = uncertainties(st, p);
  CHECK(std::abs(u.dx - a.dx) < 1e-6);
  CHECK(std::abs(u.dp - a.dp) < 1e-6);
}

TEST_CASE("factorization audit") {
  auto g = realize(GaussianSpec{0.5, 1, 0.5}, overdamped).char_function;
  auto cat = realize(CatSpec{0, 2, 0.5, 0.4, 0.3}, overdamped).char_function;
  auto samples = make_audit_samples(200, 6, 3, 2);
  CHECK(factorization_audit(g, g, overdamped, samples).max_discrepancy < 1e-15);
  auto rep = factorization_audit(g, cat, overdamped, samples);
  CHECK(rep.max_discrepancy < 1e-10);
  CHECK(rep.accepted + rep.rejected == samples.size());
  CHECK(rep.accepted > 20);

  auto fock = realize(FockSpec{3}, overdamped).char_function;
  CHECK(factorization_audit(g, fock, overdamped, samples).max_discrepancy < 1e-6);

  auto again = make_audit_samples(200, 6, 3, 2);
  CHECK(again[17].K == samples[17].K);
  CHECK(again[17].t >= 0.0);
}

TEST_CASE("free-particle decay fit") {
  const auto p = make_params({1, 1, 0, 1, ExplicitDiffusion{8}});
  auto rho0 = realize(GaussianSpec{0, 0, 1.0}, p).char_function;
  const Axis K(64, 3), r(256, 16);
  std::vector<std::pair<double, CharGrid>> snaps;
  for (double t : {0.0, 3.0, 4.0, 5.0}) snaps.emplace_back(t, propagate(rho0, t, p, K, r));
  auto rep = free_particle_diagonalization(snaps, p);
  CHECK(rep.expected_rate == 0.5);
  CHECK(rep.relative_error < 0.01);
  CHECK(rep.trace_drift < 1e-15);
  CHECK(rep.limit_profile_error < 1e-4);

  std::vector<std::pair<double, CharGrid>> bad{{1.0, snaps[1].second}};
  CHECK_THROWS_AS(free_particle_diagonalization(bad, p), Error);
}
