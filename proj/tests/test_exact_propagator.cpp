#include "doctest.h"

#include <cmath>
#include <vector>

#include "clme/analysis.hpp"
#include "clme/exact_propagator.hpp"
#include "clme/states.hpp"
#include "clme/transforms.hpp"
#include "oracles.hpp"

using namespace clme;

namespace {

const ModelParams overdamped = make_params({1, 5, 3, 1, ExplicitDiffusion{60}});
const ModelParams underdamped = make_params({1, 1, 3, 1, ExplicitDiffusion{16}});

CharFunction packet(double x0, double p0, double sigma) {
  return [=](double K, double r) { return oracle::gaussian_char(K, r, x0, p0, sigma, 1.0); };
}

}  // namespace

TEST_CASE("characteristic constants") {
  auto ch = characteristics(overdamped);
  CHECK(std::abs(ch.lambda_plus - 1.0) < 1e-15);
  CHECK(std::abs(ch.lambda_minus - 1.0 / 9.0) < 1e-15);

  auto ch2 = characteristics(make_params({1, 2, 1, 1, ExplicitDiffusion{8}}));
  CHECK(ch2.alpha == doctest::Approx(1.0 / 6.0));

  // Vieta: lambda+ + lambda- = 2 hbar gamma / m omega^2, lambda+ lambda- = hbar^2 / m^2 omega^2
  for (const auto& p : {overdamped, underdamped, make_params({2, 0.3, 0.7, 0.5, ExplicitDiffusion{3}})}) {
    auto c = characteristics(p);
    const double w2 = p.omega() * p.omega();
    CHECK(std::abs(c.lambda_plus + c.lambda_minus - 2 * p.hbar() * p.gamma() / (p.mass() * w2)) < 1e-12);
    CHECK(std::abs(c.lambda_plus * c.lambda_minus - p.hbar() * p.hbar() / (p.mass() * p.mass() * w2)) <
          1e-12);
  }
  CHECK(std::abs(std::conj(characteristics(underdamped).lambda_plus) -
                 characteristics(underdamped).lambda_minus) < 1e-15);

  CHECK_THROWS_AS(characteristics(make_params({1, 1, 0, 1, ExplicitDiffusion{8}})), Error);
  CHECK_THROWS_AS(characteristics(make_params({1, 1, 1, 1, ExplicitDiffusion{8}}, DampingGuard::Waive)),
                  Error);
}

TEST_CASE("shifted arguments and Z follow the characteristic ODE") {
  for (const auto& p : {overdamped, underdamped}) {
    auto ch = characteristics(p);
    for (auto [K, r, t] : std::vector<std::array<double, 3>>{
             {1.3, -0.7, 0.4}, {-2.0, 1.5, 1.1}, {0.0, 2.0, 0.05}, {3.0, 0.0, 2.0}}) {
      const auto foot = oracle::trace_characteristic(K, r, t, p);
      const auto s = shift_args(K, r, t, ch);
      const double scale = 1.0 + std::abs(foot.K) + std::abs(foot.r);
      CHECK(std::abs(s.K - foot.K) < 1e-9 * scale);
      CHECK(std::abs(s.r - foot.r) < 1e-9 * scale);
      CHECK(s.imag_residue < 1e-12 * scale);
      const double logz = ch.alpha * z_factor(K, r, t, ch);
      CHECK(logz == doctest::Approx(foot.log_damping).epsilon(1e-9));
    }
  }
}

TEST_CASE("free particle characteristics") {
  const auto p = make_params({1, 1, 0, 1, ExplicitDiffusion{8}});
  for (auto [K, r, t] : std::vector<std::array<double, 3>>{{1.0, 0.5, 0.3}, {-2.0, 1.0, 2.5}}) {
    const auto foot = oracle::trace_characteristic(K, r, t, p);
    const auto s = free_shift_args(K, r, t, p);
    CHECK(s.K == doctest::Approx(foot.K).epsilon(1e-10));
    CHECK(s.r == doctest::Approx(foot.r).epsilon(1e-10));
    CHECK(free_exponent(K, r, t, p) == doctest::Approx(foot.log_damping).epsilon(1e-9));
  }
  CHECK(free_exponent(0.0, 0.0, 5.0, p) == 0.0);
}

TEST_CASE("identity at t = 0 and trace conservation") {
  auto rho0 = packet(0.3, -0.8, 0.5);
  for (const auto& p : {overdamped, underdamped}) {
    for (double K : {-1.0, 0.0, 2.0})
      for (double r : {-0.5, 0.0, 1.5})
        CHECK(std::abs(evaluate_exact(rho0, K, r, 0.0, p) - rho0(K, r)) < 1e-15);
    for (double t : {0.1, 1.0, 10.0})
      CHECK(std::abs(evaluate_exact(rho0, 0.0, 0.0, t, p) - rho0(0.0, 0.0)) < 1e-15);
  }
}

TEST_CASE("semigroup and damping") {
  auto rho0 = packet(0.5, 1.0, 0.4);
  for (const auto& p : {overdamped, underdamped}) {
    auto two_step = evolved(evolved(rho0, 0.3, p), 0.4, p);
    for (auto [K, r] : std::vector<std::array<double, 2>>{{0.7, -0.3}, {-1.5, 1.1}, {2.0, 0.2}}) {
      CHECK(std::abs(two_step(K, r) - evaluate_exact(rho0, K, r, 0.7, p)) < 1e-12);
      auto ch = characteristics(p);
      for (double t : {0.01, 0.5, 3.0}) CHECK(ch.alpha * z_factor(K, r, t, ch) <= 1e-15);
    }
  }
}

TEST_CASE("omega -> 0 approaches the free propagator as omega^2") {
  auto rho0 = packet(0.2, 0.5, 0.7);
  std::vector<std::array<double, 2>> samples{{0.5, 0.3}, {-1.0, 0.8}, {1.5, -0.4}};
  auto gap = [&](double w) {
    return consistency_check_omega_limit(rho0, 0.5, make_params({1, 1, w, 1, ExplicitDiffusion{8}}),
                                         samples);
  };
  // below omega ~ 1e-4 cancellation in lambda+ ~ 2 gamma hbar / m omega^2 sets a 1e-9 floor
  const double coarse = gap(1e-3);
  const double fine = gap(3e-4);
  CHECK(coarse < 1e-7);
  CHECK(coarse / fine == doctest::Approx(100.0 / 9.0).epsilon(0.1));
}

TEST_CASE("the pure ground state is stationary at D = 4 m gamma hbar omega") {
  auto ground = realize(FockSpec{0}, overdamped);
  auto exact_ground = packet(0.0, 0.0, std::sqrt(1.0 / 6.0));
  for (double t : {0.5, 3.0})
    for (auto [K, r] : std::vector<std::array<double, 2>>{{0.0, 0.4}, {2.0, -0.3}, {-4.0, 1.0}})
      CHECK(std::abs(evaluate_exact(exact_ground, K, r, t, overdamped) - exact_ground(K, r)) < 1e-14);
  CHECK(std::abs(ground.char_function(1.0, 0.5) - exact_ground(1.0, 0.5)) < 1e-6);
}

TEST_CASE("grid propagation is Hermitian and trace preserving") {
  auto rho0 = packet(0.5, 1.0, 0.5);
  const Axis R(128, 6), r(128, 6);
  for (const auto& p : {overdamped, underdamped}) {
    auto chi = propagate(rho0, 0.7, p, R.reciprocal(), r);
    auto rho = to_position(chi);
    CHECK(trace(rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hermiticity_error(rho) < 1e-12);
  }
  CHECK_THROWS_AS(propagate(rho0, -1.0, overdamped, R.reciprocal(), r), Error);
  CHECK_THROWS_AS(propagate_free(rho0, 1.0, overdamped, R.reciprocal(), r), Error);
}
