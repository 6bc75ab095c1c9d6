#include "doctest.h"

#include <cmath>

#include "clme/analysis.hpp"
#include "clme/exact_propagator.hpp"
#include "clme/states.hpp"
#include "clme/transforms.hpp"

using namespace clme;

TEST_CASE("thermal initial state relaxes to the bath state") {
  const auto p = make_params({1, 15, 3, 1, OscillatorBath{2.0}});
  const Axis R(256, 8), r(256, 8);
  auto rho = to_position(propagate(realize(ThermalSpec{0.1}, p).char_function, 40.0, p, R.reciprocal(), r));
  CHECK(linear_entropy(rho) == doctest::Approx(stationary_linear_entropy(p)).epsilon(1e-6));
  auto spec = project_energy_basis(rho, p, 30);
  auto analytic = eigen_spectrum_analytic(p, 30);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(spec.eigenvalues[n] - analytic[n]) < 1e-6);
  // the oscillator bath at temperature kT gives the canonical populations
  const double ratio = std::exp(-3.0 / 2.0);
  CHECK(analytic[1] / analytic[0] == doctest::Approx(ratio).epsilon(1e-12));
}

TEST_CASE("cat coherences decay while the diagonal survives") {
  const auto p = make_params({1, 5, 3, 1, ExplicitDiffusion{60}});
  auto cat = realize(CatSpec{0, 2.0, 0, std::sqrt(1.0 / 6.0), 0}, p).char_function;
  const Axis R(256, 8), r(256, 8);
  double prev = 1e9;
  for (double t : {1.0, 2.0, 3.0, 4.0}) {
    auto rho = to_position(propagate(cat, t, p, R.reciprocal(), r));
    auto spec = project_energy_basis(rho, p, 24);
    CHECK(spec.offdiag_ratio < prev);
    prev = spec.offdiag_ratio;
    CHECK(trace(rho) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("underdamped state spirals into the stationary Wigner function") {
  const auto p = make_params({1, 1, 3, 1, ExplicitDiffusion{16}});
  const Axis R(256, 8), r(256, 8);
  auto rho0 = realize(GaussianSpec{1.0, 0.0, 0.4}, p).char_function;
  auto w = wigner(to_position(propagate(rho0, 15.0, p, R.reciprocal(), r)), 1.0);
  auto u = uncertainties(w);
  auto a = uncertainties(stationary_state(p), p);
  CHECK(std::abs(u.mean_x) < 1e-6);
  CHECK(u.dx == doctest::Approx(a.dx).epsilon(1e-6));
  CHECK(u.dp == doctest::Approx(a.dp).epsilon(1e-6));
}

TEST_CASE("free particle: coherence length saturates, trace and momentum diffusion") {
  const auto p = make_params({1, 1, 0, 1, ExplicitDiffusion{8}});
  auto rho0 = realize(CatSpec{0, 4, 0, 0.5, 0}, p).char_function;
  const Axis R(256, 32), r(256, 16);
  for (double t : {0.5, 2.0, 5.0}) {
    auto rho = to_position(propagate(rho0, t, p, R.reciprocal(), r));
    CHECK(trace(rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hermiticity_error(rho) < 1e-12);
  }
}
