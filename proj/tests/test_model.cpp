#include "doctest.h"

#include <cmath>

#include "clme/model.hpp"
#include "clme/states.hpp"

using namespace clme;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK(code_of([] { make_params({0.0, 1, 1, 1, ExplicitDiffusion{8}}); }) ==
        ErrorCode::InvalidParameter);
  CHECK(code_of([] { make_params({1, -1, 1, 1, ExplicitDiffusion{8}}); }) ==
        ErrorCode::InvalidParameter);
  CHECK(code_of([] { make_params({1, 1, 1, 1, ExplicitDiffusion{8}}); }) ==
        ErrorCode::CriticalDamping);
  CHECK(code_of([] { make_params({1, 1, 0, 1, OscillatorBath{1.0}}); }) ==
        ErrorCode::InvalidParameter);
  CHECK_NOTHROW(make_params({1, 1, 1.0 + 1e-6, 1, ExplicitDiffusion{8}}));
  CHECK_NOTHROW(make_params({1, 1, 1, 1, ExplicitDiffusion{8}}, DampingGuard::Waive));
}

TEST_CASE("diffusion modes") {
  auto hot = make_params({2, 0.5, 1, 1, HighTemperature{3.0}});
  CHECK(hot.diffusion() == doctest::Approx(8 * 2 * 0.5 * 3.0));

  auto cold = make_params({1, 5, 3, 1, OscillatorBath{0.0}});
  CHECK(cold.diffusion() == cold.pure_state_diffusion());
  CHECK(cold.diffusion() == doctest::Approx(60.0));

  // 2 nbar + 1 = coth(hbar omega / 2kT)
  auto warm = make_params({1, 5, 3, 1, OscillatorBath{2.0}});
  CHECK(warm.diffusion() == doctest::Approx(60.0 / std::tanh(3.0 / 4.0)).epsilon(1e-13));
  CHECK(warm.diffusion() >= warm.pure_state_diffusion());

  CHECK(bose_occupation(1.0, 0.0) == 0.0);
  CHECK(bose_occupation(1e-3, 1.0) == doctest::Approx(999.5).epsilon(1e-6));
}

TEST_CASE("axes") {
  Axis a(8, 2.0);
  CHECK(a.step() == 0.5);
  CHECK(a[0] == -2.0);
  CHECK(a[a.zero_index()] == 0.0);
  CHECK(a[7] == 1.5);
  auto k = a.reciprocal();
  CHECK(k.step() * a.step() * 8 == doctest::Approx(2 * M_PI));
  CHECK(k.reciprocal().half_width() == doctest::Approx(2.0));
  CHECK_THROWS_AS(Axis(6, 1.0), Error);
  CHECK_THROWS_AS(Axis(2, 1.0), Error);
  CHECK_THROWS_AS(Axis(8, 0.0), Error);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(validate(GaussianSpec{0, 0, 0}), Error);
  CHECK_THROWS_AS(validate(FockSpec{-1}), Error);
  CHECK_THROWS_AS(validate(ThermalSpec{-1}), Error);
  CHECK_NOTHROW(validate(CatSpec{}));
}

TEST_CASE("realized states are normalized and Hermitian on the standard grid") {
  const auto params = make_params({1, 5, 3, 1, ExplicitDiffusion{60}});
  const Axis R(256, 8), r(256, 8);
  for (StateSpec spec : {StateSpec{GaussianSpec{0.5, 1.0, 0.6}}, StateSpec{CatSpec{0, 3, 0, 0.5, 0.7}},
                         StateSpec{FockSpec{2}}, StateSpec{ThermalSpec{1.5}}}) {
    const auto rho = render_position(realize(spec, params), R, r);
    const auto tr = trace_of(rho);
    CHECK(tr.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tr.imaginary_residue < 1e-12);
    CHECK(hermiticity_error(rho) < 1e-8);
  }
}
