#include <cmath>
#include <random>

#include "doctest.h"
#include "kppfront/error.hpp"
#include "kppfront/models.hpp"

using namespace kppfront;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("nondimensionalization") {
  PhysicalParamsRM p{1, 1, 1, 2, 1, 1, 1, 0.01, 1};
  const auto m = models::nondimensionalize_rm(p);
  CHECK(m.alpha == doctest::Approx(1.0));
  CHECK(m.gamma == doctest::Approx(1.0));
  CHECK(m.delta == doctest::Approx(1.0));
  CHECK(m.eta == doctest::Approx(1.0));
  CHECK(m.epsilon == doctest::Approx(0.01));

  // delta = E1 K (D - C E2)/(A E2) = 0.5*2*2/2 = 1
  PhysicalParamsRM q{2, 1, 1, 3, 0.5, 1, 2, 0, 1};
  const auto n = models::nondimensionalize_rm(q);
  CHECK(n.alpha == doctest::Approx(0.25));
  CHECK(n.gamma == doctest::Approx(1.0));
  CHECK(n.delta == doctest::Approx(1.0));
  CHECK(n.eta == doctest::Approx(0.5));

  PhysicalParamsRM bad{1, 1, 1, 1, 1, 1, 1, 0, 1};
  CHECK(code_of([&] { models::nondimensionalize_rm(bad); }) == ErrorCode::ScalingViolation);
  PhysicalParamsRM no_w{1, 1, 1, 2, 1, 1, 1, 0.1, 0};
  CHECK(code_of([&] { models::nondimensionalize_rm(no_w); }) == ErrorCode::DivisionByZero);
  CHECK(std::isnan(models::nondimensionalize_rm(no_w, models::EpsilonRequest::Skip).epsilon));
  PhysicalParamsRM neg{1, -1, 1, 2, 1, 1, 1, 0, 1};
  CHECK(code_of([&] { models::nondimensionalize_rm(neg); }) == ErrorCode::ValidationError);
}

TEST_CASE("reaction terms vanish at equilibria") {
  const auto p = ModelParams::rm_case1(0.5, 1.0, 0.1, 0.01, 1.2);
  auto [du, dw] = models::reaction_rhs(p, 1.0, 0.0);
  CHECK(du == 0.0);
  CHECK(dw == 0.0);
  std::tie(du, dw) = models::reaction_rhs(p, 0.5, 0.75);
  CHECK(std::abs(du) < 1e-15);
  CHECK(std::abs(dw) < 1e-15);

  const double g = (-1.0 + std::sqrt(5.0)) / 2.0;
  std::tie(du, dw) = models::reaction_rhs(ModelParams::ht(1.0, 0.1, 0.01, 2.5), g, g);
  CHECK(std::abs(du) < 1e-14);
  CHECK(std::abs(dw) < 1e-14);

  CHECK(code_of([&] { models::reaction_rhs(p, -1.0, 0.5); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { models::reaction_rhs(ModelParams::ht(1, 0.1, 0, 2.5), 0.0, 0.5); }) ==
        ErrorCode::DomainError);
}

TEST_CASE("scaling places delta on the right term") {
  auto p1 = ModelParams::rm_case1(0.5, 1.0, 0.1, 0.01, 1.2);
  auto p2 = ModelParams::rm_case2(0.5, 1.0, 0.1, 0.01, 1.0);
  const auto [u1, w1] = models::reaction_rhs(p1, 0.3, 0.4);
  const auto [u2, w2] = models::reaction_rhs(p2, 0.3, 0.4);
  CHECK(u1 == doctest::Approx(u2 / 0.1));
  CHECK(w2 == doctest::Approx(0.1 * w1));
}

TEST_CASE("equilibria") {
  const auto eq = models::equilibria(ModelParams::rm_case1(0.5, 1.0, 0.1, 0.01, 1.2));
  REQUIRE(eq.size() == 3);
  CHECK(eq[0].state == State{0.0, 0.0});
  CHECK(eq[1].state[0] == 0.5);
  CHECK(eq[1].state[1] == doctest::Approx(0.75));
  CHECK(eq[2].state == State{1.0, 0.0});
  for (const auto& e : eq) CHECK(e.eigenvalues.size() == 2);
  CHECK(eq[2].kind == EquilibriumKind::Saddle);

  const auto a9 = models::equilibria(ModelParams::rm_case1(0.9, 1.0, 0.1, 0.01, 1.2));
  CHECK(a9[1].state[1] == doctest::Approx(0.19));

  const auto ht = models::equilibria(ModelParams::ht(1.0, 0.1, 0.01, 2.5));
  REQUIRE(ht.size() == 2);
  CHECK(ht[1].state[0] == doctest::Approx(0.6180339887498949).epsilon(1e-14));
  CHECK(ht[1].state[1] == doctest::Approx(0.6180339887498949).epsilon(1e-14));

  const auto [u, w] = models::ht_coexistence(2.0);
  CHECK(u == doctest::Approx((-1.0 + std::sqrt(17.0)) / 4.0));
  CHECK(w == doctest::Approx((-1.0 + std::sqrt(17.0)) / 8.0));
}

TEST_CASE("kinetics vanish at every equilibrium for random parameters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.01, 0.99), ue(0.05, 10.0), ug(0.2, 3.0);
  for (int i = 0; i < 200; ++i) {
    auto p = ModelParams::rm_case1(ua(rng), ue(rng), 0.1, 0.0, 1.0);
    p.gamma = ug(rng);
    for (const auto& e : models::equilibria(p)) {
      const auto [du, dw] = models::reaction_rhs(p, e.state[0], e.state[1]);
      CHECK(std::abs(du) < 1e-12);
      CHECK(std::abs(dw) < 1e-12);
    }
    auto h = ModelParams::ht(ue(rng), 0.1, 0.0, 2.5);
    h.gamma = ug(rng);
    for (const auto& e : models::equilibria(h)) {
      const auto [du, dw] = models::reaction_rhs(h, e.state[0], e.state[1]);
      CHECK(std::abs(du) < 1e-12);
      CHECK(std::abs(dw) < 1e-12);
    }
  }
}

TEST_CASE("physical parameters map B to an equilibrium") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    PhysicalParamsRM p{u(rng), u(rng), u(rng), 0, u(rng), u(rng), u(rng), 0.01, 1.0};
    p.D = p.E2 * (p.C + u(rng));
    auto m = models::nondimensionalize_rm(p);
    if (!(m.alpha < 1)) continue;
    const auto [du, dw] = models::reaction_rhs(m, m.gamma, 0.0);
    CHECK(du == 0.0);
    CHECK(dw == 0.0);
  }
}

TEST_CASE("validation messages") {
  auto p = ModelParams::rm_case1(1.2, 1.0, 0.1, 0.01, 1.2);
  try {
    validate(p);
    FAIL("accepted alpha = 1.2");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("alpha must satisfy 0 < alpha < 1") != std::string::npos);
  }
  CHECK(code_of([] { validate(ModelParams::rm_case1(0.5, -1, 0.1, 0, 1)); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { validate(ModelParams::rm_case1(0.5, 1, 0.1, 0, 0)); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { validate(ModelParams::rm_case2(0.5, 1, 0.1, 0, -1)); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { validate(ModelParams::ht(0, 0.1, 0, 2.5)); }) == ErrorCode::ValidationError);
  CHECK_NOTHROW(validate(ModelParams::rm_case1(0.5, 1, 0.1, kUnset, kUnset)));
}

TEST_CASE("gamma regions") {
  using models::GammaRegion;
  CHECK(models::validate_gamma_region(0.5, 1.0) == GammaRegion::CoveredGammaGeqOne);
  CHECK(models::validate_gamma_region(0.3, 0.5) == GammaRegion::CoveredGammaLessOne);
  CHECK(models::validate_gamma_region(0.4, 2.0) == GammaRegion::NotCovered);
  CHECK(models::validate_gamma_region(0.6, 0.5) == GammaRegion::NotCovered);
  CHECK(models::validate_gamma_region(0.51, 2.0) == GammaRegion::CoveredGammaGeqOne);
}
