#include <cmath>

#include "doctest.h"
#include "kppfront/error.hpp"
#include "kppfront/frontsolver.hpp"

using namespace kppfront;

namespace {

const ModelParams kCase1 = ModelParams::rm_case1(0.5, 1.0, 0.05, 0.001, 1.2);
const ModelParams kCase2 = ModelParams::rm_case2(0.5, 1.0, 0.1, 0.001, 1.0);
const ModelParams kHT = ModelParams::ht(2.0, 0.05, 0.001, 2.5);

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidArgument;
}

double distance(const State& a, const State& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double column_min(const FrontProfile& p, std::string_view name) {
  const auto col = p.column(p.component(name));
  return *std::min_element(col.begin(), col.end());
}

// Crossing values from an independent scipy DOP853 integration (rtol 1e-13).
constexpr double kKppW2AtHalf = -0.0513055383738241;
constexpr double kCase2U1AtHalf = 0.795986747427983;
constexpr double kHtW2AtHalf = -0.04395666523996;

}  // namespace

TEST_CASE("Fisher-KPP front above the critical speed") {
  const PhaseSystem sys(SystemId::Case1KPP2D, kCase1);
  const FrontProfile p = frontsolver::shoot_front_2d(sys);
  CHECK(p.names == std::vector<std::string>{"w1", "w2"});
  CHECK(p.c == 1.2);
  CHECK(distance(p.left_eq.state, {0.75, 0.0}) == 0.0);
  CHECK(distance(p.right_eq.state, {0.0, 0.0}) == 0.0);
  CHECK(p.left_eq.kind == EquilibriumKind::Saddle);
  CHECK(p.right_eq.kind == EquilibriumKind::StableNode);
  CHECK(p.convergence_residuals.first < 1e-7);
  CHECK(p.convergence_residuals.second < 1e-7);
  CHECK(distance(p.states.front(), p.left_eq.state) < 1e-7);
  CHECK(distance(p.states.back(), p.right_eq.state) < 1e-7);
  CHECK(p.monotone);
  CHECK(p.positive);
  for (std::size_t k = 1; k < p.size(); ++k) REQUIRE(p.zeta[k] > p.zeta[k - 1]);
  for (std::size_t k = 1; k + 1 < p.size(); ++k) REQUIRE(p.slopes[k][0] < 0);

  const double z = frontsolver::level_crossing(p, 0, 0.375);
  CHECK(std::abs(p.value_at(1, z) - kKppW2AtHalf) < 1e-8);

  // the launch leaves A along the unstable eigenvector
  const auto eig = phasespace::eig_kpp_saddle(kCase1, 1.2);
  const double dx = p.states.front()[0] - 0.75, dy = p.states.front()[1];
  const double norm = std::hypot(dx, dy), vnorm = std::hypot(eig.v1[0], eig.v1[1]);
  CHECK(std::abs(std::abs(dx * eig.v1[0] + dy * eig.v1[1]) / (norm * vnorm) - 1.0) < 1e-8);
}

TEST_CASE("Fisher-KPP front below the critical speed spirals into O") {
  const auto slow = kCase1.with_speed(0.8);
  ShootingConfig cfg;
  const PhaseSystem sys(SystemId::Case1KPP2D, slow);
  const FrontProfile p = frontsolver::shoot_front_2d(sys, cfg);
  CHECK_FALSE(p.monotone);
  CHECK(column_min(p, "w1") < 0.0);
  CHECK(p.right_eq.kind == EquilibriumKind::StableSpiral);
  CHECK(p.convergence_residuals.second < 1e-7);

  cfg.require_monotone = true;
  CHECK(code_of([&] { frontsolver::shoot_front_2d(sys, cfg); }) == ErrorCode::SpeedBelowCritical);
}

TEST_CASE("Holling-Tanner Fisher-KPP front") {
  const FrontProfile p = frontsolver::shoot_front_2d(PhaseSystem(SystemId::HTKPP2D, kHT));
  CHECK(p.left_eq.name == "C");
  CHECK(p.monotone);
  CHECK(p.convergence_residuals.second < 1e-7);
  const double wstar = phasespace::kpp_root(ModelFamily::HollingTanner, kHT);
  const double z = frontsolver::level_crossing(p, 0, 0.5 * wstar);
  CHECK(std::abs(p.value_at(1, z) - kHtW2AtHalf) < 1e-8);
}

TEST_CASE("Case 2 slow front from A to B") {
  const FrontProfile p = frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case2Slow2D, kCase2));
  CHECK(p.names == std::vector<std::string>{"u1", "w1"});
  CHECK(distance(p.left_eq.state, {0.5, 0.75}) < 1e-15);
  CHECK(distance(p.right_eq.state, {1.0, 0.0}) == 0.0);
  CHECK(p.convergence_residuals.first < 1e-7);
  CHECK(p.convergence_residuals.second < 1e-7);
  CHECK(p.monotone);
  CHECK(p.positive);
  const double z = frontsolver::level_crossing(p, 1, 0.375);
  CHECK(std::abs(p.value_at(0, z) - kCase2U1AtHalf) < 1e-8);

  CHECK(code_of([] {
          frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case2Slow2D, kCase2.with_delta(0.2)));
        }) == ErrorCode::PreconditionViolation);
}

TEST_CASE("planar shooting rejects other systems") {
  CHECK(code_of([] { frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case1Full4D, kCase1)); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { frontsolver::shoot_front_full(PhaseSystem(SystemId::Case1KPP2D, kCase1)); }) ==
        ErrorCode::InvalidArgument);
  ShootingConfig bad;
  bad.launch_offset = 0;
  CHECK(code_of([&] { frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case1KPP2D, kCase1), bad); }) ==
        ErrorCode::ValidationError);
}

TEST_CASE("halving the launch offset leaves the aligned front unchanged") {
  const PhaseSystem sys(SystemId::Case1KPP2D, kCase1);
  ShootingConfig half;
  half.launch_offset = 5e-7;
  const auto p = frontsolver::shoot_front_2d(sys);
  const auto q = frontsolver::shoot_front_2d(sys, half);
  CHECK(frontsolver::align_profiles(p, q, "w1", 0.375).sup_distance < 1e-6);

  const PhaseSystem reduced(SystemId::Case1Reduced3D, kCase1);
  const auto r = frontsolver::shoot_front_full(reduced);
  const auto s = frontsolver::shoot_front_full(reduced, half);
  CHECK(frontsolver::align_profiles(r, s, "w1", 0.375).sup_distance < 1e-6);
}

TEST_CASE("alignment of a profile with itself and a translate") {
  const auto p = frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case1KPP2D, kCase1));
  const auto self = frontsolver::align_profiles(p, p, "w1", 0.375);
  CHECK(self.shift == 0.0);
  CHECK(self.sup_distance == 0.0);
  CHECK(self.compared_points == p.size());

  const auto moved = frontsolver::align_profiles(p, frontsolver::translate(p, 3.7), "w1", 0.375);
  CHECK(std::abs(moved.shift - 3.7) < 1e-6);
  CHECK(moved.sup_distance < 1e-6);

  CHECK(code_of([&] { frontsolver::align_profiles(p, p, "w1", 0.9); }) == ErrorCode::LevelNotCrossed);
  CHECK(code_of([&] { frontsolver::align_profiles(p, p, "u7", 0.3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("projection and rescaling") {
  const auto p = frontsolver::shoot_front_full(PhaseSystem(SystemId::Case1Reduced3D, kCase1));
  const auto q = frontsolver::project(p, {"w1", "w2"});
  CHECK(q.names == std::vector<std::string>{"w1", "w2"});
  CHECK(q.left_eq.state == State{0.75, 0.0});
  CHECK(q.states[10][0] == p.states[10][1]);

  const auto r = frontsolver::rescale(p, 2.0);
  CHECK(r.zeta[5] == 2.0 * p.zeta[5]);
  CHECK(r.slopes[5][1] == p.slopes[5][1] / 2.0);
}

TEST_CASE("Case 1 full and reduced fronts") {
  const auto reduced = frontsolver::shoot_front_full(PhaseSystem(SystemId::Case1Reduced3D, kCase1));
  CHECK(reduced.convergence_residuals.second < 1e-7);
  CHECK(reduced.positive);
  CHECK(reduced.max_jump < 1e-9);

  const auto full = frontsolver::shoot_front_full(PhaseSystem(SystemId::Case1Full4D, kCase1));
  CHECK(full.names == std::vector<std::string>{"u1", "u2", "w1", "w2"});
  CHECK(distance(full.left_eq.state, {0.5, 0.0, 0.75, 0.0}) < 1e-15);
  CHECK(distance(full.right_eq.state, {1.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(full.convergence_residuals.first < 1e-6);
  CHECK(full.convergence_residuals.second < 1e-6);
  CHECK(full.positive);
  CHECK(full.monotone);
  CHECK(full.max_jump < 1e-9);
  // u1 increases from alpha to 1 along the front
  const std::size_t u = full.component("u1");
  for (std::size_t k = 1; k + 1 < full.size(); ++k) REQUIRE(full.slopes[k][u] > 0);

  // the full front is an O(eps) perturbation of the reduced one
  const auto d = frontsolver::align_profiles(frontsolver::project(full, {"w1", "w2"}),
                                             frontsolver::project(reduced, {"w1", "w2"}), "w1", 0.375);
  CHECK(d.sup_distance > 0.0);
  CHECK(d.sup_distance < 10 * kCase1.epsilon);

  const auto adh = frontsolver::slow_manifold_adherence(full, kCase1, 5.0);
  CHECK(adh.max_residual <= adh.constant * kCase1.epsilon * (1 + 1e-12));
  CHECK(adh.constant < 100.0);
}

TEST_CASE("Case 2 and Holling-Tanner full fronts") {
  const auto c2 = frontsolver::shoot_front_full(PhaseSystem(SystemId::Case2Full4D, kCase2));
  CHECK(distance(c2.right_eq.state, {1.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(c2.convergence_residuals.second < 1e-6);
  CHECK(c2.positive);

  const auto ht = frontsolver::shoot_front_full(PhaseSystem(SystemId::HTFull4D, kHT));
  CHECK(ht.left_eq.name == "C");
  CHECK(ht.convergence_residuals.second < 1e-6);
  CHECK(ht.positive);
}

TEST_CASE("outside the perturbative regime the result is only recorded") {
  // eps = 0.5 violates eps << delta; capture, NoCapture and UnstableEscape are all acceptable
  const PhaseSystem sys(SystemId::Case1Full4D, kCase1.with_epsilon(0.5));
  try {
    const auto p = frontsolver::shoot_front_full(sys);
    MESSAGE("eps = 0.5 captured, residual " << p.convergence_residuals.second);
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::NoCapture || e.code() == ErrorCode::UnstableEscape));
  }
}

TEST_CASE("singular Case 2 front lies on the parabola") {
  const auto p = frontsolver::singular_front_case2(kCase2);
  CHECK(p.names == std::vector<std::string>{"u1", "w1"});
  CHECK(p.left_eq.name == "A");
  CHECK(p.right_eq.name == "B");
  for (std::size_t k = 0; k < p.size(); ++k) REQUIRE(std::abs(p.states[k][0] - std::sqrt(1 - p.states[k][1])) < 1e-15);
  // the delta = 0.1 slow front is within O(delta) of it in slow time
  const auto slow = frontsolver::rescale(frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case2Slow2D, kCase2)), 0.1);
  const auto d = frontsolver::align_profiles(slow, p, "w1", 0.375);
  CHECK(d.sup_distance < 0.1);
}
