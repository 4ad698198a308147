#include <cmath>

#include "doctest.h"
#include "kppfront/error.hpp"
#include "kppfront/verify.hpp"

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

SweepResult synthetic(std::vector<double> values, std::vector<double> distances) {
  SweepResult r;
  r.parameter = "epsilon";
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepPoint p;
    p.value = values[i];
    p.captured = true;
    p.sup_distance = distances[i];
    r.points.push_back(p);
  }
  return r;
}

void check_convergent(const SweepResult& r, std::size_t n) {
  CHECK(r.captured == n);
  CHECK(r.monotone);
  CHECK(r.inversions == 0);
  CHECK(r.slope >= 0.7);
  CHECK(r.slope <= 1.3);
  CHECK(r.r2 > 0.95);
  for (std::size_t k = 1; k < r.points.size(); ++k) CHECK(r.points[k].sup_distance < r.points[k - 1].sup_distance);
}

}  // namespace

TEST_CASE("slope fit and monotonicity bookkeeping") {
  auto exact = synthetic({1e-2, 5e-3, 2.5e-3}, {4e-3, 2e-3, 1e-3});
  verify::fit_sweep(exact);
  CHECK(exact.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.monotone);

  auto small = synthetic({1e-2, 5e-3, 2.5e-3, 1.25e-3}, {4e-3, 2e-3, 2.05e-3, 1e-3});
  verify::fit_sweep(small);
  CHECK(small.inversions == 1);
  CHECK(small.inversion_flagged);
  CHECK(small.monotone);

  auto large = synthetic({1e-2, 5e-3, 2.5e-3, 1.25e-3}, {4e-3, 2e-3, 3e-3, 1e-3});
  verify::fit_sweep(large);
  CHECK_FALSE(large.inversion_flagged);
  CHECK_FALSE(large.monotone);

  auto two = synthetic({1e-2, 5e-3, 2.5e-3}, {4e-3, 2e-3, 1e-3});
  two.points[2].captured = false;
  CHECK(code_of([&] { verify::fit_sweep(two); }) == ErrorCode::InsufficientData);
}

TEST_CASE("epsilon sweep converges at first order") {
  const auto r = verify::epsilon_sweep_case1(0.5, 1.0, 1.2, 0.05, {1e-2, 5e-3, 2.5e-3, 1.25e-3});
  CHECK(r.parameter == "epsilon");
  check_convergent(r, 4);
  for (const auto& p : r.points) CHECK(p.residual < 1e-6);

  CHECK(code_of([] { verify::epsilon_sweep_case1(0.5, 1.0, 1.2, 0.05, {1e-2, 5e-3}); }) ==
        ErrorCode::InsufficientData);
  CHECK(code_of([] { verify::epsilon_sweep_case1(0.5, 1.0, 1.2, 0.05, {1e-2, 2e-2, 5e-3}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { verify::epsilon_sweep_case1(0.5, 1.0, 1.2, 0.05, {0.1, 5e-3, 1e-3}); }) ==
        ErrorCode::PreconditionViolation);
  CHECK(code_of([] { verify::epsilon_sweep_case1(0.5, 1.0, 0.5, 0.05, {1e-2, 5e-3, 1e-3}); }) ==
        ErrorCode::SpeedBelowCritical);
}

TEST_CASE("delta sweeps converge at first order") {
  const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
  const auto r1 = verify::delta_sweep_case1(0.5, 1.0, 1.2, deltas);
  CHECK(r1.parameter == "delta");
  check_convergent(r1, 4);

  const auto r2 = verify::delta_sweep_case2(0.5, 1.0, deltas);
  check_convergent(r2, 4);
  // u1 = sqrt(1 - w1) + O(delta) along the slow front
  for (std::size_t k = 1; k < r2.points.size(); ++k) CHECK(r2.points[k].u1_residual < r2.points[k - 1].u1_residual);

  CHECK(code_of([] { verify::delta_sweep_case1(0.5, 1.0, 1.2, {0.1, 0.05, 0.0}); }) == ErrorCode::DomainError);
  CHECK(code_of([] { verify::delta_sweep_case2(0.5, 1.0, {0.2, 0.1, 0.05}); }) ==
        ErrorCode::PreconditionViolation);
}

TEST_CASE("formula audit over random samples") {
  const auto samples = verify::random_audit_samples(100, 0);
  REQUIRE(samples.size() == 100);
  for (const auto& s : samples) {
    CHECK(s.alpha > 0.05);
    CHECK(s.alpha < 0.95);
    CHECK(s.eta > 0.1);
    CHECK(s.eta < 10);
    CHECK(s.delta > 0);
    CHECK(s.delta < phasespace::delta0_case2(s.alpha, s.eta));
  }
  CHECK(verify::random_audit_samples(5, 7)[3].alpha == verify::random_audit_samples(5, 7)[3].alpha);

  const auto report = verify::formula_audit(samples);
  CHECK(report.all_passed());
  CHECK(report.worst_eig_error < 1e-8);
  CHECK(report.worst_delta0_error < 1e-12);
  CHECK(report.worst_kpp_margin > 0);

  const auto central = verify::formula_audit(samples, JacobianMethod::CentralDifference);
  CHECK(central.worst_eig_error < 1e-6);
}

TEST_CASE("formula audit reference sample and degenerate guard") {
  const auto ref = verify::formula_audit({{0.5, 1.0, 0.1, 1.2}});
  CHECK(ref.all_passed());
  CHECK(ref.entries[0].eig_error < 1e-10);
  CHECK(ref.entries[0].kpp_passed);
  // lambda2(B) = -delta (1 - alpha) / (eta + 1)
  const auto eig = phasespace::case2_eigs(ModelParams::rm_case2(0.5, 1.0, 0.1, kUnset, kUnset), phasespace::Case2Point::B);
  CHECK(eig.second.real() == doctest::Approx(-0.025).epsilon(1e-15));

  const auto degenerate = verify::formula_audit({{0.999, 1.0, 1e-4, 1.2}});
  CHECK(degenerate.entries[0].flagged);
  CHECK(degenerate.flagged == 1);
  CHECK(degenerate.failed == 0);
}

TEST_CASE("KPP property audit") {
  const auto entries = verify::kpp_audit(20, 0);
  CHECK(entries.size() == 40);
  std::size_t ht = 0;
  for (const auto& e : entries) {
    CHECK(e.report.all_passed());
    CHECK(e.report.checks.size() == 5);
    if (e.family == ModelFamily::HollingTanner) ++ht;
  }
  CHECK(ht == 20);
}

TEST_CASE("trapping triangle holds trajectories") {
  const double cstar = phasespace::critical_speed(ModelFamily::RosenzweigMacArthur,
                                                  ModelParams::rm_case1(0.5, 1.0, 0.1, kUnset, 1.0));
  for (double factor : {1.0, 1.1, 2.0}) {
    const auto r = verify::trapping_check(0.5, 1.0, factor * cstar, std::nullopt, 200, 1000.0, 1);
    CHECK(r.passed());
    CHECK(r.exits == 0);
    CHECK(r.max_penetration < 1e-9);
    CHECK(r.seeds == 200);
  }
  CHECK(code_of([&] { verify::trapping_check(0.5, 1.0, 0.9 * cstar, std::nullopt, 10, 10.0, 0); }) ==
        ErrorCode::SpeedBelowCritical);
}
