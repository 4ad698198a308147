#include <cmath>

#include "doctest.h"
#include "kppfront/numerics.hpp"
#include "kppfront/ode.hpp"

using namespace kppfront;

TEST_CASE("jacobians of an analytic field agree") {
  auto real = [](std::span<const double> x, std::span<double> dx) {
    dx[0] = std::sin(x[0]) * x[1];
    dx[1] = std::exp(x[0]) - x[1] * x[1];
  };
  auto cplx = [](std::span<const Complex> x, std::span<Complex> dx) {
    dx[0] = std::sin(x[0]) * x[1];
    dx[1] = std::exp(x[0]) - x[1] * x[1];
  };
  const State x{0.3, -1.7};
  const auto jc = numerics::jacobian_complex_step(cplx, x);
  const auto jd = numerics::jacobian_central(real, x);
  CHECK(jc(0, 0) == doctest::Approx(std::cos(0.3) * -1.7).epsilon(1e-15));
  CHECK(jc(0, 1) == doctest::Approx(std::sin(0.3)).epsilon(1e-15));
  CHECK(jc(1, 0) == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
  CHECK(jc(1, 1) == doctest::Approx(3.4).epsilon(1e-15));
  CHECK((jc - jd).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("spectrum ordering and classification") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 2, -1;  // eigenvalues 1, -2
  const auto s = numerics::eigen_decompose(m);
  CHECK(s.values[0].real() == doctest::Approx(1.0));
  CHECK(s.values[1].real() == doctest::Approx(-2.0));
  CHECK(numerics::classify_spectrum(s.values) == EquilibriumKind::Saddle);
  // eigenvector of 1 is proportional to (1, 1)
  CHECK(std::abs(s.vectors[0][0] - s.vectors[0][1]) < 1e-14);
  CHECK(s.vectors[0][0].real() > 0);

  using V = std::vector<Complex>;
  CHECK(numerics::classify_spectrum(V{{-1, 0}, {-2, 0}}) == EquilibriumKind::StableNode);
  CHECK(numerics::classify_spectrum(V{{1, 0}, {2, 0}}) == EquilibriumKind::UnstableNode);
  CHECK(numerics::classify_spectrum(V{{-1, 1}, {-1, -1}}) == EquilibriumKind::StableSpiral);
  CHECK(numerics::classify_spectrum(V{{1, 1}, {1, -1}}) == EquilibriumKind::UnstableSpiral);
  CHECK(numerics::classify_spectrum(V{{1e-10, 0}, {-1, 0}}) == EquilibriumKind::NonHyperbolic);
}

TEST_CASE("least-squares line") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto fit = numerics::fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("sampled integration of exponential decay") {
  auto f = [](const State& x, State& dx) { dx[0] = -x[0]; };
  std::vector<double> ts, xs;
  ode::integrate_sampled(f, State{1.0}, 0.0, 5.0, 0.25, {}, [&](double t, const State& x) {
    ts.push_back(t);
    xs.push_back(x[0]);
    return true;
  });
  REQUIRE(ts.size() == 21);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(ts[i] == doctest::Approx(0.25 * static_cast<double>(i)));
    CHECK(std::abs(xs[i] - std::exp(-ts[i])) < 1e-10);
  }
  int calls = 0;
  ode::integrate_sampled(f, State{1.0}, 0.0, 5.0, 0.25, {}, [&](double, const State&) { return ++calls < 3; });
  CHECK(calls == 3);

  State x{1.0};
  const double t = ode::integrate_steps(f, x, 0.0, 2.0, {}, 0.01, [](double, const State&) { return true; });
  CHECK(t == doctest::Approx(2.0));
  CHECK(std::abs(x[0] - std::exp(-2.0)) < 1e-10);
}
