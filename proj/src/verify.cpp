#include "kppfront/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "kppfront/error.hpp"

namespace kppfront::verify {
namespace {

// Runs body(i) for i in [0, n) on up to `jobs` threads.
template <class Body>
void parallel_for(std::size_t n, unsigned jobs, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

void check_decreasing(const std::vector<double>& v, const char* name) {
  require(!v.empty(), ErrorCode::InvalidArgument, std::string(name) + " list is empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    require(v[i] < v[i - 1], ErrorCode::InvalidArgument, std::string(name) + " list must be strictly decreasing");
}

void check_speed(double alpha, double eta, double c) {
  const auto p = ModelParams::rm_case1(alpha, eta, 1.0, kUnset, c);
  validate(p);
  const double cstar = phasespace::critical_speed(ModelFamily::RosenzweigMacArthur, p);
  if (!(c > cstar)) {
    std::ostringstream os;
    os.precision(17);
    os << "c = " << c << " must exceed the critical speed " << cstar;
    fail(ErrorCode::SpeedBelowCritical, os.str());
  }
}

double worst_residual(const FrontProfile& p) {
  return std::max(p.convergence_residuals.first, p.convergence_residuals.second);
}

// Fills one sweep point; front failures are recorded, not thrown.
template <class Compute>
void run_point(SweepPoint& pt, Compute&& compute) {
  try {
    compute(pt);
    pt.captured = true;
  } catch (const Error& e) {
    pt.captured = false;
    pt.error = e.what();
  }
}

}  // namespace

void fit_sweep(SweepResult& r) {
  std::vector<double> x, y, d;
  for (const auto& p : r.points) {
    if (!p.captured || !(p.sup_distance > 0) || !std::isfinite(p.sup_distance)) continue;
    x.push_back(std::log(p.value));
    y.push_back(std::log(p.sup_distance));
    d.push_back(p.sup_distance);
  }
  r.captured = x.size();
  if (x.size() < 3) {
    std::ostringstream os;
    os << "slope fit needs at least 3 captured points, have " << x.size();
    fail(ErrorCode::InsufficientData, os.str());
  }
  const auto fit = numerics::fit_line(x, y);
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.r2 = fit.r2;
  r.inversions = 0;
  bool within = true;
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] > d[k - 1]) {
      ++r.inversions;
      within = within && (d[k] - d[k - 1]) <= 0.05 * d[k - 1];
    }
  }
  r.inversion_flagged = r.inversions == 1 && within;
  r.monotone = r.inversions == 0 || r.inversion_flagged;
}

SweepResult epsilon_sweep_case1(double alpha, double eta, double c, double delta,
                                const std::vector<double>& eps_list, const SweepOptions& opt) {
  check_speed(alpha, eta, c);
  check_decreasing(eps_list, "epsilon");
  require(eps_list.back() > 0, ErrorCode::InvalidArgument, "epsilon values must be positive");
  if (!(eps_list.front() < delta))
    fail(ErrorCode::PreconditionViolation, "epsilon values must be well below delta");
  const auto params = ModelParams::rm_case1(alpha, eta, delta, kUnset, c);
  const std::vector<std::string> proj{"w1", "w2"};
  const double level = 0.5 * (1.0 - alpha * alpha);

  SweepResult r;
  r.parameter = "epsilon";
  r.comparison = "Case1Full4D vs Case1Reduced3D, (w1, w2) projection";
  const auto ref = frontsolver::project(
      frontsolver::shoot_front_full(PhaseSystem(SystemId::Case1Reduced3D, params), opt.shooting), proj);
  r.reference_residual = worst_residual(ref);
  r.points.resize(eps_list.size());
  parallel_for(eps_list.size(), opt.jobs, [&](std::size_t i) {
    auto& pt = r.points[i];
    pt.value = eps_list[i];
    pt.epsilon = eps_list[i];
    run_point(pt, [&](SweepPoint& p) {
      const auto f = frontsolver::shoot_front_full(
          PhaseSystem(SystemId::Case1Full4D, params.with_epsilon(p.value)), opt.shooting);
      p.residual = worst_residual(f);
      const auto a = frontsolver::align_profiles(ref, frontsolver::project(f, proj), "w1", level);
      p.sup_distance = a.sup_distance;
      p.shift = a.shift;
    });
  });
  fit_sweep(r);
  return r;
}

SweepResult delta_sweep_case1(double alpha, double eta, double c, const std::vector<double>& delta_list,
                              const SweepOptions& opt) {
  check_speed(alpha, eta, c);
  for (double d : delta_list)
    require(d > 0, ErrorCode::DomainError, "delta = 0 is the Fisher-KPP system itself; sweep values must be positive");
  check_decreasing(delta_list, "delta");
  const auto rule = opt.eps_rule ? opt.eps_rule : [](double d) { return d * d / 10.0; };
  const auto params = ModelParams::rm_case1(alpha, eta, delta_list.front(), kUnset, c);
  const std::vector<std::string> proj{"w1", "w2"};
  const double level = 0.5 * (1.0 - alpha * alpha);

  SweepResult r;
  r.parameter = "delta";
  r.comparison = opt.full_system ? "Case1Full4D (epsilon = eps_rule(delta)) vs Case1KPP2D, (w1, w2) projection"
                                 : "Case1Reduced3D vs Case1KPP2D, (w1, w2) projection";
  const auto ref = frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case1KPP2D, params), opt.shooting);
  r.reference_residual = worst_residual(ref);
  r.points.resize(delta_list.size());
  parallel_for(delta_list.size(), opt.jobs, [&](std::size_t i) {
    auto& pt = r.points[i];
    pt.value = delta_list[i];
    if (opt.full_system) pt.epsilon = rule(pt.value);
    run_point(pt, [&](SweepPoint& p) {
      const auto q = params.with_delta(p.value).with_epsilon(opt.full_system ? p.epsilon : kUnset);
      const auto f = frontsolver::shoot_front_full(
          PhaseSystem(opt.full_system ? SystemId::Case1Full4D : SystemId::Case1Reduced3D, q), opt.shooting);
      p.residual = worst_residual(f);
      const auto a = frontsolver::align_profiles(ref, frontsolver::project(f, proj), "w1", level);
      p.sup_distance = a.sup_distance;
      p.shift = a.shift;
    });
  });
  fit_sweep(r);
  return r;
}

SweepResult delta_sweep_case2(double alpha, double eta, const std::vector<double>& delta_list,
                              const SweepOptions& opt) {
  for (double d : delta_list)
    require(d > 0, ErrorCode::DomainError, "delta = 0 is the singular front itself; sweep values must be positive");
  check_decreasing(delta_list, "delta");
  const double d0 = phasespace::delta0_case2(alpha, eta);
  if (!(delta_list.front() < d0)) {
    std::ostringstream os;
    os.precision(17);
    os << "delta = " << delta_list.front() << " must be below delta0 = " << d0;
    fail(ErrorCode::PreconditionViolation, os.str());
  }
  const auto rule = opt.eps_rule ? opt.eps_rule : [](double d) { return d / 100.0; };
  const auto params = ModelParams::rm_case2(alpha, eta, delta_list.front(), kUnset, opt.mu);
  const std::vector<std::string> proj{"u1", "w1"};
  const double level = 0.5 * (1.0 - alpha * alpha);

  SweepResult r;
  r.parameter = "delta";
  r.comparison = opt.full_system
                     ? "Case2Full4D (epsilon = eps_rule(delta)) vs singular front, (u1, w1) in slow time delta*zeta"
                     : "Case2Slow2D vs singular front, (u1, w1) in slow time delta*zeta";
  const auto ref = frontsolver::singular_front_case2(params, opt.shooting);
  r.reference_residual = worst_residual(ref);
  r.points.resize(delta_list.size());
  parallel_for(delta_list.size(), opt.jobs, [&](std::size_t i) {
    auto& pt = r.points[i];
    pt.value = delta_list[i];
    if (opt.full_system) pt.epsilon = rule(pt.value);
    run_point(pt, [&](SweepPoint& p) {
      const auto q = params.with_delta(p.value).with_epsilon(opt.full_system ? p.epsilon : kUnset);
      const auto f = opt.full_system
                         ? frontsolver::shoot_front_full(PhaseSystem(SystemId::Case2Full4D, q), opt.shooting)
                         : frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case2Slow2D, q), opt.shooting);
      p.residual = worst_residual(f);
      const auto slow = frontsolver::rescale(frontsolver::project(f, proj), p.value);
      const auto a = frontsolver::align_profiles(ref, slow, "w1", level);
      p.sup_distance = a.sup_distance;
      p.shift = a.shift;
      double worst = 0.0;
      for (std::size_t k = 0; k < slow.size(); ++k) {
        if (slow.zeta[k] - slow.zeta.front() < opt.u1_transient) continue;
        const double w = slow.states[k][1];
        if (!(w < 1.0)) continue;
        worst = std::max(worst, std::abs(slow.states[k][0] - std::sqrt(1.0 - w)));
      }
      p.u1_residual = worst;
    });
  });
  fit_sweep(r);
  return r;
}

std::vector<AuditSample> random_audit_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto open = [&](double lo, double hi) {
    double t = 0;
    do t = u01(rng);
    while (t == 0.0);
    return lo + (hi - lo) * t;
  };
  std::vector<AuditSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    AuditSample s;
    s.alpha = open(0.05, 0.95);
    s.eta = open(0.1, 10.0);
    s.delta = open(0.0, phasespace::delta0_case2(s.alpha, s.eta));
    const double cstar = 2.0 * std::sqrt((1.0 - s.alpha) / (s.eta + 1.0));
    s.c = open(cstar, 3.0 * cstar);
    out.push_back(s);
  }
  return out;
}

namespace {

// Closed-form and numerical pairs, matched greedily.
double pair_error(const std::vector<Complex>& num, Complex e1, Complex e2) {
  auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  return std::min(std::max(rel(num[0], e1), rel(num[1], e2)), std::max(rel(num[0], e2), rel(num[1], e1)));
}

}  // namespace

AuditReport formula_audit(const std::vector<AuditSample>& samples, JacobianMethod method) {
  AuditReport rep;
  for (const auto& s : samples) {
    AuditEntry e;
    e.sample = s;
    const auto p1 = ModelParams::rm_case1(s.alpha, s.eta, s.delta, kUnset, s.c);
    const auto p2 = ModelParams::rm_case2(s.alpha, s.eta, s.delta, kUnset, 1.0);
    const PhaseSystem kpp(SystemId::Case1KPP2D, p1);
    const PhaseSystem slow(SystemId::Case2Slow2D, p2);
    const auto [ka, ko] = kpp.front_endpoints();
    const auto [ca, cb] = slow.front_endpoints();

    const auto saddle = phasespace::eig_kpp_saddle(p1, s.c);
    const auto node = phasespace::eig_kpp_node(p1, s.c);
    const auto [a1, a2] = phasespace::case2_eigs(p2, phasespace::Case2Point::A);
    const auto [b1, b2] = phasespace::case2_eigs(p2, phasespace::Case2Point::B);
    const std::vector<std::pair<std::string, std::pair<Complex, Complex>>> closed{
        {"kpp saddle", {Complex(saddle.lambda1), Complex(saddle.lambda2)}},
        {"kpp node", {node.lambda1, node.lambda2}},
        {"case2 A", {a1, a2}},
        {"case2 B", {b1, b2}}};
    const std::vector<std::vector<Complex>> numerical{
        numerics::eigen_decompose(phasespace::jacobian(kpp, ka, method)).values,
        numerics::eigen_decompose(phasespace::jacobian(kpp, ko, method)).values,
        numerics::eigen_decompose(phasespace::jacobian(slow, ca, method)).values,
        numerics::eigen_decompose(phasespace::jacobian(slow, cb, method)).values};

    double smallest = std::numeric_limits<double>::infinity(), gap = smallest;
    for (std::size_t i = 0; i < closed.size(); ++i) {
      const auto [l1, l2] = closed[i].second;
      const double err = pair_error(numerical[i], l1, l2);
      if (err >= e.eig_error) {
        e.eig_error = err;
        e.worst_formula = closed[i].first;
      }
      smallest = std::min({smallest, std::abs(l1.real()), std::abs(l2.real())});
      gap = std::min(gap, std::abs(l1 - l2) / std::max(1.0, std::abs(l1)));
    }
    const auto kr = phasespace::kpp_property_check(ModelFamily::RosenzweigMacArthur, p1, 101);
    e.kpp_passed = kr.all_passed();
    e.kpp_margin = std::numeric_limits<double>::infinity();
    for (const auto& ch : kr.checks) e.kpp_margin = std::min(e.kpp_margin, ch.margin);
    e.delta0_error = std::abs(phasespace::delta0_case2(s.alpha, s.eta) -
                              phasespace::delta0_case2_from_derivatives(s.alpha, s.eta)) /
                     std::max(1.0, phasespace::delta0_case2(s.alpha, s.eta));

    // near-degenerate spectra are reported but not scored
    if (1.0 - s.alpha < 1e-2) e.flag_reason = "alpha within 1e-2 of the saddle-node at alpha = 1";
    else if (smallest < 1e-6) e.flag_reason = "eigenvalue real part below 1e-6";
    else if (gap < 1e-6) e.flag_reason = "near-double eigenvalue";
    e.flagged = !e.flag_reason.empty();
    e.passed = e.flagged || (e.eig_error <= rep.tolerance && e.kpp_passed && e.delta0_error <= 1e-12);
    if (e.flagged) {
      ++rep.flagged;
    } else {
      rep.worst_eig_error = std::max(rep.worst_eig_error, e.eig_error);
      rep.worst_delta0_error = std::max(rep.worst_delta0_error, e.delta0_error);
    }
    if (!e.passed) ++rep.failed;
    rep.entries.push_back(std::move(e));
  }
  rep.worst_kpp_margin = std::numeric_limits<double>::infinity();
  for (const auto& e : rep.entries)
    if (!e.flagged) rep.worst_kpp_margin = std::min(rep.worst_kpp_margin, e.kpp_margin);
  return rep;
}

std::vector<KppAuditEntry> kpp_audit(std::size_t n, std::uint64_t seed, int grid_size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.05, 0.95), ue(0.1, 10.0), ub(0.1, 10.0);
  std::vector<KppAuditEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = ua(rng), e = ue(rng);
    auto p = ModelParams::rm_case1(a, e, 1.0, kUnset, kUnset);
    out.push_back({ModelFamily::RosenzweigMacArthur, p,
                   phasespace::kpp_property_check(ModelFamily::RosenzweigMacArthur, p, grid_size)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto p = ModelParams::ht(ub(rng), 1.0, kUnset, kUnset);
    out.push_back({ModelFamily::HollingTanner, p,
                   phasespace::kpp_property_check(ModelFamily::HollingTanner, p, grid_size)});
  }
  return out;
}

TrappingReport trapping_check(double alpha, double eta, double c, std::optional<double> b, std::size_t seeds,
                              double span, std::uint64_t seed, double tolerance) {
  require(span > 0, ErrorCode::InvalidArgument, "span must be positive");
  TrappingReport rep;
  rep.triangle = phasespace::build_trapping_triangle(alpha, eta, c, b);
  rep.seeds = seeds;
  rep.span = span;
  rep.tolerance = tolerance;
  rep.max_penetration = -std::numeric_limits<double>::infinity();
  const PhaseSystem sys(SystemId::Case1KPP2D, ModelParams::rm_case1(alpha, eta, 1.0, kUnset, c));
  const auto& t = rep.triangle;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const ode::Tolerances tol{1e-10, 1e-12, 0.0};
  auto f = [&sys](const State& x, State& dx) { sys.eval(x, dx); };
  for (std::size_t i = 0; i < seeds; ++i) {
    double s = u01(rng), r = u01(rng);
    if (s + r > 1.0) {
      s = 1.0 - s;
      r = 1.0 - r;
    }
    State x{s * t.vertices[1][0] + r * t.vertices[2][0], r * t.vertices[2][1]};
    double worst = t.penetration(x[0], x[1]);
    ode::integrate_steps(f, x, 0.0, span, tol, 1e-2, [&](double, const State& y) {
      worst = std::max(worst, t.penetration(y[0], y[1]));
      return worst <= tolerance;
    });
    rep.max_penetration = std::max(rep.max_penetration, worst);
    if (worst > tolerance) ++rep.exits;
  }
  return rep;
}

}  // namespace kppfront::verify
