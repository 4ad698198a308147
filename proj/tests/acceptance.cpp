// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "kppfront/cli.hpp"
#include "kppfront/error.hpp"
#include "kppfront/frontsolver.hpp"
#include "kppfront/io.hpp"
#include "kppfront/pdesim.hpp"
#include "kppfront/phasespace.hpp"
#include "kppfront/verify.hpp"

using namespace kppfront;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = v.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %2d %s  %s: %s  [%.2f s of %.0f s%s]\n", id, pass ? "PASS" : "FAIL", title,
              v.detail.c_str(), secs, budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool is_complex(const Complex& z) { return z.imag() != 0.0; }

double max_drift(const SpaceTimeField& f, double u, double w) {
  double d = 0;
  for (std::size_t k = 0; k < f.times.size(); ++k)
    for (std::size_t i = 0; i < f.grid.n; ++i) d = std::max({d, std::abs(f.u[k][i] - u), std::abs(f.w[k][i] - w)});
  return d;
}

// Front speed of the Case 1 PDE seeded with the full-system front.
SpeedEstimate case1_speed(const FrontProfile& front, const ModelParams& p, std::size_t n) {
  const Grid1D grid{0.0, 200.0, n};
  const auto [u0, w0] = pdesim::profile_to_ic(front, grid, 60.0);
  const auto f = pdesim::simulate(p, grid, u0, w0, 20.0);
  return pdesim::estimate_front_speed(f, 1, 0.375);
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path config = argc > 1 ? fs::path(argv[1]) : fs::path(KPPFRONT_SOURCE_DIR) / "configs/acceptance.cfg";

  criterion(1, "closed-form eigenvalues vs numerical Jacobian", 5, [] {
    const auto r = verify::formula_audit(verify::random_audit_samples(100, 0));
    const bool ok = r.entries.size() == 100 && r.all_passed() && r.worst_eig_error < 1e-8;
    return Verdict{ok, fmt("100 samples, worst error %.2e, %zu flagged, %zu failed", r.worst_eig_error, r.flagged,
                           r.failed)};
  });

  criterion(2, "KPP nonlinearity checks", 1, [] {
    const auto entries = verify::kpp_audit(20, 0, 101);
    std::size_t passed = 0, ht = 0;
    for (const auto& e : entries) {
      if (e.report.all_passed() && e.report.checks.size() == 5) ++passed;
      if (e.family == ModelFamily::HollingTanner) ++ht;
    }
    return Verdict{entries.size() == 40 && ht == 20 && passed == 40,
                   fmt("%zu/%zu samples pass all five checks", passed, entries.size())};
  });

  criterion(3, "trapping triangle", 60, [] {
    const auto p = ModelParams::rm_case1(0.5, 1.0, 0.1, kUnset, 1.0);
    const double cstar = phasespace::critical_speed(ModelFamily::RosenzweigMacArthur, p);
    bool ok = true;
    std::string detail;
    for (double factor : {1.0, 1.1, 2.0}) {
      const auto r = verify::trapping_check(0.5, 1.0, factor * cstar, std::nullopt, 10000, 1000.0, 0, 1e-9);
      ok = ok && r.passed() && r.seeds == 10000;
      detail += fmt("%sc=%.2fc*: %zu exits, max penetration %.1e", detail.empty() ? "" : "; ", factor, r.exits,
                    r.max_penetration);
    }
    return Verdict{ok, detail};
  });

  criterion(4, "Fisher-KPP front above and below c*", 5, [] {
    const auto p = ModelParams::rm_case1(0.5, 1.0, 0.05, kUnset, 1.2);
    const auto fast = frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case1KPP2D, p));
    const bool ends = std::abs(fast.left_eq.state[0] - 0.75) < 1e-15 && fast.left_eq.state[1] == 0.0 &&
                      fast.right_eq.state[0] == 0.0 && fast.right_eq.state[1] == 0.0;
    const double res = fast.convergence_residuals.second;

    ShootingConfig cfg;
    const auto slow = frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case1KPP2D, p.with_speed(0.8)), cfg);
    const auto node = phasespace::eig_kpp_node(p, 0.8);
    const bool spiral = !slow.monotone && node.kind == EquilibriumKind::StableSpiral &&
                        slow.right_eq.kind == EquilibriumKind::StableSpiral && is_complex(node.lambda1);
    return Verdict{ends && fast.monotone && res < 1e-7 && spiral,
                   fmt("c=1.2 %s, residual %.2e; c=0.8 %s, O is %s", fast.monotone ? "monotone" : "non-monotone", res,
                       slow.monotone ? "monotone" : "non-monotone", to_string(node.kind))};
  });

  criterion(5, "Case 2 slow front and the delta0 threshold", 5, [] {
    const auto p = ModelParams::rm_case2(0.5, 1.0, 0.1, kUnset, kUnset);
    const auto front = frontsolver::shoot_front_2d(PhaseSystem(SystemId::Case2Slow2D, p));
    const double res = std::max(front.convergence_residuals.first, front.convergence_residuals.second);
    const bool ends = front.left_eq.name == "A" && front.right_eq.name == "B";

    const double d0 = phasespace::delta0_case2(0.5, 1.0);
    const auto above = p.with_delta(d0 * (1 + 1e-3));
    const auto eig = phasespace::case2_eigs(above, phasespace::Case2Point::A);
    const PhaseSystem sys(SystemId::Case2Slow2D, above);
    const auto a = phasespace::classify(sys, std::vector<double>{0.5, 0.75});
    const bool spiral = is_complex(eig.first) && is_complex(eig.second) && a.kind == EquilibriumKind::UnstableSpiral;
    const auto below = phasespace::case2_eigs(p, phasespace::Case2Point::A);
    const bool node_below = !is_complex(below.first) && !is_complex(below.second);
    return Verdict{ends && res < 1e-7 && spiral && node_below,
                   fmt("delta=0.1 residual %.2e; delta0=%.6f, A above it is %s (Im lambda %.3e)", res, d0,
                       to_string(a.kind), std::abs(eig.first.imag()))};
  });

  criterion(6, "full-system fronts", 30, [] {
    struct Case {
      SystemId id;
      ModelParams p;
    };
    bool ok = true;
    std::string detail;
    for (const Case& c : {Case{SystemId::Case1Full4D, ModelParams::rm_case1(0.5, 1.0, 0.05, 0.001, 1.2)},
                          Case{SystemId::Case2Full4D, ModelParams::rm_case2(0.5, 1.0, 0.1, 0.001, 1.0)},
                          Case{SystemId::HTFull4D, ModelParams::ht(2.0, 0.05, 0.001, 2.5)}}) {
      const auto f = frontsolver::shoot_front_full(PhaseSystem(c.id, c.p));
      const double res = std::max(f.convergence_residuals.first, f.convergence_residuals.second);
      ok = ok && res < 1e-6;
      detail += fmt("%s%s %.1e", detail.empty() ? "" : ", ", to_string(c.id), res);
    }
    return Verdict{ok, detail};
  });

  criterion(7, "singular-limit convergence", 600, [] {
    const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
    const SweepResult runs[] = {verify::epsilon_sweep_case1(0.5, 1.0, 1.2, 0.05, {1e-2, 5e-3, 2.5e-3, 1.25e-3}),
                                verify::delta_sweep_case1(0.5, 1.0, 1.2, deltas),
                                verify::delta_sweep_case2(0.5, 1.0, deltas)};
    const char* names[] = {"eps", "delta case1", "delta case2"};
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
      const auto& r = runs[k];
      bool decreasing = true;
      for (std::size_t i = 1; i < r.points.size(); ++i)
        decreasing = decreasing && r.points[i].sup_distance < r.points[i - 1].sup_distance;
      ok = ok && decreasing && r.captured >= 4 && r.slope >= 0.7 && r.slope <= 1.3 && r.r2 > 0.95;
      detail += fmt("%s%s slope %.3f r2 %.4f", k ? ", " : "", names[k], r.slope, r.r2);
    }
    return Verdict{ok, detail};
  });

  criterion(8, "Case 1 PDE front speed", 600, [] {
    const auto p = ModelParams::rm_case1(0.5, 1.0, 0.05, 0.001, 1.2);
    const auto front = frontsolver::shoot_front_full(PhaseSystem(SystemId::Case1Full4D, p));
    const auto coarse = case1_speed(front, p, 4001);
    const auto fine = case1_speed(front, p, 8001);
    const double rel = std::abs(fine.c - coarse.c) / coarse.c;
    const bool ok = std::abs(coarse.c - 1.2) < 0.02 * 1.2 && coarse.r2 > 0.999 && rel < 0.01;
    return Verdict{ok, fmt("c_est %.6f (r2 %.7f), halved dx %.6f, change %.1e", coarse.c, coarse.r2, fine.c, rel)};
  });

  criterion(9, "constant equilibria stay fixed", 60, [] {
    const auto p = ModelParams::rm_case1(0.5, 1.0, 0.05, 0.001, 1.2);
    const Grid1D grid{0.0, 200.0, 4001};
    double worst = 0;
    for (const auto& [u, w] : {std::pair{0.5, 0.75}, std::pair{1.0, 0.0}}) {
      const auto f = pdesim::simulate(p, grid, std::vector<double>(grid.n, u), std::vector<double>(grid.n, w), 10.0);
      worst = std::max(worst, max_drift(f, u, w));
    }
    return Verdict{worst <= 1e-10, fmt("A and B, worst drift %.1e", worst)};
  });

  criterion(10, "deterministic result JSON", 600, [&] {
    const auto scenarios = cli::parse_config(io::read_file(config));
    const fs::path root = fs::temp_directory_path() / ("kppfront_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    for (const char* run : {"a", "b"}) {
      RunOptions opt;
      opt.out = root / run;
      opt.format = OutputFormat::Json;
      std::ostringstream sink;
      cli::run(scenarios, opt, sink);
    }
    std::size_t same = 0;
    std::string differ;
    for (const auto& s : scenarios) {
      const auto a = io::read_file(root / "a" / s.name / "result.json");
      const auto b = io::read_file(root / "b" / s.name / "result.json");
      if (a == b) ++same;
      else differ += " " + s.name;
    }
    fs::remove_all(root);
    return Verdict{same == scenarios.size(),
                   fmt("%zu/%zu result.json identical%s", same, scenarios.size(), differ.c_str())};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
