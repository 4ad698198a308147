#include "kppfront/frontsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kppfront/error.hpp"

namespace kppfront {

void ShootingConfig::validate() const {
  auto need = [](bool ok, const char* msg) {
    if (!ok) fail(ErrorCode::ValidationError, msg);
  };
  need(launch_offset > 0, "launch_offset must satisfy launch_offset > 0");
  need(landing_radius > 0, "landing_radius must satisfy landing_radius > 0");
  need(landing_field_tol > 0, "landing_field_tol must satisfy landing_field_tol > 0");
  need(output_step > 0, "output_step must satisfy output_step > 0");
  need(max_span > 0, "max_span must satisfy max_span > 0");
  need(tol.rel > 0 && tol.abs > 0, "integrator tolerances must be positive");
  need(agree_tol > 0, "agree_tol must satisfy agree_tol > 0");
  need(first_window > 0 && restart_window > 0 && max_window >= first_window,
       "tracking windows must be positive with max_window >= first_window");
  need(tube_fraction > 0 && tube_floor > 0, "tube_fraction and tube_floor must be positive");
}

std::optional<std::size_t> FrontProfile::find_component(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

std::size_t FrontProfile::component(std::string_view name) const {
  const auto i = find_component(name);
  if (!i) fail(ErrorCode::InvalidArgument, "profile has no component " + std::string(name));
  return *i;
}

std::vector<double> FrontProfile::column(std::size_t i) const {
  std::vector<double> out(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k][i];
  return out;
}

double FrontProfile::value_at(std::size_t i, double z) const {
  require(!zeta.empty(), ErrorCode::InvalidArgument, "empty profile");
  if (z <= zeta.front()) return states.front()[i];
  if (z >= zeta.back()) return states.back()[i];
  const auto it = std::upper_bound(zeta.begin(), zeta.end(), z);
  const std::size_t k = static_cast<std::size_t>(it - zeta.begin()) - 1;
  const double h = zeta[k + 1] - zeta[k];
  const double t = (z - zeta[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * states[k][i] + (t3 - 2 * t2 + t) * h * slopes[k][i] +
         (-2 * t3 + 3 * t2) * states[k + 1][i] + (t3 - t2) * h * slopes[k + 1][i];
}

namespace frontsolver {
namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

bool is_kpp(SystemId id) { return id == SystemId::Case1KPP2D || id == SystemId::HTKPP2D; }

struct Landing {
  const PhaseSystem& sys;
  const State& target;
  const ShootingConfig& cfg;
  mutable State work;

  bool operator()(std::span<const double> x) const {
    if (dist2(x, target) >= cfg.landing_radius) return false;
    work.resize(x.size());
    sys.eval(x, work);
    return numerics::max_abs(work) < cfg.landing_field_tol;
  }
};

struct Run {
  std::vector<State> states;
  bool landed = false;
  std::string failure;
};

Run integrate_to_landing(const PhaseSystem& sys, const State& x0, const State& target, double direction,
                         const ShootingConfig& cfg) {
  Run run;
  const Landing landed{sys, target, cfg, {}};
  auto f = [&](const State& x, State& dx) {
    sys.eval(x, dx);
    if (direction < 0)
      for (auto& v : dx) v = -v;
  };
  try {
    ode::integrate_sampled(f, x0, 0.0, cfg.max_span, cfg.output_step, cfg.tol, [&](double, const State& x) {
      run.states.push_back(x);
      if (!all_finite(x) || numerics::max_abs(x) > 1e6) {
        run.failure = "orbit diverged";
        return false;
      }
      if (landed(x)) {
        run.landed = true;
        return false;
      }
      return true;
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DomainError && e.code() != ErrorCode::StepTooSmall) throw;
    run.failure = e.what();
  }
  if (!run.landed && run.failure.empty()) run.failure = "no capture within max_span";
  return run;
}

struct Eigenpair {
  double value = 0;
  State vector;
};

// Real eigenpairs of the linearization at x, in descending order.
std::vector<Eigenpair> real_eigenpairs(const PhaseSystem& sys, const State& x) {
  const auto spec = numerics::eigen_decompose(phasespace::jacobian(sys, x));
  std::vector<Eigenpair> out;
  for (std::size_t k = 0; k < spec.values.size(); ++k) {
    if (spec.values[k].imag() != 0) continue;
    Eigenpair e{spec.values[k].real(), State(x.size())};
    for (std::size_t i = 0; i < x.size(); ++i) e.vector[i] = spec.vectors[k][i].real();
    out.push_back(std::move(e));
  }
  return out;
}

const char* left_name(SystemId id) {
  switch (id) {
    case SystemId::HTFull4D:
    case SystemId::HTKPP2D: return "C";
    default: return "A";
  }
}

const char* right_name(SystemId id) { return is_kpp(id) ? "O" : "B"; }

// Fills tails, slopes, flags and residuals around a forward-ordered orbit.
FrontProfile assemble(const PhaseSystem& sys, std::vector<State> states, const ShootingConfig& cfg,
                      std::optional<double> left_rate, std::optional<double> right_rate) {
  const auto [left, right] = sys.front_endpoints();
  const double h = cfg.output_step;
  auto extend = [&](const State& eq, const State& from, double rate, double sign, std::vector<State>& out) {
    // linearized orbit eq + d exp(rate (zeta - zeta0)) walked away from the orbit
    State d(from.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = from[i] - eq[i];
    const double factor = std::exp(sign * rate * h);
    for (int k = 0; k < 1000000 && dist2(from, eq) >= cfg.landing_radius; ++k) {
      for (auto& v : d) v *= factor;
      State x(eq);
      for (std::size_t i = 0; i < d.size(); ++i) x[i] += d[i];
      out.push_back(x);
      if (dist2(x, eq) < cfg.landing_radius) break;
    }
  };
  if (left_rate && dist2(states.front(), left) >= cfg.landing_radius) {
    std::vector<State> head;
    extend(left, states.front(), *left_rate, -1.0, head);
    std::reverse(head.begin(), head.end());
    states.insert(states.begin(), head.begin(), head.end());
  }
  if (right_rate && dist2(states.back(), right) >= cfg.landing_radius) {
    std::vector<State> tail;
    extend(right, states.back(), *right_rate, 1.0, tail);
    states.insert(states.end(), tail.begin(), tail.end());
  }

  FrontProfile p;
  p.model_id = sys.id();
  p.names = sys.component_names();
  p.c = is_set(sys.params().c) ? sys.params().c : 1.0;
  p.zeta.resize(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) p.zeta[k] = static_cast<double>(k) * h;
  p.slopes.resize(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    p.slopes[k].resize(states[k].size());
    sys.eval(states[k], p.slopes[k]);
  }
  p.states = std::move(states);
  p.left_eq = phasespace::classify(sys, left);
  p.left_eq.name = left_name(sys.id());
  p.right_eq = phasespace::classify(sys, right);
  p.right_eq.name = right_name(sys.id());
  p.convergence_residuals = {dist2(p.states.front(), left), dist2(p.states.back(), right)};

  const std::size_t w = p.component("w1");
  p.monotone = true;
  for (std::size_t k = 1; k + 1 < p.size(); ++k)
    if (!(p.slopes[k][w] < 0)) {
      p.monotone = false;
      break;
    }
  const auto u = p.find_component("u1");
  p.positive = true;
  for (const auto& x : p.states)
    if (!(x[w] > 0) || (u && !(x[*u] > 0))) {
      p.positive = false;
      break;
    }
  return p;
}

}  // namespace

FrontProfile shoot_front_2d(const PhaseSystem& input, const ShootingConfig& cfg) {
  cfg.validate();
  const SystemId id = input.id();
  require(is_kpp(id) || id == SystemId::Case2Slow2D, ErrorCode::InvalidArgument,
          std::string("shoot_front_2d does not handle ") + to_string(id));
  const PhaseSystem sys = input.in_chart(Chart::Slow);
  const auto& p = sys.params();
  const auto [left, right] = sys.front_endpoints();

  if (is_kpp(id)) {
    const double cstar = phasespace::critical_speed(p.family, p);
    if (cfg.require_monotone && p.c < cstar * (1 - 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "c = " << p.c << " is below the critical speed " << cstar;
      fail(ErrorCode::SpeedBelowCritical, os.str());
    }
    const auto pairs = real_eigenpairs(sys, left);
    require(!pairs.empty() && pairs.front().value > 0, ErrorCode::NoCapture, "left equilibrium is not a saddle");
    const auto& unstable = pairs.front();
    // the sign that decreases w1 goes first
    const double first = unstable.vector[0] < 0 ? 1.0 : -1.0;
    std::string why;
    for (double sign : {first, -first}) {
      State x0 = left;
      for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += sign * cfg.launch_offset * unstable.vector[i];
      Run run = integrate_to_landing(sys, x0, right, 1.0, cfg);
      if (run.landed) {
        auto prof = assemble(sys, std::move(run.states), cfg, unstable.value, std::nullopt);
        prof.launch_sign = sign > 0 ? 1 : -1;
        return prof;
      }
      why += (why.empty() ? "" : "; ") + run.failure;
    }
    fail(ErrorCode::NoCapture, "no capture with either launch sign: " + why);
  }

  const double d0 = phasespace::delta0_case2(p.alpha, p.eta);
  if (!(p.delta < d0)) {
    std::ostringstream os;
    os.precision(17);
    os << "delta = " << p.delta << " must be below delta0 = " << d0;
    fail(ErrorCode::PreconditionViolation, os.str());
  }
  // A is an unstable node; the front is the one-dimensional stable manifold of B.
  const auto pairs = real_eigenpairs(sys, right);
  require(pairs.size() == 2 && pairs.back().value < 0, ErrorCode::NoCapture, "B is not a saddle");
  const auto& stable = pairs.back();
  const double first = stable.vector[1] > 0 ? 1.0 : -1.0;
  std::string why;
  for (double sign : {first, -first}) {
    State x0 = right;
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += sign * cfg.launch_offset * stable.vector[i];
    Run run = integrate_to_landing(sys, x0, left, -1.0, cfg);
    if (run.landed) {
      std::reverse(run.states.begin(), run.states.end());
      auto prof = assemble(sys, std::move(run.states), cfg, std::nullopt, stable.value);
      prof.launch_sign = sign > 0 ? 1 : -1;
      return prof;
    }
    why += (why.empty() ? "" : "; ") + run.failure;
  }
  fail(ErrorCode::NoCapture, "no capture with either launch sign: " + why);
}

namespace {

enum class Outcome { Landed, Up, Down, Timeout };

struct Trial {
  std::vector<State> states;
  Outcome outcome = Outcome::Timeout;
};

class Tracker {
 public:
  Tracker(const PhaseSystem& sys, const ShootingConfig& cfg)
      : sys_(sys), cfg_(cfg), right_(sys.front_endpoints().second), landed_{sys, right_, cfg, {}} {
    const auto names = sys.component_names();
    u_ = static_cast<std::size_t>(std::find(names.begin(), names.end(), "u1") - names.begin());
    w_ = static_cast<std::size_t>(std::find(names.begin(), names.end(), "w1") - names.begin());
  }

  // Signed distance from the parabola u1 = sqrt(1 - w1), scaled to the tube width.
  double excursion(std::span<const double> x) const {
    const double r = std::sqrt(std::max(0.0, 1.0 - x[w_]));
    return (x[u_] - r) / (cfg_.tube_fraction * std::max(r, cfg_.tube_floor));
  }

  Trial run(State x0, double span) const {
    Trial t;
    auto f = [this](const State& x, State& dx) { sys_.eval(x, dx); };
    try {
      ode::integrate_sampled(f, std::move(x0), 0.0, span, cfg_.output_step, cfg_.tol, [&](double, const State& x) {
        t.states.push_back(x);
        if (!all_finite(x)) {
          t.outcome = Outcome::Up;
          t.states.pop_back();
          return false;
        }
        if (landed_(x)) {
          t.outcome = Outcome::Landed;
          return false;
        }
        const double e = excursion(x);
        if (e > 1.0 || x[u_] > cfg_.box) {
          t.outcome = Outcome::Up;
          return false;
        }
        if (e < -1.0) {
          t.outcome = Outcome::Down;
          return false;
        }
        return true;
      });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainError && e.code() != ErrorCode::StepTooSmall) throw;
      t.outcome = (t.states.empty() || excursion(t.states.back()) >= 0) ? Outcome::Up : Outcome::Down;
    }
    return t;
  }

  FrontProfile track(const State& launch, double slow_rate, int sign) const {
    std::vector<State> accepted;
    State restart = launch;
    double window = cfg_.first_window;
    double used = 0.0;
    double max_jump = 0.0;
    std::size_t windows = 0;
    auto perturbed = [&](double s) {
      State x = restart;
      x[u_] += s;
      return x;
    };
    auto finish = [&](Trial& t) {
      accept(accepted, t.states, t.states.size());
      auto p = assemble(sys_, std::move(accepted), cfg_, slow_rate, std::nullopt);
      p.launch_sign = sign;
      p.restarts = windows;
      p.max_jump = max_jump;
      return p;
    };
    while (true) {
      const double span = cfg_.max_span - used;
      if (span <= 0) fail(ErrorCode::NoCapture, "tracked orbit exceeded max_span");
      ++windows;
      Trial lo, hi;
      double slo = 0, shi = 0;
      bool bracketed = false;
      for (double w = window; w <= cfg_.max_window * (1 + 1e-12); w *= 10) {
        lo = run(perturbed(-w), span);
        if (lo.outcome == Outcome::Landed) return finish(lo);
        hi = run(perturbed(w), span);
        if (hi.outcome == Outcome::Landed) return finish(hi);
        if (lo.outcome == Outcome::Timeout || hi.outcome == Outcome::Timeout)
          fail(ErrorCode::NoCapture, "tracked orbit neither escaped nor landed within max_span");
        if (lo.outcome != hi.outcome) {
          slo = -w;
          shi = w;
          bracketed = true;
          break;
        }
      }
      if (!bracketed) {
        std::ostringstream os;
        os.precision(6);
        os << "no bracketing perturbation at zeta = " << used << " (orbit leaves the slow manifold)";
        fail(ErrorCode::UnstableEscape, os.str());
      }
      const double base = restart[u_];
      while (true) {
        const double mid = 0.5 * (slo + shi);
        if (base + mid == base + slo || base + mid == base + shi) break;
        Trial m = run(perturbed(mid), span);
        if (m.outcome == Outcome::Landed) {
          if (windows > 1) max_jump = std::max(max_jump, std::abs(mid));
          return finish(m);
        }
        if (m.outcome == Outcome::Timeout)
          fail(ErrorCode::NoCapture, "tracked orbit neither escaped nor landed within max_span");
        if (m.outcome == lo.outcome) {
          slo = mid;
          lo = std::move(m);
        } else {
          shi = mid;
          hi = std::move(m);
        }
      }
      const std::size_t n = std::min(lo.states.size(), hi.states.size());
      std::size_t k = 0;
      while (k < n && dist_inf(lo.states[k], hi.states[k]) <= cfg_.agree_tol) ++k;
      if (k < 2) {
        std::ostringstream os;
        os.precision(6);
        os << "tracking made no progress at zeta = " << used;
        fail(ErrorCode::UnstableEscape, os.str());
      }
      if (windows > 1) max_jump = std::max(max_jump, std::abs(slo));
      accept(accepted, lo.states, k - 1);
      restart = lo.states[k - 1];
      used += static_cast<double>(k - 1) * cfg_.output_step;
      window = cfg_.restart_window;
    }
  }

 private:
  static double dist_inf(const State& a, const State& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }

  void accept(std::vector<State>& out, const std::vector<State>& states, std::size_t count) const {
    for (std::size_t k = 0; k < count; ++k) {
      const auto& x = states[k];
      const bool inside = x[u_] >= -cfg_.box_tol && x[w_] >= -cfg_.box_tol && numerics::max_abs(x) <= cfg_.box;
      if (!inside) fail(ErrorCode::UnstableEscape, "orbit left the positivity box");
      out.push_back(x);
    }
  }

  const PhaseSystem& sys_;
  const ShootingConfig& cfg_;
  State right_;
  Landing landed_;
  std::size_t u_ = 0, w_ = 0;
};

}  // namespace

FrontProfile shoot_front_full(const PhaseSystem& input, const ShootingConfig& cfg) {
  cfg.validate();
  const SystemId id = input.id();
  require(id == SystemId::Case1Full4D || id == SystemId::Case1Reduced3D || id == SystemId::Case2Full4D ||
              id == SystemId::HTFull4D,
          ErrorCode::InvalidArgument, std::string("shoot_front_full does not handle ") + to_string(id));
  const PhaseSystem sys = input.in_chart(Chart::Slow);
  const State left = sys.front_endpoints().first;
  // slowest unstable direction of the full linearization
  const auto pairs = real_eigenpairs(sys, left);
  const Eigenpair* slow = nullptr;
  for (const auto& e : pairs)
    if (e.value > kClassificationTolerance) slow = &e;
  require(slow != nullptr, ErrorCode::NoCapture, "left equilibrium has no real unstable direction");
  const auto names = sys.component_names();
  const std::size_t w = static_cast<std::size_t>(std::find(names.begin(), names.end(), "w1") - names.begin());
  const int first = slow->vector[w] < 0 ? 1 : -1;
  const Tracker tracker(sys, cfg);
  std::optional<Error> first_error;
  for (int sign : {first, -first}) {
    State x0 = left;
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += sign * cfg.launch_offset * slow->vector[i];
    try {
      return tracker.track(x0, slow->value, sign);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoCapture && e.code() != ErrorCode::UnstableEscape) throw;
      if (!first_error) first_error = e;
    }
  }
  throw *first_error;
}

FrontProfile singular_front_case2(const ModelParams& params, const ShootingConfig& cfg) {
  cfg.validate();
  const PhaseSystem sys(SystemId::Case2SlowScalar, params);
  const auto [left, right] = sys.front_endpoints();
  const auto pairs = real_eigenpairs(sys, left);
  require(pairs.size() == 1 && pairs[0].value > 0, ErrorCode::NoCapture, "A is not repelling on the parabola");
  Run run = integrate_to_landing(sys, State{left[0] - cfg.launch_offset}, right, 1.0, cfg);
  if (!run.landed) fail(ErrorCode::NoCapture, run.failure);
  FrontProfile w = assemble(sys, std::move(run.states), cfg, pairs[0].value, std::nullopt);
  w.launch_sign = -1;
  FrontProfile p = w;
  p.names = {"u1", "w1"};
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double u = std::sqrt(1.0 - w.states[k][0]);
    p.states[k] = {u, w.states[k][0]};
    p.slopes[k] = {-0.5 * w.slopes[k][0] / u, w.slopes[k][0]};
  }
  // equilibria of the delta = 0 layer problem at A and B
  const PhaseSystem layer(SystemId::Case2Layer, params);
  const auto [a, b] = layer.front_endpoints();
  p.left_eq = phasespace::classify(layer, a);
  p.left_eq.name = "A";
  p.right_eq = phasespace::classify(layer, b);
  p.right_eq.name = "B";
  return p;
}

double level_crossing(const FrontProfile& p, std::size_t i, double level) {
  require(i < p.dim(), ErrorCode::InvalidArgument, "component index out of range");
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double a = p.states[k][i] - level, b = p.states[k + 1][i] - level;
    if (a == 0) return p.zeta[k];
    if ((a < 0) == (b < 0) || b == 0) continue;
    double lo = p.zeta[k], hi = p.zeta[k + 1];
    const bool rising = a < 0;
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double v = p.value_at(i, mid) - level;
      if ((v < 0) == rising) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  std::ostringstream os;
  os.precision(17);
  os << "component " << p.names[i] << " never crosses level " << level;
  fail(ErrorCode::LevelNotCrossed, os.str());
}

Alignment align_profiles(const FrontProfile& p, const FrontProfile& q, std::string_view component, double level) {
  const double zp = level_crossing(p, p.component(component), level);
  const double zq = level_crossing(q, q.component(component), level);
  Alignment a;
  a.shift = zq - zp;
  std::vector<std::pair<std::size_t, std::size_t>> common;
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (const auto j = q.find_component(p.names[i])) common.emplace_back(i, *j);
  const double lo = std::max(p.zeta.front(), q.zeta.front() - a.shift);
  const double hi = std::min(p.zeta.back(), q.zeta.back() - a.shift);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double z = p.zeta[k];
    if (z < lo || z > hi) continue;
    ++a.compared_points;
    for (const auto& [i, j] : common)
      a.sup_distance = std::max(a.sup_distance, std::abs(p.states[k][i] - q.value_at(j, z + a.shift)));
  }
  return a;
}

FrontProfile project(const FrontProfile& p, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(p.component(n));
  FrontProfile out = p;
  out.names = names;
  auto pick = [&](const State& x) {
    State y(idx.size());
    for (std::size_t m = 0; m < idx.size(); ++m) y[m] = x[idx[m]];
    return y;
  };
  out.left_eq.state = pick(p.left_eq.state);
  out.right_eq.state = pick(p.right_eq.state);
  for (std::size_t k = 0; k < p.size(); ++k) {
    State x(idx.size()), s(idx.size());
    for (std::size_t m = 0; m < idx.size(); ++m) {
      x[m] = p.states[k][idx[m]];
      s[m] = p.slopes[k][idx[m]];
    }
    out.states[k] = std::move(x);
    out.slopes[k] = std::move(s);
  }
  return out;
}

FrontProfile translate(const FrontProfile& p, double dz) {
  FrontProfile out = p;
  for (auto& z : out.zeta) z += dz;
  return out;
}

FrontProfile rescale(const FrontProfile& p, double factor) {
  require(factor > 0, ErrorCode::InvalidArgument, "rescale factor must be positive");
  FrontProfile out = p;
  for (auto& z : out.zeta) z *= factor;
  for (auto& s : out.slopes)
    for (auto& v : s) v /= factor;
  return out;
}

Adherence slow_manifold_adherence(const FrontProfile& p, const ModelParams& params, double transient) {
  require(p.model_id == SystemId::Case1Full4D, ErrorCode::InvalidArgument,
          "slow-manifold adherence is defined for Case1Full4D fronts");
  require(params.epsilon > 0, ErrorCode::ValidationError, "epsilon must satisfy epsilon > 0");
  Adherence a;
  a.transient = transient;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p.zeta[k] - p.zeta.front() < transient) continue;
    a.max_residual = std::max(a.max_residual,
                              phasespace::manifold_residual(SlowManifoldId::MCase1Eps0, params, p.states[k]));
  }
  a.constant = a.max_residual / params.epsilon;
  return a;
}

std::pair<std::string, std::string> endpoint_names(SystemId id) { return {left_name(id), right_name(id)}; }

}  // namespace frontsolver
}  // namespace kppfront
