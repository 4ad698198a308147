#include "kppfront/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kppfront/error.hpp"
#include "kppfront/kinetics.hpp"

namespace kppfront {

const char* to_string(SystemId id) {
  switch (id) {
    case SystemId::Case1Full4D: return "Case1Full4D";
    case SystemId::Case1Reduced3D: return "Case1Reduced3D";
    case SystemId::Case1KPP2D: return "Case1KPP2D";
    case SystemId::Case2Full4D: return "Case2Full4D";
    case SystemId::Case2Slow2D: return "Case2Slow2D";
    case SystemId::Case2Layer: return "Case2Layer";
    case SystemId::Case2SlowScalar: return "Case2SlowScalar";
    case SystemId::HTFull4D: return "HTFull4D";
    case SystemId::HTKPP2D: return "HTKPP2D";
  }
  return "Unknown";
}

const char* to_string(Chart chart) { return chart == Chart::Slow ? "Slow" : "Fast"; }

const char* to_string(SlowManifoldId id) {
  switch (id) {
    case SlowManifoldId::MCase1Eps0: return "MCase1Eps0";
    case SlowManifoldId::MCase1Delta0: return "MCase1Delta0";
    case SlowManifoldId::MCase2Eps0: return "MCase2Eps0";
    case SlowManifoldId::MCase2Delta0: return "MCase2Delta0";
  }
  return "Unknown";
}

namespace {

using kinetics::parabola_branch;

bool is_case1(SystemId id) {
  return id == SystemId::Case1Full4D || id == SystemId::Case1Reduced3D || id == SystemId::Case1KPP2D;
}
bool is_ht(SystemId id) { return id == SystemId::HTFull4D || id == SystemId::HTKPP2D; }
bool is_full4d(SystemId id) {
  return id == SystemId::Case1Full4D || id == SystemId::Case2Full4D || id == SystemId::HTFull4D;
}
bool fast_chart_exists(SystemId id) {
  return is_full4d(id) || id == SystemId::Case1Reduced3D || id == SystemId::Case2Slow2D;
}

// u1 w1/(1+u1) - u1(1-u1): the negated prey kinetics at gamma = 1.
template <class T>
T g_term(const T& u, const T& w) {
  return -kinetics::prey_growth(u, w, 1.0);
}

void check_system(SystemId id, const ModelParams& p, Chart chart) {
  validate(p);
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorCode::ValidationError, msg);
  };
  const std::string name = to_string(id);
  if (is_ht(id)) {
    need(p.family == ModelFamily::HollingTanner, name + " requires the HollingTanner family");
  } else if (is_case1(id)) {
    need(p.family == ModelFamily::RosenzweigMacArthur && p.scaling == ScalingMode::Case1SlowPrey,
         name + " requires Rosenzweig-MacArthur parameters with Case1SlowPrey scaling");
  } else {
    need(p.family == ModelFamily::RosenzweigMacArthur &&
             p.scaling == ScalingMode::Case2VanishingDiffusion,
         name + " requires Rosenzweig-MacArthur parameters with Case2VanishingDiffusion scaling");
  }
  need(p.gamma == 1.0, "traveling-wave systems require gamma = 1");
  if (is_case1(id) || is_ht(id)) need(p.c > 0, "c must satisfy c > 0");
  if (chart == Chart::Fast)
    need(fast_chart_exists(id), name + " has no fast chart");
  if (is_full4d(id)) {
    need(is_set(p.epsilon), "epsilon must be set for " + name);
    if (chart == Chart::Slow) need(p.epsilon > 0, "epsilon must satisfy epsilon > 0 in the slow chart");
  }
  if (id == SystemId::Case2Full4D) need(p.mu > 0, "mu must satisfy mu > 0");
}

template <class T>
void field(SystemId id, const ModelParams& p, Chart chart, std::span<const T> x, std::span<T> dx) {
  const double a = p.alpha, eta = p.eta, d = p.delta, c = p.c;
  switch (id) {
    case SystemId::Case1Full4D:
    case SystemId::HTFull4D: {
      // fast chart: zeta = eps xi
      const double e = p.epsilon;
      const T pred = id == SystemId::HTFull4D ? kinetics::ht_predator(x[0], x[2], p.beta)
                                              : kinetics::rm_predator(x[0], x[2], a, eta);
      dx[0] = e * x[1];
      dx[1] = -c * x[1] + g_term(x[0], x[2]) / d;
      dx[2] = e * x[3];
      dx[3] = e * (-c * x[3] - pred);
      if (chart == Chart::Slow)
        for (auto& v : dx) v /= e;
      return;
    }
    case SystemId::Case2Full4D: {
      const double e = p.epsilon, mu = p.mu;
      dx[0] = e * x[1];
      dx[1] = -x[1] + g_term(x[0], x[2]);
      dx[2] = e * x[3];
      dx[3] = -x[3] / mu - (d / mu) * kinetics::rm_predator(x[0], x[2], a, eta);
      if (chart == Chart::Slow)
        for (auto& v : dx) v /= e;
      return;
    }
    case SystemId::Case1Reduced3D: {
      // fast chart: zeta = delta varsigma
      const T pred = kinetics::rm_predator(x[0], x[1], a, eta);
      const double s = chart == Chart::Slow ? 1.0 : d;
      dx[0] = s * g_term(x[0], x[1]) / (c * d);
      dx[1] = s * x[2];
      dx[2] = s * (-c * x[2] - pred);
      return;
    }
    case SystemId::Case1KPP2D: {
      const T r = parabola_branch(x[0]);
      dx[0] = x[1];
      dx[1] = -c * x[1] - x[0] * (r - a) / (eta + r);
      return;
    }
    case SystemId::HTKPP2D: {
      const T r = parabola_branch(x[0]);
      dx[0] = x[1];
      dx[1] = -c * x[1] - x[0] * (r - p.beta * x[0]) / r;
      return;
    }
    case SystemId::Case2Slow2D: {
      // fast chart: varsigma = delta zeta
      const double s = chart == Chart::Slow ? 1.0 : 1.0 / d;
      dx[0] = s * g_term(x[0], x[1]);
      dx[1] = -s * d * kinetics::rm_predator(x[0], x[1], a, eta);
      return;
    }
    case SystemId::Case2Layer:
      dx[0] = g_term(x[0], x[1]);
      dx[1] = T(0.0);
      return;
    case SystemId::Case2SlowScalar: {
      const T r = parabola_branch(x[0]);
      dx[0] = x[0] * (a - r) / (eta + r);
      return;
    }
  }
}

}  // namespace

PhaseSystem::PhaseSystem(SystemId id, ModelParams params, Chart chart)
    : id_(id), params_(params), chart_(chart) {
  check_system(id, params_, chart);
}

std::size_t PhaseSystem::dim() const {
  switch (id_) {
    case SystemId::Case1Full4D:
    case SystemId::Case2Full4D:
    case SystemId::HTFull4D: return 4;
    case SystemId::Case1Reduced3D: return 3;
    case SystemId::Case2SlowScalar: return 1;
    default: return 2;
  }
}

std::vector<std::string> PhaseSystem::component_names() const {
  switch (dim()) {
    case 4: return {"u1", "u2", "w1", "w2"};
    case 3: return {"u1", "w1", "w2"};
    case 1: return {"w1"};
    default:
      if (id_ == SystemId::Case1KPP2D || id_ == SystemId::HTKPP2D) return {"w1", "w2"};
      return {"u1", "w1"};
  }
}

std::vector<SlowManifoldId> PhaseSystem::manifolds() const {
  switch (id_) {
    case SystemId::Case1Full4D: return {SlowManifoldId::MCase1Eps0};
    case SystemId::Case1Reduced3D: return {SlowManifoldId::MCase1Delta0};
    case SystemId::Case2Full4D: return {SlowManifoldId::MCase2Eps0};
    case SystemId::Case2Slow2D:
    case SystemId::Case2Layer: return {SlowManifoldId::MCase2Delta0};
    default: return {};
  }
}

bool PhaseSystem::has_fast_chart() const { return fast_chart_exists(id_); }

double PhaseSystem::chart_scale() const {
  if (is_full4d(id_)) return params_.epsilon;
  if (id_ == SystemId::Case1Reduced3D) return params_.delta;
  if (id_ == SystemId::Case2Slow2D) return 1.0 / params_.delta;
  return 1.0;
}

void PhaseSystem::eval(std::span<const double> x, std::span<double> dx) const {
  field<double>(id_, params_, chart_, x, dx);
}

void PhaseSystem::eval(std::span<const Complex> x, std::span<Complex> dx) const {
  field<Complex>(id_, params_, chart_, x, dx);
}

std::pair<State, State> PhaseSystem::front_endpoints() const {
  double ul = 0, wl = 0;
  if (is_ht(id_)) {
    std::tie(ul, wl) = models::ht_coexistence(params_.beta);
  } else {
    ul = params_.alpha;
    wl = 1.0 - ul * ul;
  }
  switch (id_) {
    case SystemId::Case1Full4D:
    case SystemId::Case2Full4D:
    case SystemId::HTFull4D: return {{ul, 0, wl, 0}, {1, 0, 0, 0}};
    case SystemId::Case1Reduced3D: return {{ul, wl, 0}, {1, 0, 0}};
    case SystemId::Case1KPP2D:
    case SystemId::HTKPP2D: return {{wl, 0}, {0, 0}};
    case SystemId::Case2Slow2D:
    case SystemId::Case2Layer: return {{ul, wl}, {1, 0}};
    case SystemId::Case2SlowScalar: return {{wl}, {0}};
  }
  return {};
}

namespace phasespace {

State vector_field(const PhaseSystem& sys, std::span<const double> state) {
  require(state.size() == sys.dim(), ErrorCode::InvalidArgument, "state dimension mismatch");
  State out(sys.dim());
  sys.eval(state, out);
  return out;
}

namespace {

void check_kpp_params(ModelFamily family, const ModelParams& p) {
  if (family == ModelFamily::RosenzweigMacArthur) {
    require(p.alpha > 0 && p.alpha < 1, ErrorCode::ValidationError, "alpha must satisfy 0 < alpha < 1");
    require(p.eta > 0, ErrorCode::ValidationError, "eta must satisfy eta > 0");
  } else {
    require(p.beta > 0, ErrorCode::ValidationError, "beta must satisfy beta > 0");
  }
}

void check_w(double w1) {
  require(w1 >= 0, ErrorCode::DomainError, "w1 must satisfy w1 >= 0");
  require(w1 < 1.0 - kinetics::kSingularGuard, ErrorCode::DomainError, "w1 too close to 1");
}

double kpp_first_derivative(ModelFamily family, const ModelParams& p, double w) {
  const double s = std::sqrt(1.0 - w);
  if (family == ModelFamily::RosenzweigMacArthur) {
    const double h = (s - p.alpha) / (p.eta + s);
    const double hw = -(p.eta + p.alpha) / (2.0 * s * (p.eta + s) * (p.eta + s));
    return h + w * hw;
  }
  return 1.0 - p.beta * (2.0 * w / s + 0.5 * w * w / (s * s * s));
}

}  // namespace

double kpp_nonlinearity(ModelFamily family, const ModelParams& params, double w1) {
  check_kpp_params(family, params);
  check_w(w1);
  const double s = std::sqrt(1.0 - w1);
  if (family == ModelFamily::RosenzweigMacArthur)
    return w1 * (s - params.alpha) / (params.eta + s);
  return w1 * (s - params.beta * w1) / s;
}

double kpp_nonlinearity_second_derivative(ModelFamily family, const ModelParams& params, double w1) {
  check_kpp_params(family, params);
  check_w(w1);
  const double s = std::sqrt(1.0 - w1);
  if (family == ModelFamily::RosenzweigMacArthur) {
    const double a = params.alpha, eta = params.eta;
    const double q = eta + s;
    const double hw = -(eta + a) / (2.0 * s * q * q);
    const double hww = -(eta + a) * (eta + 3.0 * s) / (4.0 * s * s * s * q * q * q);
    return 2.0 * hw + w1 * hww;
  }
  const double s3 = s * s * s;
  return -params.beta * (2.0 / s + 2.0 * w1 / s3 + 0.75 * w1 * w1 / (s3 * s * s));
}

double kpp_root(ModelFamily family, const ModelParams& params) {
  check_kpp_params(family, params);
  if (family == ModelFamily::RosenzweigMacArthur) return 1.0 - params.alpha * params.alpha;
  return models::ht_coexistence(params.beta).second;
}

bool KppReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const KppCheck& c) { return c.passed; });
}

KppReport kpp_property_check(ModelFamily family, const ModelParams& params, int grid_size) {
  require(grid_size >= 3, ErrorCode::InvalidArgument, "grid_size must be at least 3");
  check_kpp_params(family, params);
  constexpr double kZeroTol = 1e-12;
  KppReport r;
  r.root = kpp_root(family, params);
  auto add = [&](std::string name, double value, double margin) {
    r.checks.push_back({std::move(name), margin > 0, value, margin});
  };
  const double f0 = kpp_nonlinearity(family, params, 0.0);
  add("f(0) = 0", f0, kZeroTol - std::abs(f0));
  const double fr = kpp_nonlinearity(family, params, r.root);
  add("f(root) = 0", fr, kZeroTol - std::abs(fr));
  const double d0 = kpp_first_derivative(family, params, 0.0);
  add("f'(0) > 0", d0, d0);
  const double dr = family == ModelFamily::RosenzweigMacArthur
                        ? (params.alpha * params.alpha - 1.0) /
                              (2.0 * params.alpha * (params.alpha + params.eta))
                        : kpp_first_derivative(family, params, r.root);
  add("f'(root) < 0", dr, -dr);
  // open interval (0, 1): endpoints excluded
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid_size; ++i) {
    const double w = static_cast<double>(i) / (grid_size + 1);
    worst = std::max(worst, kpp_nonlinearity_second_derivative(family, params, w));
  }
  add("f'' < 0", worst, -worst);
  return r;
}

double critical_speed(ModelFamily family, const ModelParams& params) {
  if (family == ModelFamily::HollingTanner) return 2.0;
  // defined on the closed boundary alpha = 0, eta = 0 as well
  require(params.alpha >= 0 && params.alpha < 1 && params.eta >= 0, ErrorCode::ValidationError,
          "critical speed needs 0 <= alpha < 1 and eta >= 0");
  return 2.0 * std::sqrt((1.0 - params.alpha) / (params.eta + 1.0));
}

SaddleEigen eig_kpp_saddle(const ModelParams& params, double c) {
  check_kpp_params(ModelFamily::RosenzweigMacArthur, params);
  require(c > 0, ErrorCode::ValidationError, "c must satisfy c > 0");
  const double a = params.alpha, eta = params.eta;
  const double root = std::sqrt(c * c + 2.0 * (1.0 - a * a) / (a * (eta + a)));
  SaddleEigen e;
  e.lambda1 = 0.5 * (-c + root);
  e.lambda2 = 0.5 * (-c - root);
  e.v1 = {1.0, e.lambda1};
  e.v2 = {1.0, e.lambda2};
  return e;
}

NodeEigen eig_kpp_node(const ModelParams& params, double c) {
  check_kpp_params(ModelFamily::RosenzweigMacArthur, params);
  require(c > 0, ErrorCode::ValidationError, "c must satisfy c > 0");
  const double k = 4.0 * (1.0 - params.alpha) / (params.eta + 1.0);
  const double disc = c * c - k;
  NodeEigen e;
  const Complex root = std::sqrt(Complex(disc, 0.0));
  e.lambda1 = 0.5 * (-c + root);
  e.lambda2 = 0.5 * (-c - root);
  if (std::abs(disc) <= 1e-12 * std::max(1.0, k)) {
    e.lambda1 = e.lambda2 = Complex(-0.5 * c, 0.0);
    e.kind = EquilibriumKind::NonHyperbolic;
  } else {
    e.kind = disc > 0 ? EquilibriumKind::StableNode : EquilibriumKind::StableSpiral;
  }
  return e;
}

std::pair<Complex, Complex> case2_eigs(const ModelParams& params, Case2Point which) {
  require(params.family == ModelFamily::RosenzweigMacArthur &&
              params.scaling == ScalingMode::Case2VanishingDiffusion,
          ErrorCode::ValidationError, "case2_eigs requires Case 2 Rosenzweig-MacArthur parameters");
  check_kpp_params(ModelFamily::RosenzweigMacArthur, params);
  require(params.delta > 0, ErrorCode::ValidationError, "delta must satisfy delta > 0");
  const double a = params.alpha, eta = params.eta, d = params.delta;
  if (which == Case2Point::B) return {Complex(1.0), Complex(-d * (1.0 - a) / (eta + 1.0))};
  const double f1u = 2.0 * a * a / (1.0 + a);
  const double f1w = a / (1.0 + a);
  const double f2u = -(1.0 - a * a) / (eta + a);
  const Complex root = std::sqrt(Complex(f1u * f1u + 4.0 * d * f1w * f2u, 0.0));
  return {0.5 * (f1u + root), 0.5 * (f1u - root)};
}

double delta0_case2(double alpha, double eta) {
  require(alpha > 0 && alpha < 1, ErrorCode::ValidationError, "alpha must satisfy 0 < alpha < 1");
  require(eta > 0, ErrorCode::ValidationError, "eta must satisfy eta > 0");
  return alpha * alpha * alpha * (eta + alpha) / ((1.0 - alpha) * (1.0 + alpha) * (1.0 + alpha));
}

double delta0_case2_from_derivatives(double alpha, double eta) {
  require(alpha > 0 && alpha < 1, ErrorCode::ValidationError, "alpha must satisfy 0 < alpha < 1");
  require(eta > 0, ErrorCode::ValidationError, "eta must satisfy eta > 0");
  const double f1u = 2.0 * alpha * alpha / (1.0 + alpha);
  const double f1w = alpha / (1.0 + alpha);
  const double f2u = -(1.0 - alpha * alpha) / (eta + alpha);
  return -f1u * f1u / (4.0 * f1w * f2u);
}

double TrappingTriangle::penetration(double w1, double w2) const {
  const double right = vertices[1][0];
  return std::max({w2, w1 - right, -(w2 + b * w1) / std::sqrt(1.0 + b * b)});
}

std::pair<double, double> TrappingTriangle::slope_interval() const {
  const double k = 4.0 * (1.0 - alpha) / (eta + 1.0);
  const double r = std::sqrt(std::max(0.0, c * c - k));
  return {0.5 * (c - r), 0.5 * (c + r)};
}

TrappingTriangle build_trapping_triangle(double alpha, double eta, double c, std::optional<double> b,
                                         int samples_per_side) {
  require(alpha > 0 && alpha < 1, ErrorCode::ValidationError, "alpha must satisfy 0 < alpha < 1");
  require(eta > 0, ErrorCode::ValidationError, "eta must satisfy eta > 0");
  require(samples_per_side >= 1, ErrorCode::InvalidArgument, "samples_per_side must be positive");
  ModelParams p = ModelParams::rm_case1(alpha, eta, 1.0, kUnset, c);
  const double cstar = critical_speed(ModelFamily::RosenzweigMacArthur, p);
  // c == c* up to rounding counts as critical
  const bool critical = std::abs(c - cstar) <= 1e-12 * cstar;
  if (!critical && c < cstar) {
    std::ostringstream os;
    os.precision(17);
    os << "c = " << c << " is below the critical speed " << cstar;
    fail(ErrorCode::SpeedBelowCritical, os.str());
  }
  TrappingTriangle t;
  t.alpha = alpha;
  t.eta = eta;
  t.c = c;
  t.b = b.value_or(0.5 * c);
  if (b) {
    const auto [lo, hi] = t.slope_interval();
    const bool ok = critical ? std::abs(*b - 0.5 * c) <= 1e-12 * c : (*b > lo && *b < hi);
    if (!ok) {
      std::ostringstream os;
      os.precision(17);
      os << "b = " << *b << " outside the admissible interval (" << lo << ", " << hi << ")";
      fail(ErrorCode::SlopeOutOfRange, os.str());
    }
  }
  const double right = 1.0 - alpha * alpha;
  t.vertices = {{{0.0, 0.0}, {right, 0.0}, {right, -t.b * right}}};

  const PhaseSystem sys(SystemId::Case1KPP2D, p);
  const double norm = std::sqrt(1.0 + t.b * t.b);
  t.min_inward_flux = std::numeric_limits<double>::infinity();
  State x(2), dx(2);
  const int n = samples_per_side;
  for (int side = 0; side < 3; ++side) {
    for (int i = 1; i <= n; ++i) {
      const double s = static_cast<double>(i) / (n + 1);
      double flux = 0;
      if (side == 0) {
        x = {s * right, 0.0};
        sys.eval(x, dx);
        flux = -dx[1];
      } else if (side == 1) {
        x = {right, -s * t.b * right};
        sys.eval(x, dx);
        flux = -dx[0];
      } else {
        x = {s * right, -s * t.b * right};
        sys.eval(x, dx);
        flux = (t.b * dx[0] + dx[1]) / norm;
      }
      t.certificate.push_back({side, x[0], x[1], flux});
      t.min_inward_flux = std::min(t.min_inward_flux, flux);
    }
  }
  return t;
}

Eigen::MatrixXd jacobian(const PhaseSystem& sys, std::span<const double> state, JacobianMethod method) {
  require(state.size() == sys.dim(), ErrorCode::InvalidArgument, "state dimension mismatch");
  if (method == JacobianMethod::CentralDifference) {
    return numerics::jacobian_central(
        [&sys](std::span<const double> x, std::span<double> dx) { sys.eval(x, dx); }, state);
  }
  return numerics::jacobian_complex_step(
      [&sys](std::span<const Complex> x, std::span<Complex> dx) { sys.eval(x, dx); }, state);
}

namespace {

constexpr double kClosedFormTol = 1e-8;

double distance(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Eigenvalue pairs agree, or for a (near) double root the characteristic
// polynomials agree: a defective matrix only determines its eigenvalues to
// about sqrt(machine epsilon).
bool pair_agrees(Complex n1, Complex n2, Complex e1, Complex e2) {
  auto close = [](Complex a, Complex b) { return std::abs(a - b) <= kClosedFormTol * std::max(1.0, std::abs(b)); };
  if ((close(n1, e1) && close(n2, e2)) || (close(n1, e2) && close(n2, e1))) return true;
  if (std::abs(e1 - e2) > 1e-4) return false;
  return close(n1 + n2, e1 + e2) && close(n1 * n2, e1 * e2);
}

void assert_closed_form(const PhaseSystem& sys, std::span<const double> state,
                        const std::vector<Complex>& values) {
  const auto& p = sys.params();
  std::optional<std::pair<Complex, Complex>> expected;
  const auto [left, right] = sys.front_endpoints();
  const bool at_left = distance(state, left) < 1e-12;
  const bool at_right = distance(state, right) < 1e-12;
  if (sys.chart() != Chart::Slow) return;
  if (sys.id() == SystemId::Case1KPP2D) {
    if (at_left) {
      const auto e = eig_kpp_saddle(p, p.c);
      expected = {Complex(e.lambda1), Complex(e.lambda2)};
    } else if (at_right) {
      const auto e = eig_kpp_node(p, p.c);
      expected = {e.lambda1, e.lambda2};
    }
  } else if (sys.id() == SystemId::HTKPP2D && (at_left || at_right)) {
    const double fp = at_left ? kpp_first_derivative(ModelFamily::HollingTanner, p, state[0]) : 1.0;
    const Complex root = std::sqrt(Complex(p.c * p.c - 4.0 * fp, 0.0));
    expected = {0.5 * (-p.c + root), 0.5 * (-p.c - root)};
  } else if (sys.id() == SystemId::Case2Slow2D && (at_left || at_right)) {
    expected = case2_eigs(p, at_left ? Case2Point::A : Case2Point::B);
  }
  if (!expected) return;
  if (!pair_agrees(values[0], values[1], expected->first, expected->second)) {
    std::ostringstream os;
    os.precision(17);
    os << "numerical eigenvalues " << values[0] << ", " << values[1]
       << " disagree with closed form " << expected->first << ", " << expected->second;
    throw std::logic_error(os.str());
  }
}

}  // namespace

Equilibrium classify(const PhaseSystem& sys, std::span<const double> state, JacobianMethod method) {
  require(state.size() == sys.dim(), ErrorCode::InvalidArgument, "state dimension mismatch");
  const State f = vector_field(sys, state);
  const double residual = numerics::max_abs(f);
  if (!(residual <= 1e-8)) {
    std::ostringstream os;
    os.precision(17);
    os << "vector field magnitude " << residual << " exceeds 1e-8";
    fail(ErrorCode::NotAnEquilibrium, os.str());
  }
  const auto spec = numerics::eigen_decompose(jacobian(sys, state, method));
  Equilibrium eq;
  eq.name = to_string(sys.id());
  eq.state.assign(state.begin(), state.end());
  eq.eigenvalues = spec.values;
  eq.eigenvectors = spec.vectors;
  eq.kind = numerics::classify_spectrum(spec.values);
  assert_closed_form(sys, state, spec.values);
  return eq;
}

std::size_t manifold_ambient_dim(SlowManifoldId id) {
  switch (id) {
    case SlowManifoldId::MCase1Eps0:
    case SlowManifoldId::MCase2Eps0: return 4;
    case SlowManifoldId::MCase1Delta0: return 3;
    case SlowManifoldId::MCase2Delta0: return 2;
  }
  return 0;
}

namespace {

std::size_t manifold_coord_dim(SlowManifoldId id) {
  switch (id) {
    case SlowManifoldId::MCase1Eps0: return 3;
    case SlowManifoldId::MCase1Delta0:
    case SlowManifoldId::MCase2Eps0: return 2;
    case SlowManifoldId::MCase2Delta0: return 1;
  }
  return 0;
}

void check_manifold_params(SlowManifoldId id, const ModelParams& p) {
  validate(p);
  const bool case1 = id == SlowManifoldId::MCase1Eps0 || id == SlowManifoldId::MCase1Delta0;
  require(p.family == ModelFamily::RosenzweigMacArthur &&
              p.scaling == (case1 ? ScalingMode::Case1SlowPrey : ScalingMode::Case2VanishingDiffusion),
          ErrorCode::ValidationError, std::string(to_string(id)) + " requires matching RM scaling");
  if (case1) require(p.c > 0, ErrorCode::ValidationError, "c must satisfy c > 0");
  if (id == SlowManifoldId::MCase2Eps0) require(p.mu > 0, ErrorCode::ValidationError, "mu must satisfy mu > 0");
}

}  // namespace

State manifold_point(SlowManifoldId id, const ModelParams& p, std::span<const double> x) {
  check_manifold_params(id, p);
  require(x.size() == manifold_coord_dim(id), ErrorCode::InvalidArgument, "manifold coordinate dimension mismatch");
  switch (id) {
    case SlowManifoldId::MCase1Eps0:
      return {x[0], g_term(x[0], x[1]) / (p.c * p.delta), x[1], x[2]};
    case SlowManifoldId::MCase1Delta0:
      return {parabola_branch(x[0]), x[0], x[1]};
    case SlowManifoldId::MCase2Eps0:
      return {x[0], g_term(x[0], x[1]), x[1], -p.delta * kinetics::rm_predator(x[0], x[1], p.alpha, p.eta)};
    case SlowManifoldId::MCase2Delta0:
      return {parabola_branch(x[0]), x[0]};
  }
  return {};
}

double manifold_residual(SlowManifoldId id, const ModelParams& p, std::span<const double> s) {
  check_manifold_params(id, p);
  require(s.size() == manifold_ambient_dim(id), ErrorCode::InvalidArgument, "state dimension mismatch");
  switch (id) {
    case SlowManifoldId::MCase1Eps0:
      return std::abs(s[1] - g_term(s[0], s[2]) / (p.c * p.delta));
    case SlowManifoldId::MCase1Delta0:
      return std::abs(s[0] - parabola_branch(s[1]));
    case SlowManifoldId::MCase2Eps0:
      return std::max(std::abs(s[1] - g_term(s[0], s[2])),
                      std::abs(s[3] + p.delta * kinetics::rm_predator(s[0], s[2], p.alpha, p.eta)));
    case SlowManifoldId::MCase2Delta0:
      return std::abs(s[0] - parabola_branch(s[1]));
  }
  return 0;
}

std::vector<double> transverse_eigs(SlowManifoldId id, const ModelParams& p, std::span<const double> s) {
  check_manifold_params(id, p);
  require(s.size() == manifold_ambient_dim(id), ErrorCode::InvalidArgument, "state dimension mismatch");
  switch (id) {
    case SlowManifoldId::MCase1Eps0: return {-p.c};
    case SlowManifoldId::MCase2Eps0: return {-1.0, -1.0 / p.mu};
    case SlowManifoldId::MCase1Delta0: {
      const double r = parabola_branch(s[1]);
      return {2.0 * (1.0 - s[1]) / (p.c * (1.0 + r))};
    }
    case SlowManifoldId::MCase2Delta0: {
      const double r = parabola_branch(s[1]);
      return {2.0 * (1.0 - s[1]) / (1.0 + r)};
    }
  }
  return {};
}

}  // namespace phasespace
}  // namespace kppfront
