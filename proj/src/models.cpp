#include "kppfront/models.hpp"

#include <cmath>
#include <sstream>

#include "kppfront/error.hpp"

namespace kppfront {

const char* to_string(ModelFamily family) {
  return family == ModelFamily::RosenzweigMacArthur ? "RosenzweigMacArthur" : "HollingTanner";
}

const char* to_string(ScalingMode scaling) {
  switch (scaling) {
    case ScalingMode::Case1SlowPrey: return "Case1SlowPrey";
    case ScalingMode::Case2VanishingDiffusion: return "Case2VanishingDiffusion";
    case ScalingMode::HTSlowPrey: return "HTSlowPrey";
  }
  return "Unknown";
}

ModelParams ModelParams::rm_case1(double alpha, double eta, double delta, double epsilon, double c) {
  ModelParams p;
  p.family = ModelFamily::RosenzweigMacArthur;
  p.scaling = ScalingMode::Case1SlowPrey;
  p.alpha = alpha;
  p.eta = eta;
  p.delta = delta;
  p.epsilon = epsilon;
  p.c = c;
  return p;
}

ModelParams ModelParams::rm_case2(double alpha, double eta, double delta, double epsilon, double mu) {
  ModelParams p;
  p.family = ModelFamily::RosenzweigMacArthur;
  p.scaling = ScalingMode::Case2VanishingDiffusion;
  p.alpha = alpha;
  p.eta = eta;
  p.delta = delta;
  p.epsilon = epsilon;
  p.mu = mu;
  return p;
}

ModelParams ModelParams::ht(double beta, double delta, double epsilon, double c) {
  ModelParams p;
  p.family = ModelFamily::HollingTanner;
  p.scaling = ScalingMode::HTSlowPrey;
  p.beta = beta;
  p.delta = delta;
  p.epsilon = epsilon;
  p.c = c;
  return p;
}

ModelParams ModelParams::with_speed(double speed) const {
  ModelParams p = *this;
  p.c = speed;
  return p;
}

ModelParams ModelParams::with_delta(double d) const {
  ModelParams p = *this;
  p.delta = d;
  return p;
}

ModelParams ModelParams::with_epsilon(double e) const {
  ModelParams p = *this;
  p.epsilon = e;
  return p;
}

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) fail(ErrorCode::ValidationError, message);
}

// NaN fails every comparison, so "a > 0" also rejects unset values.
void check_optional_nonnegative(double v, const char* name) {
  if (is_set(v)) check(v >= 0, std::string(name) + " must satisfy " + name + " >= 0");
}

}  // namespace

void validate(const ModelParams& p) {
  check(p.gamma > 0, "gamma must satisfy gamma > 0");
  check_optional_nonnegative(p.epsilon, "epsilon");
  if (is_set(p.c)) check(p.c != 0, "c must satisfy c != 0");
  check(p.delta > 0, "delta must satisfy delta > 0");
  if (p.family == ModelFamily::RosenzweigMacArthur) {
    check(p.scaling != ScalingMode::HTSlowPrey,
          "scaling HTSlowPrey requires the HollingTanner family");
    check(p.alpha > 0 && p.alpha < 1, "alpha must satisfy 0 < alpha < 1");
    check(p.eta > 0, "eta must satisfy eta > 0");
    if (p.scaling == ScalingMode::Case2VanishingDiffusion && is_set(p.mu))
      check(p.mu > 0, "mu must satisfy mu > 0");
  } else {
    check(p.scaling == ScalingMode::HTSlowPrey,
          "the HollingTanner family requires scaling HTSlowPrey");
    check(p.beta > 0, "beta must satisfy beta > 0");
  }
}

namespace models {

ModelParams nondimensionalize_rm(const PhysicalParamsRM& p, EpsilonRequest eps) {
  for (double v : {p.A, p.B, p.C, p.D, p.E1, p.E2, p.K})
    require(v > 0, ErrorCode::ValidationError, "A, B, C, D, E1, E2, K must be positive");
  require(p.eps_u >= 0 && p.eps_w >= 0, ErrorCode::ValidationError,
          "diffusion rates must be nonnegative");
  const double effective = p.D / p.E2 - p.C;
  if (!(effective > 0)) {
    std::ostringstream os;
    os << "D/E2 - C = " << effective << " must be positive";
    fail(ErrorCode::ScalingViolation, os.str());
  }
  const double net = p.D - p.C * p.E2;
  ModelParams out;
  out.family = ModelFamily::RosenzweigMacArthur;
  out.scaling = ScalingMode::Case1SlowPrey;
  out.alpha = p.C * p.E1 / net;
  out.gamma = p.E1 * p.K;
  out.delta = p.E1 * p.K * net / (p.A * p.E2);
  out.eta = p.E1 / p.E2;
  if (eps == EpsilonRequest::Compute) {
    require(p.eps_w > 0, ErrorCode::DivisionByZero, "epsilon = eps_u/eps_w needs eps_w > 0");
    out.epsilon = p.eps_u / p.eps_w;
  }
  return out;
}

std::pair<double, double> reaction_rhs(const ModelParams& params, double u, double w) {
  validate(params);
  return ReactionKernel(params)(u, w);
}

ReactionKernel::ReactionKernel(const ModelParams& params) : params_(params) {}

std::pair<double, double> ht_coexistence(double beta, double gamma) {
  // w = u / beta on the predator nullcline, (gamma - u)(1 + u) = w on the prey one.
  const double b = 1.0 - gamma + 1.0 / beta;
  const double u = 0.5 * (-b + std::sqrt(b * b + 4.0 * gamma));
  return {u, u / beta};
}

namespace {

Equilibrium classify_kinetics(const ReactionKernel& kernel, std::string name, double u, double w) {
  Equilibrium eq;
  eq.name = std::move(name);
  eq.state = {u, w};
  const ComplexField f = [&kernel](std::span<const Complex> x, std::span<Complex> dx) {
    const auto [fu, fw] = kernel(x[0], x[1]);
    dx[0] = fu;
    dx[1] = fw;
  };
  // Points on the boundary u = 0 of the HT kinetics are not differentiable; none are returned.
  const auto spec = numerics::eigen_decompose(numerics::jacobian_complex_step(f, eq.state));
  eq.eigenvalues = spec.values;
  eq.eigenvectors = spec.vectors;
  eq.kind = numerics::classify_spectrum(spec.values);
  return eq;
}

}  // namespace

std::vector<Equilibrium> equilibria(const ModelParams& params) {
  validate(params);
  const ReactionKernel kernel(params);
  std::vector<Equilibrium> out;
  if (params.family == ModelFamily::RosenzweigMacArthur) {
    const double a = params.alpha;
    const double g = params.gamma;
    out.push_back(classify_kinetics(kernel, "O", 0.0, 0.0));
    out.push_back(classify_kinetics(kernel, "A", a, (g - a) * (1.0 + a)));
    out.push_back(classify_kinetics(kernel, "B", g, 0.0));
  } else {
    const auto [u, w] = ht_coexistence(params.beta, params.gamma);
    out.push_back(classify_kinetics(kernel, "B", params.gamma, 0.0));
    out.push_back(classify_kinetics(kernel, "C", u, w));
  }
  return out;
}

const char* to_string(GammaRegion region) {
  switch (region) {
    case GammaRegion::CoveredGammaLessOne: return "CoveredGammaLessOne";
    case GammaRegion::CoveredGammaGeqOne: return "CoveredGammaGeqOne";
    case GammaRegion::NotCovered: return "NotCovered";
  }
  return "Unknown";
}

GammaRegion validate_gamma_region(double alpha, double gamma) {
  require(alpha > 0 && gamma > 0, ErrorCode::ValidationError, "alpha and gamma must be positive");
  if (gamma < 1.0) return alpha < gamma ? GammaRegion::CoveredGammaLessOne : GammaRegion::NotCovered;
  return (0.5 * (gamma - 1.0) < alpha && alpha < gamma) ? GammaRegion::CoveredGammaGeqOne
                                                         : GammaRegion::NotCovered;
}

}  // namespace models
}  // namespace kppfront
