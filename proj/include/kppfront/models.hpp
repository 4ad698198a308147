#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kppfront/numerics.hpp"

namespace kppfront {

/// Sentinel for parameters that a model family or scaling does not use.
inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

inline bool is_set(double v) { return v == v; }

enum class ModelFamily { RosenzweigMacArthur, HollingTanner };
enum class ScalingMode { Case1SlowPrey, Case2VanishingDiffusion, HTSlowPrey };

const char* to_string(ModelFamily family);
const char* to_string(ScalingMode scaling);

/// Dimensional Rosenzweig-MacArthur parameters.
struct PhysicalParamsRM {
  double A = 0, B = 0, C = 0, D = 0, E1 = 0, E2 = 0, K = 0;
  double eps_u = 0, eps_w = 0;
};

/// Nondimensional parameters. Fields a family does not use stay at kUnset.
struct ModelParams {
  ModelFamily family = ModelFamily::RosenzweigMacArthur;
  ScalingMode scaling = ScalingMode::Case1SlowPrey;
  double alpha = kUnset;
  double gamma = 1.0;
  double eta = kUnset;
  double delta = kUnset;
  double epsilon = kUnset;
  double mu = kUnset;
  double beta = kUnset;
  double c = kUnset;

  static ModelParams rm_case1(double alpha, double eta, double delta, double epsilon, double c);
  static ModelParams rm_case2(double alpha, double eta, double delta, double epsilon, double mu);
  static ModelParams ht(double beta, double delta, double epsilon, double c);

  ModelParams with_speed(double speed) const;
  ModelParams with_delta(double d) const;
  ModelParams with_epsilon(double e) const;
};

/// Throws ValidationError naming the first violated invariant. Unset optional
/// fields (epsilon, c, mu) are accepted; consumers that need them check.
void validate(const ModelParams& p);

struct Equilibrium {
  std::string name;
  State state;
  EquilibriumKind kind = EquilibriumKind::NonHyperbolic;
  std::vector<Complex> eigenvalues;
  std::vector<std::vector<Complex>> eigenvectors;
};

namespace models {

enum class EpsilonRequest { Compute, Skip };

ModelParams nondimensionalize_rm(const PhysicalParamsRM& p,
                                 EpsilonRequest eps = EpsilonRequest::Compute);

/// Reaction part of the PDE in the scaling selected by params.scaling.
std::pair<double, double> reaction_rhs(const ModelParams& params, double u, double w);

/// Spatially homogeneous equilibria, classified by the linearized kinetics.
/// RM: O, A, B. HT: B=(gamma,0) and the coexistence point C.
std::vector<Equilibrium> equilibria(const ModelParams& params);

enum class GammaRegion { CoveredGammaLessOne, CoveredGammaGeqOne, NotCovered };
const char* to_string(GammaRegion region);

GammaRegion validate_gamma_region(double alpha, double gamma);

/// Coexistence point of the Holling-Tanner kinetics for general gamma.
std::pair<double, double> ht_coexistence(double beta, double gamma = 1.0);

/// Unvalidated kinetics evaluator for inner loops (PDE right-hand sides).
class ReactionKernel {
 public:
  explicit ReactionKernel(const ModelParams& params);

  template <class T>
  std::pair<T, T> operator()(const T& u, const T& w) const;

  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
};

}  // namespace models
}  // namespace kppfront

#include "kppfront/kinetics.hpp"

namespace kppfront::models {

template <class T>
std::pair<T, T> ReactionKernel::operator()(const T& u, const T& w) const {
  const T prey = kinetics::prey_growth(u, w, params_.gamma);
  switch (params_.scaling) {
    case ScalingMode::Case1SlowPrey:
      return {prey / params_.delta, kinetics::rm_predator(u, w, params_.alpha, params_.eta)};
    case ScalingMode::Case2VanishingDiffusion:
      return {prey, params_.delta * kinetics::rm_predator(u, w, params_.alpha, params_.eta)};
    case ScalingMode::HTSlowPrey:
      return {prey / params_.delta, kinetics::ht_predator(u, w, params_.beta)};
  }
  return {T(0), T(0)};
}

}  // namespace kppfront::models
