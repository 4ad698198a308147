#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kppfront/models.hpp"
#include "kppfront/numerics.hpp"

namespace kppfront {

/// Traveling-wave systems and their reductions.
enum class SystemId {
  Case1Full4D,      // (u1, u2, w1, w2), slow prey diffusion
  Case1Reduced3D,   // (u1, w1, w2) on the eps = 0 slow manifold
  Case1KPP2D,       // (w1, w2) Fisher-KPP reduction
  Case2Full4D,      // (u1, u2, w1, w2), vanishing diffusion
  Case2Slow2D,      // (u1, w1) on the eps = 0 slow manifold
  Case2Layer,       // (u1, w1) with delta = 0
  Case2SlowScalar,  // w1 on u1 = sqrt(1 - w1), slow time
  HTFull4D,         // Holling-Tanner (u1, u2, w1, w2)
  HTKPP2D,          // Holling-Tanner Fisher-KPP reduction (w1, w2)
};

enum class Chart { Slow, Fast };

enum class SlowManifoldId { MCase1Eps0, MCase1Delta0, MCase2Eps0, MCase2Delta0 };

const char* to_string(SystemId id);
const char* to_string(Chart chart);
const char* to_string(SlowManifoldId id);

/// An immutable first-order traveling-wave vector field.
///
/// The Slow chart uses the wave coordinate zeta of the model. Systems with a
/// second time scale also have a Fast chart whose field is chart_scale() times
/// the slow field: xi = zeta/eps for the 4-D systems, zeta/delta for
/// Case1Reduced3D and delta*zeta for Case2Slow2D.
class PhaseSystem {
 public:
  PhaseSystem(SystemId id, ModelParams params, Chart chart = Chart::Slow);

  SystemId id() const { return id_; }
  Chart chart() const { return chart_; }
  const ModelParams& params() const { return params_; }
  std::size_t dim() const;
  std::vector<std::string> component_names() const;
  std::vector<SlowManifoldId> manifolds() const;
  bool has_fast_chart() const;
  double chart_scale() const;
  PhaseSystem in_chart(Chart chart) const { return PhaseSystem(id_, params_, chart); }

  void eval(std::span<const double> x, std::span<double> dx) const;
  void eval(std::span<const Complex> x, std::span<Complex> dx) const;

  /// Left (zeta -> -inf) and right (zeta -> +inf) equilibria of the front.
  std::pair<State, State> front_endpoints() const;

 private:
  SystemId id_;
  ModelParams params_;
  Chart chart_;
};

namespace phasespace {

State vector_field(const PhaseSystem& sys, std::span<const double> state);

/// RM: f(w) = w (sqrt(1-w) - alpha) / (eta + sqrt(1-w)); HT: f(w) = w (sqrt(1-w) - beta w) / sqrt(1-w).
double kpp_nonlinearity(ModelFamily family, const ModelParams& params, double w1);
double kpp_nonlinearity_second_derivative(ModelFamily family, const ModelParams& params, double w1);
/// Positive zero of f: 1 - alpha^2 (RM) or the coexistence predator density (HT).
double kpp_root(ModelFamily family, const ModelParams& params);

struct KppCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double margin = 0.0;  // distance from the failure threshold; negative when failing
};

struct KppReport {
  std::vector<KppCheck> checks;
  double root = 0.0;
  bool all_passed() const;
};

KppReport kpp_property_check(ModelFamily family, const ModelParams& params, int grid_size);

double critical_speed(ModelFamily family, const ModelParams& params);

struct SaddleEigen {
  double lambda1 = 0, lambda2 = 0;  // lambda1 > 0 > lambda2
  std::array<double, 2> v1{}, v2{};  // (1, lambda_i)
};
SaddleEigen eig_kpp_saddle(const ModelParams& params, double c);

struct NodeEigen {
  Complex lambda1, lambda2;
  EquilibriumKind kind = EquilibriumKind::StableNode;  // NonHyperbolic marks the double root
};
NodeEigen eig_kpp_node(const ModelParams& params, double c);

enum class Case2Point { A, B };
std::pair<Complex, Complex> case2_eigs(const ModelParams& params, Case2Point which);

double delta0_case2(double alpha, double eta);
/// -f1u(A)^2 / (4 f1w(A) f2u(A)), the unsimplified form.
double delta0_case2_from_derivatives(double alpha, double eta);

struct FluxSample {
  int side = 0;  // 0: w2 = 0, 1: w1 = 1 - alpha^2, 2: w2 = -b w1
  double w1 = 0, w2 = 0;
  double inward_flux = 0;
};

struct TrappingTriangle {
  double alpha = 0, eta = 0, c = 0, b = 0;
  std::array<std::array<double, 2>, 3> vertices{};
  std::vector<FluxSample> certificate;
  double min_inward_flux = 0;

  /// Signed distance outside the triangle (<= 0 inside).
  double penetration(double w1, double w2) const;
  std::pair<double, double> slope_interval() const;
};

TrappingTriangle build_trapping_triangle(double alpha, double eta, double c,
                                         std::optional<double> b = std::nullopt,
                                         int samples_per_side = 200);

/// Numerical linearization of `sys` at an equilibrium. Closed forms, where they
/// exist, are checked against the numerical spectrum.
Equilibrium classify(const PhaseSystem& sys, std::span<const double> state,
                     JacobianMethod method = JacobianMethod::ComplexStep);

Eigen::MatrixXd jacobian(const PhaseSystem& sys, std::span<const double> state,
                         JacobianMethod method = JacobianMethod::ComplexStep);

// Critical manifolds of the reduction chain.
std::size_t manifold_ambient_dim(SlowManifoldId id);
/// Graph coordinates: MCase1Eps0 (u1, w1, w2), MCase1Delta0 (w1, w2),
/// MCase2Eps0 (u1, w1), MCase2Delta0 (w1).
State manifold_point(SlowManifoldId id, const ModelParams& params, std::span<const double> coords);
double manifold_residual(SlowManifoldId id, const ModelParams& params, std::span<const double> state);
/// Nonzero eigenvalues of the layer problem at a manifold point (fast chart).
std::vector<double> transverse_eigs(SlowManifoldId id, const ModelParams& params,
                                    std::span<const double> state);

}  // namespace phasespace
}  // namespace kppfront
