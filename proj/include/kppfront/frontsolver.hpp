#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kppfront/ode.hpp"
#include "kppfront/phasespace.hpp"

namespace kppfront {

struct ShootingConfig {
  double launch_offset = 1e-6;
  ode::Tolerances tol{1e-10, 1e-12, 0.0};
  double max_span = 1e4;
  double landing_radius = 1e-7;
  double landing_field_tol = 1e-6;  // capture also needs |field| below this
  double output_step = 0.01;
  bool require_monotone = false;  // KPP systems: reject c < c* up front

  // Tracking of a repelling slow manifold by bisection (3-D and 4-D systems).
  double agree_tol = 1e-10;     // lo/hi trajectories are merged while closer than this
  double first_window = 1e-4;   // initial half-width of the u1 bracket at launch
  double restart_window = 1e-6; // half-width after each restart
  double max_window = 1e-1;
  double tube_fraction = 0.25;  // escape once |u1 - sqrt(1-w1)| exceeds this times sqrt(1-w1)
  double tube_floor = 0.2;
  double box = 10.0;            // accepted orbit must stay within [-box_tol, box]
  double box_tol = 1e-6;

  void validate() const;
};

/// A front sampled on a uniform grid with the vector field at every sample,
/// so that cubic Hermite interpolation is available between grid points.
struct FrontProfile {
  SystemId model_id = SystemId::Case1KPP2D;
  std::vector<std::string> names;
  std::vector<double> zeta;
  std::vector<State> states;
  std::vector<State> slopes;  // d state / d zeta
  double c = 0.0;
  Equilibrium left_eq, right_eq;
  std::pair<double, double> convergence_residuals{0.0, 0.0};
  bool monotone = false;   // w1 strictly decreasing at every interior sample
  bool positive = false;   // u1 and w1 positive along the orbit
  int launch_sign = 1;
  std::size_t restarts = 0;   // tracking windows used (0 for plain shooting)
  double max_jump = 0.0;      // largest pseudo-orbit jump at window joins

  std::size_t size() const { return zeta.size(); }
  std::size_t dim() const { return names.size(); }
  /// Index of a named component; throws InvalidArgument if absent.
  std::size_t component(std::string_view name) const;
  std::optional<std::size_t> find_component(std::string_view name) const;
  std::vector<double> column(std::size_t i) const;
  /// Cubic Hermite value of component i at z (clamped to the grid).
  double value_at(std::size_t i, double z) const;
};

namespace frontsolver {

/// Case1KPP2D, HTKPP2D (forward from the saddle) or Case2Slow2D (backward from B).
FrontProfile shoot_front_2d(const PhaseSystem& sys, const ShootingConfig& cfg = {});

/// Case1Full4D, Case1Reduced3D, Case2Full4D or HTFull4D by tracked forward shooting.
FrontProfile shoot_front_full(const PhaseSystem& sys, const ShootingConfig& cfg = {});

/// The delta = 0 Case 2 front: w1 from the scalar slow flow, u1 = sqrt(1 - w1),
/// parameterized by the slow coordinate delta*zeta. Components (u1, w1).
FrontProfile singular_front_case2(const ModelParams& params, const ShootingConfig& cfg = {});

struct Alignment {
  double shift = 0.0;         // zeta_q(level) - zeta_p(level)
  double sup_distance = 0.0;  // over the overlap, all components present in both
  std::size_t compared_points = 0;
};

/// Aligns q onto p at the first crossing of `level` by `component`.
Alignment align_profiles(const FrontProfile& p, const FrontProfile& q, std::string_view component,
                         double level);

/// zeta of the first crossing of `level` (Hermite interpolation).
double level_crossing(const FrontProfile& p, std::size_t component, double level);

FrontProfile project(const FrontProfile& p, const std::vector<std::string>& names);
FrontProfile translate(const FrontProfile& p, double dz);
/// New coordinate s = factor * zeta.
FrontProfile rescale(const FrontProfile& p, double factor);

/// Names of the left and right front equilibria of a system ("A"/"C", "O"/"B").
std::pair<std::string, std::string> endpoint_names(SystemId id);

struct Adherence {
  double max_residual = 0.0;  // after the transient
  double constant = 0.0;      // max_residual / epsilon
  double transient = 0.0;
};

/// |u2 - g/(c delta)| along a Case1Full4D front, ignoring the first `transient` wave units.
Adherence slow_manifold_adherence(const FrontProfile& p, const ModelParams& params, double transient);

}  // namespace frontsolver
}  // namespace kppfront
