#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kppfront/frontsolver.hpp"
#include "kppfront/models.hpp"

namespace kppfront {

enum class BoundaryKind { Neumann, Dirichlet };

struct Grid1D {
  double x_min = 0.0, x_max = 1.0;
  std::size_t n = 3;
  BoundaryKind boundary = BoundaryKind::Neumann;
  std::pair<double, double> left_state{0.0, 0.0};   // (u, w), Dirichlet only
  std::pair<double, double> right_state{0.0, 0.0};

  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  void validate() const;
};

enum class FrameKind { Lab, Comoving };

struct Frame {
  FrameKind kind = FrameKind::Lab;
  double c = 0.0;  // comoving speed; the frame coordinate is x - c t

  static Frame lab() { return {}; }
  static Frame comoving(double speed) { return {FrameKind::Comoving, speed}; }
};

const char* to_string(FrameKind kind);

struct SpaceTimeField {
  Grid1D grid;
  std::vector<double> times;
  std::vector<std::vector<double>> u, w;  // one row per snapshot
  ModelParams params;
  Frame frame;
  double dt = 0.0;
  std::size_t steps = 0;
  double min_u = 0.0, min_w = 0.0;  // over every step
};

struct SimulationOptions {
  std::size_t snapshots = 50;  // uniformly spaced, including t = 0 and t_end
  double dt_max = 1e-2;
  double safety = 0.9;
  double blowup = 1e6;
  double positivity_tol = 1e-9;
  bool check_positivity = true;
};

struct SpeedEstimate {
  double c = 0.0;
  double r2 = 0.0;
  std::vector<double> times, positions;
};

namespace pdesim {

/// Method of lines: second-order central differences, classical RK4 with
/// dt <= safety * min(dx^2 / (2 max D), reaction bound), capped at dt_max. The
/// reaction bound is delta/10 for the scalings with a 1/delta prey term and 0.1
/// otherwise. Diffusion: Case 1 and HT (eps, 1); Case 2 (eps, eps mu).
SpaceTimeField simulate(const ModelParams& params, const Grid1D& grid, const std::vector<double>& u0,
                        const std::vector<double>& w0, double t_end, Frame frame = Frame::lab(),
                        const SimulationOptions& opt = {});

/// Time step simulate() would use before rounding to the snapshot cadence.
double stable_dt(const ModelParams& params, const Grid1D& grid, const SimulationOptions& opt = {});

/// Samples a front onto the grid (monotone cubic) with its half-amplitude w
/// crossing at `center`; outside the profile span the end rows, which lie within
/// the landing radius of the equilibria, are continued. Profiles without u1 use
/// u = sqrt(1 - w). Throws GridTooNarrow unless both grid ends are within 1e-6
/// of the equilibria.
std::pair<std::vector<double>, std::vector<double>> profile_to_ic(const FrontProfile& p, const Grid1D& grid,
                                                                   double center);

/// zeta at which profile_to_ic places `center`.
double half_amplitude_zeta(const FrontProfile& p);

/// Least-squares fit of the level-crossing position against time. component 0
/// is u, 1 is w. Snapshots before `t_min` are ignored.
SpeedEstimate estimate_front_speed(const SpaceTimeField& f, int component, double level, double t_min = 0.0);

/// Crossing position of `level` in one snapshot (4-point cubic interpolation).
double crossing_position(const Grid1D& grid, const std::vector<double>& v, double level);

}  // namespace pdesim
}  // namespace kppfront
