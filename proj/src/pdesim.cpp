#include "kppfront/pdesim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/pchip.hpp>

#include "kppfront/error.hpp"

namespace kppfront {

const char* to_string(FrameKind kind) { return kind == FrameKind::Lab ? "Lab" : "Comoving"; }

void Grid1D::validate() const {
  require(n >= 3, ErrorCode::InvalidArgument, "grid needs n >= 3");
  require(x_max > x_min, ErrorCode::InvalidArgument, "grid needs x_max > x_min");
}

namespace pdesim {
namespace {

struct Coefficients {
  double du = 0, dw = 0, advection = 0, reaction_dt = 0;
};

Coefficients coefficients(const ModelParams& p, Frame frame) {
  validate(p);
  require(is_set(p.epsilon), ErrorCode::ValidationError, "epsilon must be set for a PDE run");
  Coefficients k;
  k.du = p.epsilon;
  switch (p.scaling) {
    case ScalingMode::Case1SlowPrey:
    case ScalingMode::HTSlowPrey:
      k.dw = 1.0;
      k.reaction_dt = p.delta / 10.0;
      break;
    case ScalingMode::Case2VanishingDiffusion:
      require(p.mu > 0, ErrorCode::ValidationError, "mu must satisfy mu > 0");
      k.dw = p.epsilon * p.mu;
      k.reaction_dt = 0.1;
      break;
  }
  k.advection = frame.kind == FrameKind::Comoving ? frame.c : 0.0;
  return k;
}

double step_bound(const Coefficients& k, const Grid1D& grid, const SimulationOptions& opt) {
  const double dx = grid.dx();
  double bound = k.reaction_dt;
  const double dmax = std::max(k.du, k.dw);
  if (dmax > 0) bound = std::min(bound, dx * dx / (2.0 * dmax));
  if (k.advection != 0) bound = std::min(bound, dx / std::abs(k.advection));
  return std::min(opt.safety * bound, opt.dt_max);
}

class Rhs {
 public:
  Rhs(const ModelParams& p, const Grid1D& g, const Coefficients& k) : kernel_(p), grid_(g), k_(k) {}

  // y = [u; w]
  void operator()(const std::vector<double>& y, std::vector<double>& dy) const {
    const std::size_t n = grid_.n;
    const double dx = grid_.dx();
    const double lap = 1.0 / (dx * dx), grad = 1.0 / (2.0 * dx);
    const double* u = y.data();
    const double* w = y.data() + n;
    double* fu = dy.data();
    double* fw = dy.data() + n;
    const bool dirichlet = grid_.boundary == BoundaryKind::Dirichlet;
    for (std::size_t i = 0; i < n; ++i) {
      if (dirichlet && (i == 0 || i + 1 == n)) {
        fu[i] = fw[i] = 0.0;
        continue;
      }
      // Neumann: mirror ghost points
      const std::size_t l = i == 0 ? 1 : i - 1;
      const std::size_t r = i + 1 == n ? n - 2 : i + 1;
      const auto [ru, rw] = kernel_(u[i], w[i]);
      fu[i] = k_.du * lap * (u[l] - 2.0 * u[i] + u[r]) + k_.advection * grad * (u[r] - u[l]) + ru;
      fw[i] = k_.dw * lap * (w[l] - 2.0 * w[i] + w[r]) + k_.advection * grad * (w[r] - w[l]) + rw;
    }
  }

 private:
  models::ReactionKernel kernel_;
  const Grid1D& grid_;
  Coefficients k_;
};

}  // namespace

double stable_dt(const ModelParams& params, const Grid1D& grid, const SimulationOptions& opt) {
  grid.validate();
  return step_bound(coefficients(params, Frame::lab()), grid, opt);
}

SpaceTimeField simulate(const ModelParams& params, const Grid1D& grid, const std::vector<double>& u0,
                        const std::vector<double>& w0, double t_end, Frame frame, const SimulationOptions& opt) {
  grid.validate();
  require(u0.size() == grid.n && w0.size() == grid.n, ErrorCode::InvalidArgument,
          "initial data must match the grid size");
  require(t_end > 0, ErrorCode::InvalidArgument, "t_end must be positive");
  require(opt.snapshots >= 2, ErrorCode::InvalidArgument, "at least two snapshots are needed");
  const Coefficients k = coefficients(params, frame);
  const double bound = step_bound(k, grid, opt);
  if (!(bound >= 1e-10)) fail(ErrorCode::StepTooSmall, "stable time step below 1e-10");

  const std::size_t n = grid.n;
  std::vector<double> y(2 * n);
  std::copy(u0.begin(), u0.end(), y.begin());
  std::copy(w0.begin(), w0.end(), y.begin() + static_cast<std::ptrdiff_t>(n));
  if (grid.boundary == BoundaryKind::Dirichlet) {
    y[0] = grid.left_state.first;
    y[n - 1] = grid.right_state.first;
    y[n] = grid.left_state.second;
    y[2 * n - 1] = grid.right_state.second;
  }
  for (double v : y) {
    require(std::isfinite(v), ErrorCode::InvalidArgument, "initial data must be finite");
    if (opt.check_positivity && v < -opt.positivity_tol) {
      std::ostringstream os;
      os.precision(6);
      os << "initial data has a negative density " << v;
      fail(ErrorCode::PositivityViolation, os.str());
    }
  }

  SpaceTimeField out;
  out.grid = grid;
  out.params = params;
  out.frame = frame;
  out.min_u = *std::min_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  out.min_w = *std::min_element(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
  auto record = [&](double t) {
    out.times.push_back(t);
    out.u.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    out.w.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
  };
  record(0.0);

  const Rhs rhs(params, out.grid, k);
  std::vector<double> k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);
  const double interval = t_end / static_cast<double>(opt.snapshots - 1);
  const auto m = static_cast<std::size_t>(std::ceil(interval / bound - 1e-12));
  const double dt = interval / static_cast<double>(m);
  out.dt = dt;
  for (std::size_t s = 1; s < opt.snapshots; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      rhs(y, k1);
      for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
      rhs(tmp, k2);
      for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
      rhs(tmp, k3);
      for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = y[i] + dt * k3[i];
      rhs(tmp, k4);
      for (std::size_t i = 0; i < 2 * n; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      ++out.steps;
      double lo_u = y[0], lo_w = y[n];
      for (std::size_t i = 0; i < n; ++i) {
        const double a = y[i], b = y[n + i];
        if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a) > opt.blowup || std::abs(b) > opt.blowup) {
          std::ostringstream os;
          os << "solution left [-" << opt.blowup << ", " << opt.blowup << "] at t = "
             << static_cast<double>(s - 1) * interval + static_cast<double>(j + 1) * dt;
          fail(ErrorCode::BlowUp, os.str());
        }
        lo_u = std::min(lo_u, a);
        lo_w = std::min(lo_w, b);
      }
      out.min_u = std::min(out.min_u, lo_u);
      out.min_w = std::min(out.min_w, lo_w);
      if (opt.check_positivity && std::min(lo_u, lo_w) < -opt.positivity_tol) {
        std::ostringstream os;
        os.precision(6);
        os << "negative density " << std::min(lo_u, lo_w) << " at t = "
           << static_cast<double>(s - 1) * interval + static_cast<double>(j + 1) * dt;
        fail(ErrorCode::PositivityViolation, os.str());
      }
    }
    record(static_cast<double>(s) * interval);
  }
  out.times.back() = t_end;
  return out;
}

namespace {

std::pair<double, double> endpoint_values(const FrontProfile& p, const State& eq) {
  const std::size_t w = p.component("w1");
  require(eq.size() == p.dim(), ErrorCode::InvalidArgument, "profile equilibria do not match its components");
  const auto u = p.find_component("u1");
  return {u ? eq[*u] : std::sqrt(1.0 - eq[w]), eq[w]};
}

// The crossing is located on the same interpolant that samples the data, so a
// profile read back from CSV (no slopes) places the front identically.
template <class Interp>
double crossing_on(const Interp& f, const std::vector<double>& z, const std::vector<double>& v, double level) {
  std::size_t cell = v.size();
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    if ((v[k] > level) != (v[k + 1] > level)) {
      cell = k;
      break;
    }
  if (cell == v.size()) fail(ErrorCode::LevelNotCrossed, "profile w1 never crosses its half amplitude");
  double lo = z[cell], hi = z[cell + 1];
  const bool falling = v[cell] > level;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if ((f(mid) > level) == falling) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double half_amplitude_zeta(const FrontProfile& p) {
  require(p.size() >= 4, ErrorCode::InvalidArgument, "profile too short to interpolate");
  const std::size_t wi = p.component("w1");
  const std::vector<double> wcol = p.column(wi);
  boost::math::interpolators::pchip<std::vector<double>> wf(std::vector<double>(p.zeta), std::vector<double>(wcol));
  const double wl = endpoint_values(p, p.states.front()).second, wr = endpoint_values(p, p.states.back()).second;
  return crossing_on(wf, p.zeta, wcol, 0.5 * (wl + wr));
}

std::pair<std::vector<double>, std::vector<double>> profile_to_ic(const FrontProfile& p, const Grid1D& grid,
                                                                   double center) {
  grid.validate();
  require(p.size() >= 4, ErrorCode::InvalidArgument, "profile too short to interpolate");
  const std::size_t wi = p.component("w1");
  const auto ui = p.find_component("u1");
  // extension uses the profile's own end rows (within the landing radius of the
  // equilibria) so the data are continuous and a CSV round trip is exact
  const auto [ul, wl] = endpoint_values(p, p.states.front());
  const auto [ur, wr] = endpoint_values(p, p.states.back());
  const auto [ul_eq, wl_eq] = endpoint_values(p, p.left_eq.state);
  const auto [ur_eq, wr_eq] = endpoint_values(p, p.right_eq.state);
  using boost::math::interpolators::pchip;
  const std::vector<double> wcol = p.column(wi);
  pchip<std::vector<double>> wf(std::vector<double>(p.zeta), std::vector<double>(wcol));
  std::optional<pchip<std::vector<double>>> uf;
  if (ui) uf.emplace(std::vector<double>(p.zeta), p.column(*ui));

  const double zc = crossing_on(wf, p.zeta, wcol, 0.5 * (wl + wr));

  std::vector<double> u0(grid.n), w0(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double z = zc + (grid.x(i) - center);
    if (z < p.zeta.front()) {
      u0[i] = ul;
      w0[i] = wl;
    } else if (z > p.zeta.back()) {
      u0[i] = ur;
      w0[i] = wr;
    } else {
      w0[i] = wf(z);
      u0[i] = uf ? (*uf)(z) : std::sqrt(1.0 - w0[i]);
    }
  }
  constexpr double kFlat = 1e-6;
  const double left_gap = std::max(std::abs(u0.front() - ul_eq), std::abs(w0.front() - wl_eq));
  const double right_gap = std::max(std::abs(u0.back() - ur_eq), std::abs(w0.back() - wr_eq));
  if (left_gap > kFlat || right_gap > kFlat) {
    std::ostringstream os;
    os.precision(6);
    os << "grid ends are " << left_gap << " and " << right_gap
       << " from the equilibria; widen the grid or move the center";
    fail(ErrorCode::GridTooNarrow, os.str());
  }
  return {std::move(u0), std::move(w0)};
}

double crossing_position(const Grid1D& grid, const std::vector<double>& v, double level) {
  require(v.size() == grid.n, ErrorCode::InvalidArgument, "snapshot does not match the grid");
  std::size_t count = 0, cell = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if ((v[i] > level) != (v[i + 1] > level)) {
      ++count;
      cell = i;
    }
  }
  if (count == 0) {
    std::ostringstream os;
    os.precision(17);
    os << "level " << level << " is not crossed";
    fail(ErrorCode::LevelNotCrossed, os.str());
  }
  if (count > 1) {
    std::ostringstream os;
    os << "level crossed " << count << " times";
    fail(ErrorCode::NonMonotoneProfile, os.str());
  }
  // cubic through four neighbouring nodes, clamped to the grid
  const std::size_t i0 = std::min(cell == 0 ? 0 : cell - 1, grid.n - 4);
  double xs[4], ys[4];
  for (int j = 0; j < 4; ++j) {
    xs[j] = grid.x(i0 + static_cast<std::size_t>(j));
    ys[j] = v[i0 + static_cast<std::size_t>(j)];
  }
  auto poly = [&](double x) {
    double s = 0;
    for (int a = 0; a < 4; ++a) {
      double term = ys[a];
      for (int b = 0; b < 4; ++b)
        if (b != a) term *= (x - xs[b]) / (xs[a] - xs[b]);
      s += term;
    }
    return s - level;
  };
  double lo = grid.x(cell), hi = grid.x(cell + 1);
  const bool rising = v[cell] <= level;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if ((poly(mid) <= 0) == rising) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

SpeedEstimate estimate_front_speed(const SpaceTimeField& f, int component, double level, double t_min) {
  require(component == 0 || component == 1, ErrorCode::InvalidArgument, "component must be 0 (u) or 1 (w)");
  SpeedEstimate est;
  for (std::size_t s = 0; s < f.times.size(); ++s) {
    if (f.times[s] < t_min) continue;
    est.times.push_back(f.times[s]);
    est.positions.push_back(crossing_position(f.grid, component == 0 ? f.u[s] : f.w[s], level));
  }
  require(est.times.size() >= 5, ErrorCode::InvalidArgument, "speed estimate needs at least 5 snapshots");
  const auto fit = numerics::fit_line(est.times, est.positions);
  est.c = fit.slope;
  est.r2 = fit.r2;
  return est;
}

}  // namespace pdesim
}  // namespace kppfront
