#pragma once

// Adaptive Dormand-Prince 5(4) integration with dense output, sampled on a
// uniform grid of the independent variable.

#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "kppfront/error.hpp"
#include "kppfront/numerics.hpp"

namespace kppfront::ode {

struct Tolerances {
  double rel = 1e-10;
  double abs = 1e-12;
  double max_step = 0.0;  // 0: unlimited
};

/// Integrates x' = field(x) forward from t0 over at most `span`. The sampler is
/// called at t0 + k h (k = 0, 1, ...) as sample(t, x) and returns false to stop.
/// Returns the last sampled time. A stiff or singular field that defeats step
/// control raises StepTooSmall.
template <class Field, class Sampler>
double integrate_sampled(Field&& field, State x0, double t0, double span, double h,
                         const Tolerances& tol, Sampler&& sample) {
  namespace odeint = boost::numeric::odeint;
  require(h > 0 && span >= 0, ErrorCode::InvalidArgument, "sample step and span must be positive");
  auto rhs = [&field](const State& x, State& dx, double) { field(x, dx); };
  auto stepper = odeint::make_dense_output(tol.abs, tol.rel, tol.max_step,
                                           odeint::runge_kutta_dopri5<State>());
  const double t_end = t0 + span;
  if (!sample(t0, static_cast<const State&>(x0))) return t0;
  State x(x0.size());
  stepper.initialize(x0, t0, std::min(h, tol.max_step > 0 ? tol.max_step : h));
  long k = 1;
  double last = t0;
  try {
    while (true) {
      double t_next = t0 + static_cast<double>(k) * h;
      if (t_next > t_end * (1 + 1e-15) + 1e-15) return last;
      while (stepper.current_time() < t_next) {
        const auto step = stepper.do_step(rhs);
        if (!(step.second > step.first)) fail(ErrorCode::StepTooSmall, "integrator made no progress");
      }
      while (t_next <= stepper.current_time()) {
        stepper.calc_state(t_next, x);
        last = t_next;
        if (!sample(t_next, static_cast<const State&>(x))) return last;
        ++k;
        t_next = t0 + static_cast<double>(k) * h;
        if (t_next > t_end * (1 + 1e-15) + 1e-15) return last;
      }
    }
  } catch (const std::overflow_error& e) {
    fail(ErrorCode::StepTooSmall, e.what());
  }
}

/// Steps x' = field(x) from t0 to t0 + span and calls visit(t, x) after every
/// accepted step; visit returns false to stop. Returns the final time.
template <class Field, class Visitor>
double integrate_steps(Field&& field, State& x, double t0, double span, const Tolerances& tol,
                       double dt0, Visitor&& visit) {
  namespace odeint = boost::numeric::odeint;
  auto rhs = [&field](const State& s, State& ds, double) { field(s, ds); };
  auto stepper = odeint::make_controlled(tol.abs, tol.rel, tol.max_step,
                                         odeint::runge_kutta_dopri5<State>());
  double t = t0, dt = dt0;
  const double t_end = t0 + span;
  int rejected = 0;
  try {
    while (t < t_end) {
      dt = std::min(dt, t_end - t);
      const auto r = stepper.try_step(rhs, x, t, dt);
      if (r == odeint::fail) {
        if (++rejected > 500 || dt < 1e-14 * std::max(1.0, std::abs(t)))
          fail(ErrorCode::StepTooSmall, "step size underflow");
        continue;
      }
      rejected = 0;
      if (!visit(t, static_cast<const State&>(x))) break;
    }
  } catch (const std::overflow_error& e) {
    fail(ErrorCode::StepTooSmall, e.what());
  }
  return t;
}

}  // namespace kppfront::ode
