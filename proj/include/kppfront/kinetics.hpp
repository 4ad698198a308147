#pragma once

// Scalar reaction terms shared by the PDE kinetics and the traveling-wave
// systems. Templated on the scalar so the same expressions serve complex-step
// differentiation.

#include <cmath>
#include <complex>

#include "kppfront/error.hpp"
#include "kppfront/numerics.hpp"

namespace kppfront::kinetics {

inline constexpr double kSingularGuard = 1e-10;

template <class T>
inline void guard_denominator(const T& d, const char* what) {
  if (!(std::abs(d) >= kSingularGuard)) fail(ErrorCode::DomainError, what);
}

/// Logistic growth minus Holling type II predation: u(gamma - u) - u w / (1 + u).
template <class T>
inline T prey_growth(const T& u, const T& w, double gamma) {
  const T den = 1.0 + u;
  guard_denominator(den, "denominator 1+u vanishes");
  return u * (gamma - u) - u * w / den;
}

/// Rosenzweig-MacArthur predator response w (u - alpha) / (eta + u).
template <class T>
inline T rm_predator(const T& u, const T& w, double alpha, double eta) {
  const T den = eta + u;
  guard_denominator(den, "denominator eta+u vanishes");
  return w * (u - alpha) / den;
}

/// Holling-Tanner predator logistic term w (1 - beta w / u).
template <class T>
inline T ht_predator(const T& u, const T& w, double beta) {
  guard_denominator(u, "denominator u vanishes");
  return w * (1.0 - beta * w / u);
}

/// sqrt(1 - w) restricted to w < 1 - 1e-10 (the parabola vertex is excluded).
template <class T>
inline T parabola_branch(const T& w) {
  if (!(real_part(w) < 1.0 - kSingularGuard)) fail(ErrorCode::DomainError, "w1 too close to 1");
  using std::sqrt;
  return sqrt(1.0 - w);
}

}  // namespace kppfront::kinetics
