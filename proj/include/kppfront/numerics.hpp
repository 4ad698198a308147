#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kppfront {

using State = std::vector<double>;
using Complex = std::complex<double>;

using RealField = std::function<void(std::span<const double>, std::span<double>)>;
using ComplexField = std::function<void(std::span<const Complex>, std::span<Complex>)>;

inline double real_part(double x) { return x; }
inline double real_part(const Complex& x) { return x.real(); }

enum class EquilibriumKind {
  Saddle,
  StableNode,
  UnstableNode,
  StableSpiral,
  UnstableSpiral,
  NonHyperbolic,
};

const char* to_string(EquilibriumKind kind);

/// Eigenvalues below this magnitude (real part) are treated as zero.
inline constexpr double kClassificationTolerance = 1e-9;

enum class JacobianMethod { ComplexStep, CentralDifference };

namespace numerics {

/// Central differences, step h_j = max(1e-7, 1e-7 |x_j|).
Eigen::MatrixXd jacobian_central(const RealField& f, std::span<const double> x);

/// Complex-step derivative; exact to rounding for analytic fields.
Eigen::MatrixXd jacobian_complex_step(const ComplexField& f, std::span<const double> x);

struct Spectrum {
  std::vector<Complex> values;
  std::vector<std::vector<Complex>> vectors;  // unit 2-norm, same order as values
};

/// Eigen-decomposition sorted by descending real part, then descending imaginary part.
Spectrum eigen_decompose(const Eigen::MatrixXd& jacobian);

EquilibriumKind classify_spectrum(std::span<const Complex> values,
                                  double tol = kClassificationTolerance);

double max_abs(std::span<const double> v);
double norm2(std::span<const double> v);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Needs at least two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace numerics
}  // namespace kppfront
