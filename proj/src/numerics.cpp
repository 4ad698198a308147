#include "kppfront/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "kppfront/error.hpp"

namespace kppfront {

const char* to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Saddle: return "Saddle";
    case EquilibriumKind::StableNode: return "StableNode";
    case EquilibriumKind::UnstableNode: return "UnstableNode";
    case EquilibriumKind::StableSpiral: return "StableSpiral";
    case EquilibriumKind::UnstableSpiral: return "UnstableSpiral";
    case EquilibriumKind::NonHyperbolic: return "NonHyperbolic";
  }
  return "Unknown";
}

namespace numerics {

Eigen::MatrixXd jacobian_central(const RealField& f, std::span<const double> x) {
  const std::size_t n = x.size();
  Eigen::MatrixXd jac(n, n);
  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> xm(x.begin(), x.end());
  std::vector<double> fp(n), fm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = std::max(1e-7, 1e-7 * std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    f(xp, fp);
    f(xm, fm);
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = (fp[i] - fm[i]) / (xp[j] - xm[j]);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return jac;
}

Eigen::MatrixXd jacobian_complex_step(const ComplexField& f, std::span<const double> x) {
  constexpr double h = 1e-30;
  const std::size_t n = x.size();
  Eigen::MatrixXd jac(n, n);
  std::vector<Complex> xc(x.begin(), x.end());
  std::vector<Complex> fc(n);
  for (std::size_t j = 0; j < n; ++j) {
    xc[j] = Complex(x[j], h);
    f(xc, fc);
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = fc[i].imag() / h;
    xc[j] = Complex(x[j], 0.0);
  }
  return jac;
}

Spectrum eigen_decompose(const Eigen::MatrixXd& jacobian) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jacobian, true);
  require(solver.info() == Eigen::Success, ErrorCode::DomainError, "eigen-decomposition failed");
  const auto n = static_cast<std::size_t>(jacobian.rows());
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const auto& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (vals[a].real() != vals[b].real()) return vals[a].real() > vals[b].real();
    return vals[a].imag() > vals[b].imag();
  });
  Spectrum out;
  const auto& vecs = solver.eigenvectors();
  for (std::size_t k : order) {
    out.values.push_back(vals[static_cast<Eigen::Index>(k)]);
    Eigen::VectorXcd v = vecs.col(static_cast<Eigen::Index>(k));
    v.normalize();
    // Fix the phase so the dominant component is real and positive.
    Eigen::Index dom = 0;
    v.cwiseAbs().maxCoeff(&dom);
    const Complex phase = std::abs(v[dom]) > 0 ? std::conj(v[dom]) / std::abs(v[dom]) : Complex(1.0);
    v *= phase;
    out.vectors.emplace_back(v.data(), v.data() + v.size());
  }
  return out;
}

EquilibriumKind classify_spectrum(std::span<const Complex> values, double tol) {
  bool any_pos = false, any_neg = false, any_complex = false;
  for (const auto& v : values) {
    if (std::abs(v.real()) < tol) return EquilibriumKind::NonHyperbolic;
    (v.real() > 0 ? any_pos : any_neg) = true;
    if (v.imag() != 0.0) any_complex = true;
  }
  if (any_pos && any_neg) return EquilibriumKind::Saddle;
  if (any_neg) return any_complex ? EquilibriumKind::StableSpiral : EquilibriumKind::StableNode;
  return any_complex ? EquilibriumKind::UnstableSpiral : EquilibriumKind::UnstableNode;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InsufficientData,
          "line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, ErrorCode::InsufficientData, "line fit needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace numerics
}  // namespace kppfront
