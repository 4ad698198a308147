#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kppfront/frontsolver.hpp"
#include "kppfront/phasespace.hpp"

namespace kppfront {

struct SweepPoint {
  double value = 0.0;        // epsilon or delta
  double epsilon = kUnset;   // epsilon used for the run (full-system delta sweeps)
  bool captured = false;
  double sup_distance = kUnset;
  double shift = kUnset;
  double residual = kUnset;  // largest endpoint residual of the swept front
  double u1_residual = kUnset;  // Case 2: max |u1 - sqrt(1 - w1)| after the transient
  std::string error;
};

struct SweepResult {
  std::string parameter;   // "epsilon" or "delta"
  std::string comparison;  // what the distances measure
  std::vector<SweepPoint> points;
  double reference_residual = kUnset;
  double slope = kUnset;
  double intercept = kUnset;
  double r2 = kUnset;
  std::size_t captured = 0;
  bool monotone = false;        // non-increasing, allowing one flagged inversion within 5 %
  std::size_t inversions = 0;
  bool inversion_flagged = false;
};

struct SweepOptions {
  ShootingConfig shooting;
  unsigned jobs = 1;
  // delta sweeps: integrate the full 4-D system with epsilon = eps_rule(delta)
  // instead of the epsilon = 0 reduced system
  bool full_system = false;
  std::function<double(double)> eps_rule;
  double mu = 1.0;              // Case 2 full-system runs
  double u1_transient = 0.0;    // Case 2: slow-time units skipped at the A end
};

namespace verify {

SweepResult epsilon_sweep_case1(double alpha, double eta, double c, double delta,
                                const std::vector<double>& eps_list, const SweepOptions& opt = {});

SweepResult delta_sweep_case1(double alpha, double eta, double c, const std::vector<double>& delta_list,
                              const SweepOptions& opt = {});

SweepResult delta_sweep_case2(double alpha, double eta, const std::vector<double>& delta_list,
                              const SweepOptions& opt = {});

/// Slope, r^2 and monotonicity over the captured points. Throws InsufficientData
/// below three captured points.
void fit_sweep(SweepResult& r);

struct AuditSample {
  double alpha = 0.5, eta = 1.0, delta = 0.1, c = 1.2;
};

struct AuditEntry {
  AuditSample sample;
  double eig_error = 0.0;          // worst relative closed-form vs numerical eigenvalue error
  std::string worst_formula;
  bool kpp_passed = false;
  double kpp_margin = 0.0;         // smallest check margin
  double delta0_error = 0.0;
  bool flagged = false;            // near-degenerate; excluded from tolerance statistics
  std::string flag_reason;
  bool passed = false;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  double tolerance = 1e-8;
  double worst_eig_error = 0.0;
  double worst_delta0_error = 0.0;
  double worst_kpp_margin = 0.0;
  std::size_t flagged = 0;
  std::size_t failed = 0;
  bool all_passed() const { return failed == 0; }
};

/// alpha in (0.05, 0.95), eta in (0.1, 10), delta in (0, delta0), c in (c*, 3 c*).
std::vector<AuditSample> random_audit_samples(std::size_t n, std::uint64_t seed);

AuditReport formula_audit(const std::vector<AuditSample>& samples,
                          JacobianMethod method = JacobianMethod::ComplexStep);

struct KppAuditEntry {
  ModelFamily family = ModelFamily::RosenzweigMacArthur;
  ModelParams params;
  phasespace::KppReport report;
};

/// kpp_property_check over n random RM (alpha, eta) and n random HT beta samples.
std::vector<KppAuditEntry> kpp_audit(std::size_t n, std::uint64_t seed, int grid_size = 101);

struct TrappingReport {
  phasespace::TrappingTriangle triangle;
  std::size_t seeds = 0;
  double span = 0.0;
  double max_penetration = 0.0;  // over all trajectories and accepted steps
  std::size_t exits = 0;         // trajectories exceeding the tolerance
  double tolerance = 1e-9;
  bool passed() const { return exits == 0; }
};

/// Integrates `seeds` trajectories started uniformly inside the triangle.
TrappingReport trapping_check(double alpha, double eta, double c, std::optional<double> b, std::size_t seeds,
                              double span, std::uint64_t seed, double tolerance = 1e-9);

}  // namespace verify
}  // namespace kppfront
