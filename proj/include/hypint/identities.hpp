#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypint/numerics.hpp"

namespace hypint {

struct IdentityPoint {
  std::vector<Complex> params;
  Complex x = 0.0;
  Complex y = 0.0;
};

struct ResidualRecord {
  Complex lhs = 0.0, rhs = 0.0;
  double residual = 0.0;   // |lhs - rhs| / max(|lhs|, |rhs|, 1e-300)
  double combined = 0.0;   // relative error estimate of both sides
  double threshold = 0.0;  // max(10 * combined, floor)
  bool pass = false;
};

// Uniform draws for identity samplers.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi);
  // Real part in (lo + 0.1, hi - 0.1), imaginary part in (-0.3, 0.3).
  Complex param(double lo, double hi);
  // Real part in (lo, hi) with the same imaginary spread.
  Complex shifted(double lo, double hi) { return param(lo - 0.1, hi + 0.1); }
  // Uniform point of the open disk.
  Complex disk(Complex center, double radius);

 private:
  std::mt19937_64 rng_;
};

struct IdentitySpec {
  std::string id;
  std::string summary;
  std::size_t arity = 0;  // number of parameters in a point
  double floor = 1e-9;    // residual always accepted below this
  // Empty when the draw landed near a degeneracy and must be redrawn.
  std::function<std::optional<IdentityPoint>(Sampler&)> sample;
  std::function<std::pair<EvalResult, EvalResult>(const IdentityPoint&, double tol)> sides;
};

const std::vector<IdentitySpec>& identity_registry();
const IdentitySpec* find_identity(std::string_view id);

// Throws SkippedError when a side hits a degenerate, geometric or parameter
// obstruction. Other errors propagate.
ResidualRecord check_identity(const IdentitySpec& spec, const IdentityPoint& point, double tol = 1e-10);
ResidualRecord check_identity(std::string_view id, const IdentityPoint& point, double tol = 1e-10);

enum class Status { pass, fail, skipped };
std::string_view status_name(Status s);

struct IdentityReport {
  std::string id;
  int samples = 0;  // points evaluated on both sides
  double max_rel_residual = 0.0;
  std::vector<std::pair<IdentityPoint, double>> failures;
  Status status = Status::skipped;
  int rejected = 0;  // degenerate draws thrown away before evaluation
  int skipped = 0;   // points whose evaluation raised SkippedError
};

IdentityReport run_identity(const IdentitySpec& spec, int samples, std::uint64_t seed, double tol = 1e-10);
// Runs fixed points instead of sampled ones.
IdentityReport run_points(const IdentitySpec& spec, const std::vector<IdentityPoint>& points, double tol = 1e-10);

enum class Suite { fast, full };
int suite_samples(Suite s);

// Every registered identity plus the classical-vs-loop discrepancy check.
std::vector<IdentityReport> run_suite(Suite suite, std::uint64_t seed, double tol = 1e-10);

enum class ReportFormat { text, machine };
// One line per report: id, samples, max_rel_residual, status.
std::string format_reports(const std::vector<IdentityReport>& reports, ReportFormat fmt);

struct DiscrepancySample {
  IdentityPoint point;  // H2 parameters a, b, c, d, e
  EvalResult classical;
  EvalResult fp_side;
  EvalResult loop;
  double classical_vs_fp = 0.0;    // relative
  double classical_vs_loop = 0.0;  // relative
  double loop_estimate = 0.0;      // combined relative estimate of classical and loop
  bool pass = false;               // agrees with F_P, differs from the loop by > 10x estimates
};

// The rewritten classical double integral (triangle coordinates) against
// its F_P closed side and against H2 from the Kita loop, at real x in
// (-0.9, 0.9) and y in (-0.95, -0.1).
std::vector<DiscrepancySample> discrepancy_check(int samples, std::uint64_t seed, double tol = 1e-10);
IdentityReport discrepancy_report(int samples, std::uint64_t seed, double tol = 1e-10);

}  // namespace hypint
