#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string_view>
#include <vector>

namespace hypint {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEps = 2.220446049250313e-16;

enum class Method { series, single_integral, double_integral, loop_integral, closed_form };

std::string_view method_name(Method m);

struct EvalResult {
  Complex value{0.0, 0.0};
  double err_estimate = 0.0;
  Method method = Method::series;
  std::int64_t terms_or_nodes = 0;
};

// Throws DomainError when z has a NaN or infinite component.
void require_finite(Complex z, const char* what);

// Distance from z to the nearest integer (complex distance).
double integer_distance(Complex z);
bool near_nonpositive_integer(Complex z, double tol = 1e-12);

// Analytic log Gamma on C minus (-inf, 0]; matches the principal branch
// of log Gamma for real positive arguments.
Complex log_gamma(Complex z);
Complex gamma(Complex z);
// 1/Gamma(z), exactly zero at the poles.
Complex rgamma(Complex z);

// prod Gamma(num) / prod Gamma(den). Denominator poles give zero,
// numerator poles throw PoleError.
Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den);

// (a)_k for every integer k.
Complex pochhammer(Complex a, int k);

// Principal power with arg(base) in (-pi, pi].
Complex principal_pow(Complex base, Complex exponent);

// Continuous arguments of several multivalued factors along a path.
class BranchState {
 public:
  explicit BranchState(double max_step = 0.75 * kPi) : max_step_(max_step) {}

  // Registers a factor. The first update picks the branch of arg(base)
  // closest to initial_arg.
  std::size_t add_factor(double initial_arg = 0.0);
  std::size_t size() const { return factors_.size(); }

  // Continues the argument of factor id to base and returns it.
  double advance(std::size_t id, Complex base);

  double argument(std::size_t id) const;
  double log_modulus(std::size_t id) const;
  bool started(std::size_t id) const;
  double max_step() const { return max_step_; }

 private:
  struct Factor {
    double arg = 0.0;
    double log_mod = 0.0;
    bool started = false;
  };
  std::vector<Factor> factors_;
  double max_step_;
};

// exp(exponent * (log|base| + i theta)) with theta continued in state.
Complex tracked_power(Complex base, Complex exponent, BranchState& state, std::size_t id);

}  // namespace hypint
