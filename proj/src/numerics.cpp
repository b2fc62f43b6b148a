#include "hypint/numerics.hpp"

#include <cmath>
#include <string>

#include "hypint/errors.hpp"

namespace hypint {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kLogPi = 1.14472988584940017414;

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

Complex principal_log(Complex z) {
  double arg = std::atan2(z.imag(), z.real());
  if (z.imag() == 0.0 && z.real() < 0.0) arg = kPi;
  return {std::log(std::abs(z)), arg};
}

Complex stirling(Complex z) {
  Complex r = (z - 0.5) * std::log(z) - z + kHalfLog2Pi;
  Complex inv = 1.0 / z;
  Complex inv2 = inv * inv;
  Complex p = inv;
  for (double c : kStirling) {
    r += c * p;
    p *= inv2;
  }
  return r;
}

// sin(pi z) computed near the integer round(Re z) for accuracy.
Complex sin_pi(Complex z) {
  double n = std::round(z.real());
  Complex s = std::sin(kPi * (z - n));
  return std::fmod(std::fabs(n), 2.0) == 1.0 ? -s : s;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::series: return "series";
    case Method::single_integral: return "single-integral";
    case Method::double_integral: return "double-integral";
    case Method::loop_integral: return "loop-integral";
    case Method::closed_form: return "closed-form";
  }
  return "unknown";
}

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string("non-finite value in ") + what);
}

double integer_distance(Complex z) {
  return std::abs(z - std::round(z.real()));
}

bool near_nonpositive_integer(Complex z, double tol) {
  double n = std::round(z.real());
  return n <= 0.0 && std::abs(z - n) < tol;
}

Complex log_gamma(Complex z) {
  require_finite(z, "log_gamma");
  if (near_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
  if (z.real() < -50.0) {
    // exp-consistent value only; far left half-plane is outside the
    // accuracy contract.
    return kLogPi - principal_log(sin_pi(z)) - log_gamma(1.0 - z);
  }
  if (z.imag() == 0.0 && z.real() > 0.0) return std::lgamma(z.real());
  // log of the shift product: modulus from one product, argument summed
  double log_mod = 0.0, arg = 0.0;
  double prod = 1.0;
  while (z.real() < 10.0) {
    prod *= std::abs(z);
    arg += principal_log(z).imag();
    if (prod > 1e200 || prod < 1e-200) {
      log_mod += std::log(prod);
      prod = 1.0;
    }
    z += 1.0;
  }
  log_mod += std::log(prod);
  return stirling(z) - Complex(log_mod, arg);
}

Complex gamma(Complex z) {
  if (z.imag() == 0.0 && z.real() > 0.0 && z.real() <= 20.0 && z.real() == std::round(z.real())) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(z.real()); ++k) f *= k;
    return f;
  }
  if (z.imag() == 0.0 && z.real() > 0.0 && z.real() < 171.0) return std::tgamma(z.real());
  return std::exp(log_gamma(z));
}

Complex rgamma(Complex z) {
  require_finite(z, "rgamma");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real())) return 0.0;
  if (z.real() < 0.5) return sin_pi(z) / kPi * gamma(1.0 - z);
  return std::exp(-log_gamma(z));
}

Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  Complex r = 1.0;
  for (Complex n : num) r *= gamma(n);
  for (Complex d : den) r *= rgamma(d);
  if (std::isfinite(r.real()) && std::isfinite(r.imag()) && r != 0.0) return r;
  // Large arguments overflow the factors; sum logarithms instead.
  Complex lg = 0.0;
  for (Complex d : den) {
    if (d.imag() == 0.0 && d.real() <= 0.0 && d.real() == std::round(d.real())) return 0.0;
    lg -= log_gamma(d);
  }
  for (Complex n : num) lg += log_gamma(n);
  return std::exp(lg);
}

Complex pochhammer(Complex a, int k) {
  require_finite(a, "pochhammer");
  if (k == 0) return 1.0;
  if (k > 0) {
    Complex p = a;
    for (int j = 1; j < k; ++j) p *= a + static_cast<double>(j);
    return p;
  }
  int m = -k;
  Complex p = 1.0;
  for (int j = 0; j < m; ++j) {
    Complex f = 1.0 - a + static_cast<double>(j);
    if (std::abs(f) < 1e-12) throw PoleError("pochhammer: negative shift hits a pole");
    p *= f;
  }
  return (m % 2 == 0 ? 1.0 : -1.0) / p;
}

Complex principal_pow(Complex base, Complex exponent) {
  if (base == 0.0) {
    if (exponent == 0.0) return 1.0;
    if (exponent.real() > 0.0) return 0.0;
    throw DomainError("principal_pow: zero base with nonpositive exponent");
  }
  return std::exp(exponent * principal_log(base));
}

std::size_t BranchState::add_factor(double initial_arg) {
  factors_.push_back(Factor{initial_arg, 0.0, false});
  return factors_.size() - 1;
}

double BranchState::advance(std::size_t id, Complex base) {
  Factor& f = factors_.at(id);
  if (base == 0.0) throw DomainError("tracked factor vanishes on the path");
  require_finite(base, "tracked factor");
  double a = std::atan2(base.imag(), base.real());
  double delta = std::remainder(a - f.arg, kTwoPi);
  if (f.started && std::fabs(delta) > max_step_)
    throw DiscontinuityError("argument jump of " + std::to_string(delta) + " rad exceeds step limit");
  f.arg += delta;
  f.log_mod = std::log(std::abs(base));
  f.started = true;
  return f.arg;
}

double BranchState::argument(std::size_t id) const { return factors_.at(id).arg; }
double BranchState::log_modulus(std::size_t id) const { return factors_.at(id).log_mod; }
bool BranchState::started(std::size_t id) const { return factors_.at(id).started; }

Complex tracked_power(Complex base, Complex exponent, BranchState& state, std::size_t id) {
  double theta = state.advance(id, base);
  return std::exp(exponent * Complex(state.log_modulus(id), theta));
}

}  // namespace hypint
