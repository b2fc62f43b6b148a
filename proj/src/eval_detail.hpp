#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "hypint/errors.hpp"
#include "hypint/numerics.hpp"

namespace hypint::detail {

inline constexpr double kPositiveMargin = 1e-9;

inline void positive(Complex v, const char* what) {
  if (!(v.real() > kPositiveMargin)) throw ConstraintError(std::string("need Re(") + what + ") > 0");
}

inline bool on_real_ray(Complex z, double from, bool upward) {
  if (z.imag() != 0.0) return false;
  return upward ? z.real() >= from : z.real() <= from;
}

// Exponent with the smaller real part.
inline Complex min_re(Complex p, Complex q) { return p.real() <= q.real() ? p : q; }

inline EvalResult scaled(const EvalResult& r, Complex pref, double node_rel_err) {
  double err = std::abs(pref) * (r.err_estimate + node_rel_err * std::abs(r.value));
  return {pref * r.value, err, r.method, r.terms_or_nodes};
}

// Largest relative error reported by special-function calls inside an integrand.
struct NodeError {
  double worst = 0.0;
  Complex track(const EvalResult& r) {
    double m = std::abs(r.value);
    if (m > 0.0) worst = std::max(worst, r.err_estimate / m);
    return r.value;
  }
};

}  // namespace hypint::detail
