#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hypint/errors.hpp"
#include "hypint/series.hpp"
#include "series_detail.hpp"

namespace hypint {

namespace {

constexpr int kMaxTerms = 20000;

bool is_nonpositive_integer_exact(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::fabs(z.real() - std::round(z.real())) < 1e-14;
}

// Direct summation of the Gauss series.
EvalResult sum_2f1(Complex a, Complex b, Complex c, Complex z, double tol, int max_terms = kMaxTerms) {
  Complex t = 1.0;
  Complex s = 1.0;
  double abs_sum = 1.0;
  detail::SeriesTail tail;
  int k = 0;
  for (; k < max_terms; ++k) {
    double dk = k;
    t *= (a + dk) * (b + dk) / ((c + dk) * (dk + 1.0)) * z;
    s += t;
    double m = std::abs(t);
    abs_sum += m;
    if (tail.push(m, std::abs(s), tol)) break;
  }
  if (k == max_terms) throw NoConvergence("2F1 series did not converge");
  return {s, tail.bound() + 4.0 * kEps * abs_sum, Method::series, k + 2};
}

}  // namespace

Hyp2f1::Hyp2f1(Complex a, Complex b, Complex c, Hyp2f1Options opts)
    : a_(a), b_(b), c_(c), opts_(opts) {
  require_finite(a, "hyp2f1 a");
  require_finite(b, "hyp2f1 b");
  require_finite(c, "hyp2f1 c");
  if (near_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a nonpositive integer");
  polynomial_ = is_nonpositive_integer_exact(a) || is_nonpositive_integer_exact(b);
  if (polynomial_) return;
  Complex s = c - a - b;
  if (integer_distance(s) >= opts_.degenerate_gap) {
    one_minus_ok_ = true;
    om1_ = gamma_ratio({c, s}, {c - a, c - b});
    om2_ = gamma_ratio({c, -s}, {a, b});
  }
  if (integer_distance(b - a) >= opts_.degenerate_gap) {
    inversion_ok_ = true;
    in1_ = gamma_ratio({c, b - a}, {b, c - a});
    in2_ = gamma_ratio({c, a - b}, {a, c - b});
  }
}

EvalResult Hyp2f1::direct(Complex z, double tol) const { return sum_2f1(a_, b_, c_, z, tol); }

EvalResult Hyp2f1::operator()(Complex z, double tol) const {
  require_finite(z, "hyp2f1 argument");
  if (z == 0.0) return {1.0, 0.0, Method::series, 1};
  if (!polynomial_ && z.imag() == 0.0 && z.real() >= 1.0) throw DomainError("hyp2f1: argument on the cut [1, inf)");
  const double rd = opts_.direct_radius;
  if (polynomial_ || std::abs(z) <= rd) return direct(z, tol);
  Complex w = z / (z - 1.0);
  // With a large parameter the four Gauss series around 0 differ wildly in
  // cancellation; keep the one with the smallest error estimate.
  if (std::max({std::abs(a_), std::abs(b_), std::abs(c_)}) >= 20.0) {
    std::optional<EvalResult> best;
    auto consider = [&](Complex p, Complex q, Complex arg, Complex pref) {
      if (!(std::abs(arg) < 0.9)) return;
      try {
        EvalResult r = sum_2f1(p, q, c_, arg, tol, 4000);
        EvalResult v{pref * r.value, std::abs(pref) * r.err_estimate, Method::series, r.terms_or_nodes};
        if (!best || v.err_estimate * std::abs(best->value) < best->err_estimate * std::abs(v.value)) best = v;
      } catch (const NoConvergence&) {
      }
    };
    consider(a_, b_, z, 1.0);
    consider(c_ - a_, c_ - b_, z, principal_pow(1.0 - z, c_ - a_ - b_));
    consider(a_, c_ - b_, w, principal_pow(1.0 - z, -a_));
    consider(c_ - a_, b_, w, principal_pow(1.0 - z, -b_));
    if (best) {
      if (best->err_estimate <= 1e3 * std::max(tol, kEps) * std::abs(best->value)) return *best;
      try {
        EvalResult other = connection(z, w, tol);
        return other.err_estimate * std::abs(best->value) < best->err_estimate * std::abs(other.value) ? other : *best;
      } catch (const NoConvergence&) {
        return *best;
      }
    }
  }
  return connection(z, w, tol);
}

// Pfaff series, then the 1-z and 1/z connection formulas, then the ODE.
EvalResult Hyp2f1::connection(Complex z, Complex w, double tol) const {
  const double rd = opts_.direct_radius;

  if (std::abs(w) <= rd) {
    EvalResult r = sum_2f1(a_, c_ - b_, c_, w, tol);
    Complex f = principal_pow(1.0 - z, -a_);
    return {f * r.value, std::abs(f) * r.err_estimate, Method::series, r.terms_or_nodes};
  }

  if (std::abs(1.0 - z) <= rd) {
    if (one_minus_ok_) {
      Complex s = c_ - a_ - b_;
      EvalResult r1 = sum_2f1(a_, b_, 1.0 - s, 1.0 - z, tol);
      EvalResult r2 = sum_2f1(c_ - a_, c_ - b_, 1.0 + s, 1.0 - z, tol);
      Complex p = om2_ * principal_pow(1.0 - z, s);
      Complex t1 = om1_ * r1.value, t2 = p * r2.value;
      double err = std::abs(om1_) * r1.err_estimate + std::abs(p) * r2.err_estimate +
                   8.0 * kEps * (std::abs(t1) + std::abs(t2));
      return {t1 + t2, err, Method::series, r1.terms_or_nodes + r2.terms_or_nodes};
    }
    if (!opts_.degenerate_fallback)
      throw DegenerateError("hyp2f1: c-a-b is an integer in the 1-z connection formula");
    return ode(z, tol);
  }

  if (std::abs(z) >= opts_.inversion_radius) {
    if (inversion_ok_) {
      Complex iz = 1.0 / z;
      EvalResult r1 = sum_2f1(a_, a_ - c_ + 1.0, a_ - b_ + 1.0, iz, tol);
      EvalResult r2 = sum_2f1(b_, b_ - c_ + 1.0, b_ - a_ + 1.0, iz, tol);
      Complex p1 = in1_ * principal_pow(-z, -a_);
      Complex p2 = in2_ * principal_pow(-z, -b_);
      Complex t1 = p1 * r1.value, t2 = p2 * r2.value;
      double err = std::abs(p1) * r1.err_estimate + std::abs(p2) * r2.err_estimate +
                   8.0 * kEps * (std::abs(t1) + std::abs(t2));
      return {t1 + t2, err, Method::series, r1.terms_or_nodes + r2.terms_or_nodes};
    }
    if (!opts_.degenerate_fallback)
      throw DegenerateError("hyp2f1: b-a is an integer in the 1/z connection formula");
  }
  return ode(z, tol);
}

// Taylor-series continuation of the hypergeometric ODE
//   z(1-z) F'' + (c - (a+b+1) z) F' - ab F = 0
// from a point on |z| = 1/2 along a polyline that keeps clear of 0 and 1.
EvalResult Hyp2f1::ode(Complex z, double tol) const {
  const double sgn = z.imag() >= 0.0 ? 1.0 : -1.0;
  Complex pts[3];
  int npts = 0;
  if (z.real() > 0.9) {
    pts[npts++] = Complex(0.0, 0.5 * sgn);
    pts[npts++] = Complex(1.0, 0.75 * sgn);
  } else {
    pts[npts++] = 0.5 * z / std::abs(z);
  }
  pts[npts++] = z;

  EvalResult f0 = sum_2f1(a_, b_, c_, pts[0], 1e-16);
  EvalResult d0 = sum_2f1(a_ + 1.0, b_ + 1.0, c_ + 1.0, pts[0], 1e-16);
  Complex f = f0.value;
  Complex fp = a_ * b_ / c_ * d0.value;
  double rel = (f0.err_estimate + d0.err_estimate) / std::max(std::abs(f), 1e-300);
  const Complex ab = a_ * b_;
  const Complex q1 = -(a_ + b_ + 1.0);
  Complex cur = pts[0];
  std::int64_t work = f0.terms_or_nodes + d0.terms_or_nodes;
  int steps = 0;

  // Large parameters make the local Taylor series converge more slowly;
  // shorter steps keep it within the 400-term budget.
  const double pscale = 1.0 + std::max({std::abs(a_), std::abs(b_), std::abs(c_)});
  double shrink = std::min(1.0, 8.0 / pscale);

  for (int leg = 1; leg < npts; ++leg) {
    const Complex target = pts[leg];
    while (cur != target) {
      double R = std::min(std::abs(cur), std::abs(1.0 - cur));
      if (R < 1e-300) throw NoConvergence("hyp2f1 continuation hit a singular point");
      Complex h = target - cur;
      bool last = true;
      if (std::abs(h) > 0.5 * shrink * R) {
        h *= 0.5 * shrink * R / std::abs(h);
        last = false;
      }
      const Complex p0 = cur * (1.0 - cur);
      const Complex p1 = 1.0 - 2.0 * cur;
      const Complex q0 = c_ - (a_ + b_ + 1.0) * cur;
      Complex dn = f, dn1 = fp * h;
      Complex sf = dn + dn1, sfp = dn1;
      double abs_sum = std::abs(dn) + std::abs(dn1);
      int n = 0, quiet = 0;
      for (; n < 400; ++n) {
        double dnn = n;
        Complex num = (p1 * (dnn * (dnn + 1.0)) + q0 * (dnn + 1.0)) * dn1 * h +
                      (-dnn * (dnn - 1.0) + q1 * dnn - ab) * dn * h * h;
        Complex dn2 = -num / (p0 * ((dnn + 2.0) * (dnn + 1.0)));
        sf += dn2;
        sfp += (dnn + 2.0) * dn2;
        abs_sum += std::abs(dn2) * (dnn + 3.0);
        dn = dn1;
        dn1 = dn2;
        double scale = std::abs(sf) + std::abs(sfp);
        quiet = (std::abs(dn) + std::abs(dn1) <= 1e-18 * scale) ? quiet + 1 : 0;
        if (quiet >= 3) break;
      }
      work += n;
      if (n == 400) {
        if (shrink < 1e-4) throw NoConvergence("hyp2f1 continuation step did not converge");
        shrink *= 0.5;
        continue;
      }
      ++steps;
      f = sf;
      fp = sfp / h;
      rel += 4.0 * kEps * abs_sum / std::max(std::abs(sf), 1e-300);
      cur = last ? target : cur + h;
      if (steps > 20000) throw NoConvergence("hyp2f1 continuation needs too many steps");
    }
  }
  (void)tol;
  return {f, rel * std::abs(f), Method::series, work};
}

EvalResult hyp2f1(Complex a, Complex b, Complex c, Complex z, double tol, const Hyp2f1Options& opts) {
  return Hyp2f1(a, b, c, opts)(z, tol);
}

EvalResult hyp_pfq(const std::vector<Complex>& num, const std::vector<Complex>& den, Complex z,
                   double tol) {
  require_finite(z, "pFq argument");
  for (Complex d : den)
    if (near_nonpositive_integer(d)) throw PoleError("pFq: lower parameter is a nonpositive integer");
  if (num.size() == den.size() + 1 && std::abs(z) >= 1.0)
    throw DomainError("pFq: direct series needs |z| < 1");
  Complex t = 1.0, s = 1.0;
  double abs_sum = 1.0;
  detail::SeriesTail tail;
  int k = 0;
  for (; k < kMaxTerms; ++k) {
    double dk = k;
    Complex r = z / (dk + 1.0);
    for (Complex n : num) r *= n + dk;
    for (Complex d : den) r /= d + dk;
    t *= r;
    s += t;
    double m = std::abs(t);
    abs_sum += m;
    if (tail.push(m, std::abs(s), tol)) break;
  }
  if (k == kMaxTerms) throw NoConvergence("pFq series did not converge");
  return {s, tail.bound() + 4.0 * kEps * abs_sum, Method::series, k + 2};
}

}  // namespace hypint
