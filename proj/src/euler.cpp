#include "hypint/euler.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hypint/errors.hpp"
#include "hypint/quadrature.hpp"
#include "eval_detail.hpp"
#include "series_detail.hpp"

namespace hypint {

namespace {

constexpr std::array<std::pair<Rep, std::string_view>, 17> kRepNames{{
    {Rep::E2_2, "E2.2"},
    {Rep::E2_3, "E2.3"},
    {Rep::E2_4, "E2.4"},
    {Rep::E2_5, "E2.5"},
    {Rep::E2_10, "E2.10"},
    {Rep::E2_13, "E2.13"},
    {Rep::H3_3, "H3.3"},
    {Rep::H3_5, "H3.5"},
    {Rep::H3_7, "H3.7"},
    {Rep::H3_8, "H3.8"},
    {Rep::FP4_6, "FP4.6"},
    {Rep::FP_eq32, "FP-eq32"},
    {Rep::FP4_7, "FP4.7"},
    {Rep::FP4_7a, "FP4.7a"},
    {Rep::C4_8, "C4.8"},
    {Rep::C4_8a, "C4.8a"},
    {Rep::C4_8b, "C4.8b"},
}};

using detail::min_re;
using detail::NodeError;
using detail::on_real_ray;
using detail::positive;
using detail::scaled;

void x_off_cut(Complex x) {
  require_finite(x, "x");
  if (on_real_ray(x, 1.0, true)) throw DomainError("x on the cut [1, inf)");
}

Complex beta_prefactor(Complex p, Complex q) { return gamma(p + q) * rgamma(p) * rgamma(q); }

// Integral over the unit square of
//   u^{a-1} (1-u)^{b2+c1-a-1} v^{b2-c2} (1-v)^{c1+c2-a-2} (1-xu)^{-b1} (u + (1-u)v/y)^{-b2}.
// The last factor vanishes at the corner u = v = 0, so [0, h]^2 is split
// along the diagonal (Duffy) and the rest is three rectangles.
EvalResult fp46_square(const FPParams& p, Complex x, Complex y, double tol) {
  constexpr double h = 0.5, k = 1.0 - h;
  const Complex au = p.a - 1.0, bu = p.b2 + p.c1 - p.a - 1.0;
  const Complex av = p.b2 - p.c2, bv = p.c1 + p.c2 - p.a - 2.0;
  const Complex iy = 1.0 / y;
  auto xf = [=](double u) { return principal_pow(1.0 - x * u, -p.b1); };
  auto hp = [](double base, Complex e) { return principal_pow(Complex(base), e); };
  const Complex radial = au + av + 1.0 - p.b2;

  WeightedIntegrand2D lower;  // u = h t, v = h t s
  lower.alpha_u = radial;
  lower.alpha_v = av;
  lower.core = [=](double t, double, double s, double) {
    const double u = h * t;
    return principal_pow(1.0 - u, bu) * principal_pow(1.0 - u * s, bv) * xf(u) *
           principal_pow(1.0 + (1.0 - u) * s * iy, -p.b2);
  };
  WeightedIntegrand2D upper;  // v = h t, u = h t r
  upper.alpha_u = radial;
  upper.alpha_v = au;
  upper.core = [=](double t, double, double r, double) {
    const double v = h * t, u = v * r;
    return principal_pow(1.0 - u, bu) * principal_pow(1.0 - v, bv) * xf(u) *
           principal_pow(r + (1.0 - u) * iy, -p.b2);
  };
  auto corner = [=](double u, double omu, double v) { return principal_pow(u + omu * v * iy, -p.b2); };
  WeightedIntegrand2D right;  // u in [h, 1], v in [0, h]
  right.beta_u = bu;
  right.alpha_v = av;
  right.core = [=](double t, double omt, double s, double) {
    const double u = h + k * t, v = h * s;
    return hp(u, au) * hp(1.0 - v, bv) * xf(u) * corner(u, k * omt, v);
  };
  WeightedIntegrand2D top;  // u in [0, h], v in [h, 1]
  top.alpha_u = au;
  top.beta_v = bv;
  top.core = [=](double t, double, double s, double) {
    const double u = h * t, v = h + k * s;
    return hp(1.0 - u, bu) * hp(v, av) * xf(u) * corner(u, 1.0 - u, v);
  };
  WeightedIntegrand2D far;  // [h, 1]^2
  far.beta_u = bu;
  far.beta_v = bv;
  far.core = [=](double t, double omt, double s, double) {
    const double u = h + k * t, v = h + k * s;
    return hp(u, au) * hp(v, av) * xf(u) * corner(u, k * omt, v);
  };

  const double ptol = tol / 4.0;
  const EvalResult parts[] = {integrate_unit_square(lower, ptol), integrate_unit_square(upper, ptol),
                              integrate_unit_square(right, ptol), integrate_unit_square(top, ptol),
                              integrate_unit_square(far, ptol)};
  const Complex w[] = {hp(h, radial + 1.0), hp(h, radial + 1.0), hp(k, bu + 1.0) * hp(h, av + 1.0),
                       hp(h, au + 1.0) * hp(k, bv + 1.0), hp(k, bu + bv + 2.0)};
  EvalResult out{0.0, 0.0, Method::double_integral, 0};
  for (int i = 0; i < 5; ++i) {
    out.value += w[i] * parts[i].value;
    out.err_estimate += std::abs(w[i]) * parts[i].err_estimate;
    out.terms_or_nodes += parts[i].terms_or_nodes;
  }
  return out;
}

void check_fp_common(const FPParams& p, Complex x, Complex y) {
  x_off_cut(x);
  require_finite(y, "y");
  if (on_real_ray(y, 0.0, false)) throw DomainError("y on the cut (-inf, 0]");
  (void)p;
}

void check_fp46(const FPParams& p) {
  positive(p.a, "a");
  positive(p.a - p.b2, "a-b2");
  positive(p.b2 + p.c1 - p.a, "b2+c1-a");
  positive(p.b2 - p.c2 + 1.0, "b2-c2+1");
  positive(p.c1 + p.c2 - p.a - 1.0, "c1+c2-a-1");
}

// 2F1(-n, beta; gamma; w) through its expansion about 1 - w, which avoids
// the cancellation of the direct sum when |1 - w| < 1 < |w|.
Complex terminating_2f1(int n, Complex beta, Complex gam, Complex w) {
  const Complex s = beta - gam - double(n) + 1.0;
  bool safe = true;
  for (int k = 0; k < n; ++k)
    if (std::abs(s + double(k)) < 1e-8) safe = false;
  if (!safe || std::abs(1.0 - w) >= std::abs(w)) return hyp2f1(double(-n), beta, gam, w).value;
  Complex lead = pochhammer(gam - beta, n) / pochhammer(gam, n);
  Complex term = 1.0, sum = 1.0;
  const Complex v = 1.0 - w;
  for (int k = 0; k < n; ++k) {
    term *= (double(k) - n) * (beta + double(k)) / ((s + double(k)) * (k + 1.0)) * v;
    sum += term;
  }
  return lead * sum;
}

// Levin u-transform of the partial sums s[n..n+k] with remainder model (m+1) a_m.
std::optional<Complex> levin_u(const std::vector<Complex>& s, const std::vector<Complex>& a, int n, int k) {
  Complex num = 0.0, den = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    const int m = n + j;
    Complex omega = (m + 1.0) * a[m];
    if (omega == 0.0) return std::nullopt;
    double c = binom * std::pow((n + j + 1.0) / (n + k + 1.0), k - 1);
    if (j % 2 == 1) c = -c;
    num += c * s[m] / omega;
    den += c / omega;
    binom = binom * (k - j) / (j + 1.0);
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

std::string_view rep_name(Rep r) {
  for (const auto& [id, name] : kRepNames)
    if (id == r) return name;
  return "unknown";
}

std::optional<Rep> parse_rep(std::string_view name) {
  for (const auto& [id, n] : kRepNames)
    if (n == name) return id;
  return std::nullopt;
}

EvalResult hyp2f1_euler(Rep variant, Complex a, Complex b, Complex c, Complex z, double tol) {
  require_finite(z, "z");
  if (on_real_ray(z, 1.0, true)) throw DomainError("z on the cut [1, inf)");
  WeightedIntegrand1D f;
  Complex pref = 1.0;
  Complex power = 0.0;
  switch (variant) {
    case Rep::E2_2:
    case Rep::E2_3:
      positive(b, "b");
      positive(c - b, "c-b");
      pref = beta_prefactor(b, c - b);
      break;
    case Rep::E2_4:
    case Rep::E2_5:
      positive(a, "a");
      positive(c - a, "c-a");
      pref = beta_prefactor(a, c - a);
      break;
    default:
      throw ConstraintError("not a 2F1 Euler representation: " + std::string(rep_name(variant)));
  }
  switch (variant) {
    case Rep::E2_2:
      f.alpha = b - 1.0;
      f.beta = c - b - 1.0;
      power = -a;
      break;
    case Rep::E2_3:
      f.alpha = c - b - 1.0;
      f.beta = b - 1.0;
      power = a - c;
      pref *= principal_pow(1.0 - z, c - a - b);
      break;
    case Rep::E2_4:
      f.alpha = a - 1.0;
      f.beta = c - a - 1.0;
      power = -b;
      break;
    default:
      f.alpha = c - a - 1.0;
      f.beta = a - 1.0;
      power = b - c;
      pref *= principal_pow(1.0 - z, c - a - b);
      break;
  }
  f.smooth = [=](double t, double) { return principal_pow(1.0 - z * t, power); };
  return scaled(integrate_weighted_01(f, tol), pref, 0.0);
}

MoebiusResult hyp2f1_moebius(MoebiusKind kind, double p, Complex a, Complex b, Complex c, Complex z, double tol) {
  if (!(p > 0.0)) throw ConstraintError("Moebius parameter p must be positive");
  require_finite(z, "z");
  if (on_real_ray(z, 1.0, true)) throw DomainError("z on the cut [1, inf)");
  positive(b, "b");
  positive(c - b, "c-b");
  const Complex g = beta_prefactor(b, c - b);
  MoebiusResult out;
  WeightedIntegrand1D f;
  if (kind == MoebiusKind::phi) {
    const double s = (p - 1.0) / p;
    const Complex w = (z + p - 1.0) / p;
    f.alpha = b - 1.0;
    f.beta = c - b - 1.0;
    f.smooth = [=](double t, double) {
      return principal_pow(1.0 - s * t, a - c) * principal_pow(1.0 - w * t, -a);
    };
    const Complex pref = std::pow(p, -b);
    out.integral = scaled(integrate_weighted_01(f, tol), pref * g, 0.0);
    if (std::abs(s) < 1.0 && std::abs(w) < 1.0)
      out.reduction = scaled(appell_f1(b, c - a, a, c, s, w), pref, 0.0);
  } else {
    const double s = 1.0 - p;
    const Complex w = (1.0 - p - z) / (1.0 - z);
    f.alpha = c - b - 1.0;
    f.beta = b - 1.0;
    f.smooth = [=](double t, double) {
      return principal_pow(1.0 - s * t, a - c) * principal_pow(1.0 - w * t, -a);
    };
    const Complex pref = std::pow(p, c - b) * principal_pow(1.0 - z, -a);
    out.integral = scaled(integrate_weighted_01(f, tol), pref * g, 0.0);
    if (std::abs(s) < 1.0 && std::abs(w) < 1.0)
      out.reduction = scaled(appell_f1(c - b, c - a, a, c, s, w), pref, 0.0);
  }
  return out;
}

EvalResult h2_integral(Rep form, const H2Params& p, Complex x, Complex y, double tol) {
  require_finite(x, "x");
  require_finite(y, "y");
  positive(p.b, "b");
  positive(p.e - p.b, "e-b");
  const bool dbl = form == Rep::H3_5 || form == Rep::H3_8;
  if (dbl) {
    positive(p.c, "c");
    positive(1.0 - p.a - p.c, "1-a-c");
  }
  const bool transformed = form == Rep::H3_7 || form == Rep::H3_8;
  if (!transformed && form != Rep::H3_3 && form != Rep::H3_5)
    throw ConstraintError("not an H2 integral representation: " + std::string(rep_name(form)));
  if (transformed ? !in_h2_transformed_region(x, y) : !in_h2_single_region(x, y))
    throw DomainError("point outside the continuation region of " + std::string(rep_name(form)));

  Complex pref = beta_prefactor(p.b, p.e - p.b);
  if (transformed) pref *= principal_pow(1.0 - x, p.e - p.a - p.b);
  // exponents of u and 1-u
  const Complex au = transformed ? p.e - p.b - 1.0 : p.b - 1.0;
  const Complex bu = transformed ? p.b - 1.0 : p.e - p.b - 1.0;
  const Complex xpow = transformed ? p.a - p.e : -p.a;
  // argument of the inner 2F1 (or the v-line slope) at a given u
  auto inner_arg = [=](double u) {
    const Complex q = 1.0 - x * u;
    return transformed ? y * (x - 1.0) / q : -y * q;
  };

  if (!dbl) {
    Hyp2f1 inner(p.d, p.c, 1.0 - p.a);
    NodeError ne;
    WeightedIntegrand1D f{[&](double u, double) {
                            return principal_pow(1.0 - x * u, xpow) * ne.track(inner(inner_arg(u), 1e-15));
                          },
                          au, bu};
    EvalResult r = integrate_weighted_01(f, tol);
    return scaled(r, pref, ne.worst);
  }
  pref *= gamma(1.0 - p.a) * rgamma(p.c) * rgamma(1.0 - p.a - p.c);
  WeightedIntegrand2D f;
  f.alpha_u = au;
  f.beta_u = bu;
  f.alpha_v = p.c - 1.0;
  f.beta_v = -p.a - p.c;
  f.u_factor = [=](double u, double) { return principal_pow(1.0 - x * u, xpow); };
  f.core = [=](double u, double, double v, double) { return principal_pow(1.0 - inner_arg(u) * v, -p.d); };
  return scaled(integrate_unit_square(f, tol), pref, 0.0);
}

EvalResult fp_value(const FPParams& p, Complex x, Complex y, double tol) {
  if (fp_rate_x_1my(x, y) < 0.85 || fp_rate_xy_ym1y(x, y) < 0.85) return fp_series(p, x, y, tol);
  return fp_series_form(FPForm::single_1my, p, x, y, tol);
}

EvalResult fp_integral(Rep form, const FPParams& p, Complex x, Complex y, double tol) {
  check_fp_common(p, x, y);
  const Complex g = p.a + p.b2 - p.c2 + 1.0;
  switch (form) {
    case Rep::FP4_6: {
      check_fp46(p);
      const Complex pref = gamma(g) * gamma(p.c1) * rgamma(p.a) * rgamma(p.a - p.c2 + 1.0) *
                           rgamma(p.b2 - p.c2 + 1.0) * rgamma(p.c1 + p.c2 - p.a - 1.0) * principal_pow(y, -p.b2);
      return scaled(fp46_square(p, x, y, tol), pref, 0.0);
    }
    case Rep::FP_eq32: {
      positive(p.a, "a");
      positive(p.a - p.c2 + 1.0, "a-c2+1");
      positive(p.b2 + p.c1 - p.a, "b2+c1-a");
      const Complex pref = gamma(p.c1) * gamma(g) * rgamma(p.a) * rgamma(p.a - p.c2 + 1.0) *
                           rgamma(p.b2 + p.c1 - p.a) * principal_pow(y, -p.b2);
      Hyp2f1 inner(p.b2, p.b2 - p.c2 + 1.0, p.b2 + p.c1 - p.a);
      const Complex alpha = min_re(p.a - 1.0, p.a - p.c2);
      const Complex iy = 1.0 / y;
      NodeError ne;
      WeightedIntegrand1D f{[&](double u, double omu) {
                              Complex w = -omu / u * iy;
                              return std::exp((p.a - p.b2 - 1.0 - alpha) * std::log(u)) *
                                     principal_pow(1.0 - x * u, -p.b1) * ne.track(inner(w, 1e-15));
                            },
                            alpha, p.b2 + p.c1 - p.a - 1.0};
      return scaled(integrate_weighted_01(f, tol), pref, ne.worst);
    }
    case Rep::FP4_7: {
      check_fp46(p);
      if (!(std::abs(x) < 1.0)) throw DomainError("F1 integrand is evaluated for |x| < 1 only");
      const Complex pref = gamma(g) * gamma(p.c1) * gamma(p.b2 + p.c1 - p.a) * rgamma(p.b2 + p.c1) *
                           rgamma(p.a - p.c2 + 1.0) * rgamma(p.b2 - p.c2 + 1.0) *
                           rgamma(p.c1 + p.c2 - p.a - 1.0);
      NodeError ne;
      WeightedIntegrand1D f{[&](double v, double) {
                              Complex w = 1.0 - y / v;
                              return std::exp(-p.b2 * std::log(v)) *
                                     ne.track(appell_f1_continued(p.a, p.b1, p.b2, p.b2 + p.c1, x, w, 1e-15));
                            },
                            p.b2 - p.c2, p.c1 + p.c2 - p.a - 2.0};
      return scaled(integrate_weighted_01(f, tol), pref, ne.worst);
    }
    case Rep::FP4_7a: {
      check_fp46(p);
      if (!(y.real() > 0.5)) throw NoConvergence("product series needs Re y > 1/2");
      const Complex pref = gamma(p.c1) * gamma(g) * rgamma(p.a - p.c2 + 1.0) * rgamma(p.b2 + p.c1) *
                           principal_pow(y, -p.b2);
      const Complex beta = p.b2 - p.c2 + 1.0, gam = p.b2 + p.c1 - p.a;
      const Complex iy = 1.0 / y;
      std::vector<Complex> terms, partial;
      Complex coef = 1.0, sum = 0.0;
      double node_err = 0.0;
      detail::SeriesTail tail;
      // Terms decay only algebraically in general; past this count the
      // partial sums are extrapolated instead.
      constexpr int kTerms = 90;
      for (int i = 0; i < kTerms; ++i) {
        EvalResult fx = hyp2f1(p.a, p.b1, p.b2 + p.c1 + double(i), x, 1e-16);
        Complex t = coef * fx.value * terminating_2f1(i, beta, gam, iy);
        node_err += std::abs(coef) * fx.err_estimate;
        terms.push_back(t);
        sum += t;
        partial.push_back(sum);
        if (tail.push(std::abs(t), std::abs(sum), tol)) {
          double err = tail.bound() + node_err + 64.0 * kEps * std::abs(sum);
          return {pref * sum, std::abs(pref) * err, Method::series, i + 1};
        }
        coef *= (p.b2 + double(i)) * (gam + double(i)) / ((p.b2 + p.c1 + double(i)) * (i + 1.0));
      }
      // Levin u estimates on a small (start, order) grid; keep the one whose
      // neighbours in both directions agree best.
      constexpr int kStarts[] = {10, 15, 20, 25, 30, 40, 50, 60, 70};
      constexpr int kMinOrder = 2, kMaxOrder = 9;
      auto est = [&](int n, int k) { return levin_u(partial, terms, n, k); };
      double best_score = INFINITY;
      Complex best = 0.0;
      for (int si = 0; si + 1 < int(std::size(kStarts)); ++si) {
        const int n = kStarts[si];
        for (int k = kMinOrder + 1; k < kMaxOrder; ++k) {
          auto e0 = est(n, k - 1), e1 = est(n, k), e2 = est(n, k + 1), e3 = est(kStarts[si + 1], k);
          if (!e0 || !e1 || !e2 || !e3) continue;
          double score = std::max({std::abs(*e1 - *e0), std::abs(*e2 - *e1), std::abs(*e3 - *e1)});
          if (score < best_score) {
            best_score = score;
            best = *e1;
          }
        }
      }
      if (!std::isfinite(best_score)) throw NoConvergence("product series: extrapolation failed");
      double err = best_score + node_err + 64.0 * kEps * std::abs(best);
      return {pref * best, std::abs(pref) * err, Method::series, kTerms};
    }
    default:
      throw ConstraintError("not an F_P integral representation: " + std::string(rep_name(form)));
  }
}

EvalResult h2_rewrite(Rep form, const H2Params& p, Complex x, Complex y, double tol) {
  x_off_cut(x);
  require_finite(y, "y");
  if (on_real_ray(y, 0.0, true)) throw DomainError("y on the cut [0, inf)");
  positive(p.a, "a");
  positive(p.d, "d");
  positive(p.a + p.c, "a+c");
  positive(p.a + p.d, "a+d");
  positive(p.e - p.a - p.d, "e-a-d");
  if (form != Rep::C4_8 && form != Rep::C4_8a && form != Rep::C4_8b)
    throw ConstraintError("not a rewritten double integral: " + std::string(rep_name(form)));
  const Complex pref = gamma(p.e) * rgamma(p.e - p.a - p.d) * rgamma(p.a) * rgamma(p.d);
  const Complex a = p.a, b = p.b, c = p.c, d = p.d, e = p.e;

  // All three forms share the unit-square weights below in (u, s).
  WeightedIntegrand2D f;
  f.alpha_u = min_re(a - 1.0, a + c - 1.0);
  f.beta_u = e - a - 1.0;
  f.alpha_v = d - 1.0;
  f.beta_v = e - a - d - 1.0;
  const Complex au = f.alpha_u;
  f.u_factor = [=](double u, double) { return principal_pow(1.0 - u * x, -b); };

  switch (form) {
    case Rep::C4_8:
      // 1 - (1-u) v y / u, with u^{-c} folded in when Re c < 0
      f.core = [=](double u, double omu, double v, double) {
        if (au == a - 1.0) return principal_pow(1.0 - omu / u * v * y, -c);
        return principal_pow(u - omu * v * y, -c);
      };
      break;
    case Rep::C4_8a:
      // v = (1/u - 1) s over 0 < v < 1/u - 1; 1 - u - u v = (1-u)(1-s)
      f.core = [=](double u, double omu, double s, double oms) {
        const double v = omu / u * s;
        Complex lg = (a + d - 1.0 - au) * std::log(u) + (d - 1.0) * std::log(v) - (d - 1.0) * std::log(s) +
                     std::log(omu / u) + (e - a - d - 1.0) * std::log(omu) - (e - a - 1.0) * std::log(omu) -
                     c * std::log(Complex(1.0) - v * y);
        (void)oms;
        return std::exp(lg);
      };
      break;
    default:
      // v = (1-u) s over the triangle; 1 - u - v = (1-u)(1-s)
      f.core = [=](double u, double omu, double s, double oms) {
        const double v = omu * s;
        Complex lg = (a - 1.0 - au) * std::log(u) + (d - 1.0) * std::log(v) - (d - 1.0) * std::log(s) +
                     std::log(omu) + (e - a - d - 1.0) * std::log(omu) - (e - a - 1.0) * std::log(omu) -
                     c * std::log(Complex(1.0) - v * y / u);
        (void)oms;
        return std::exp(lg);
      };
      break;
  }
  return scaled(integrate_unit_square(f, tol), pref, 0.0);
}

EvalResult h2_rewrite_fp_side(const H2Params& p, Complex x, Complex y, double tol) {
  if (on_real_ray(y, 0.0, true)) throw DomainError("y on the cut [0, inf)");
  const Complex pref = gamma(p.a + p.c) * gamma(p.a + p.d) * rgamma(p.a + p.c + p.d) * rgamma(p.a) *
                       principal_pow(-y, -p.c);
  FPParams q{p.a + p.c, p.b, p.c, p.e, p.c - p.d + 1.0};
  EvalResult r = fp_value(q, x, -1.0 / y, tol);
  return scaled(r, pref, 0.0);
}

}  // namespace hypint
