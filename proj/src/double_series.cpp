#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hypint/errors.hpp"
#include "hypint/series.hpp"
#include "series_detail.hpp"

namespace hypint {

namespace {

using detail::Scaled;

// Terms G[i+j] A[i] B[j] D[i-j], each factor given by its step ratio.
// D is the two-sided Pochhammer (d)_k when has_d is set.
struct WavefrontSeries {
  std::function<Complex(int)> g_ratio;  // G[k+1] / G[k]
  std::function<Complex(int)> a_ratio;  // A[i+1] / A[i]
  std::function<Complex(int)> b_ratio;  // B[j+1] / B[j]
  bool has_d = false;
  Complex d = 0.0;
};

EvalResult sum_wavefronts(const WavefrontSeries& s, double tol, const SeriesOptions& opts) {
  std::vector<Scaled> G{Scaled{}}, A{Scaled{}}, B{Scaled{}}, Dpos{Scaled{}}, Dneg{Scaled{}};
  Complex sum = 0.0;
  double abs_sum = 0.0;
  detail::SeriesTail tail;
  std::int64_t terms = 0;
  const int nmax = std::max(opts.max_wavefronts, opts.min_wavefronts + 1);
  for (int N = 0; N < nmax; ++N) {
    if (N > 0) {
      Scaled g = G.back(), a = A.back(), b = B.back();
      g *= s.g_ratio ? s.g_ratio(N - 1) : Complex(1.0);
      a *= s.a_ratio(N - 1);
      b *= s.b_ratio(N - 1);
      G.push_back(g);
      A.push_back(a);
      B.push_back(b);
      if (s.has_d) {
        Scaled dp = Dpos.back();
        dp *= s.d + static_cast<double>(N - 1);
        Dpos.push_back(dp);
        // (d)_{-N} = (d)_{-N+1} / (d - N)
        Complex den = s.d - static_cast<double>(N);
        if (std::abs(den) < 1e-12) throw PoleError("negative Pochhammer shift hits a pole");
        Scaled dn = Dneg.back();
        dn *= 1.0 / den;
        Dneg.push_back(dn);
      }
    }
    Complex front = 0.0;
    double front_abs = 0.0;
    const Scaled& g = G[N];
    for (int i = 0; i <= N; ++i) {
      const int j = N - i;
      Complex m = g.m * A[i].m * B[j].m;
      int e = g.e + A[i].e + B[j].e;
      if (s.has_d) {
        const Scaled& d = (i >= j) ? Dpos[i - j] : Dneg[j - i];
        m *= d.m;
        e += d.e;
      }
      Complex t(std::ldexp(m.real(), e), std::ldexp(m.imag(), e));
      front += t;
      front_abs += detail::mag1(t);
    }
    terms += N + 1;
    sum += front;
    abs_sum += front_abs;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
      throw NoConvergence("double series overflowed");
    bool done = tail.push(front_abs, std::abs(sum), tol);
    if (done && N + 1 >= opts.min_wavefronts) {
      return {sum, tail.bound() + 4.0 * kEps * abs_sum, Method::series, terms};
    }
  }
  throw NoConvergence("double series did not converge within " + std::to_string(nmax) + " wavefronts");
}

void check_lower(Complex c, const char* what) {
  if (near_nonpositive_integer(c)) throw PoleError(std::string(what) + " is a nonpositive integer");
}

}  // namespace

EvalResult appell_f1(Complex a, Complex b1, Complex b2, Complex c, Complex x, Complex y, double tol,
                     const SeriesOptions& opts) {
  check_lower(c, "F1 parameter c");
  if (!(std::abs(x) < 1.0 && std::abs(y) < 1.0)) throw DomainError("F1 series needs |x| < 1 and |y| < 1");
  WavefrontSeries s;
  s.g_ratio = [=](int k) { return (a + double(k)) / (c + double(k)); };
  s.a_ratio = [=](int i) { return (b1 + double(i)) / (i + 1.0) * x; };
  s.b_ratio = [=](int j) { return (b2 + double(j)) / (j + 1.0) * y; };
  return sum_wavefronts(s, tol, opts);
}

EvalResult appell_f1_continued(Complex a, Complex b1, Complex b2, Complex c, Complex x, Complex y,
                               double tol) {
  check_lower(c, "F1 parameter c");
  if (!(std::abs(x) < 1.0)) throw DomainError("F1 continuation needs |x| < 1");
  Complex coef = 1.0, sum = 0.0;
  double err = 0.0, abs_sum = 0.0;
  detail::SeriesTail tail;
  std::int64_t work = 0;
  for (int i = 0; i < 5000; ++i) {
    EvalResult f = hyp2f1(a + double(i), b2, c + double(i), y, 1e-15);
    Complex t = coef * f.value;
    sum += t;
    err += std::abs(coef) * f.err_estimate;
    abs_sum += std::abs(t);
    work += f.terms_or_nodes;
    if (tail.push(std::abs(t), std::abs(sum), tol))
      return {sum, err + tail.bound() + 4.0 * kEps * abs_sum, Method::series, work};
    coef *= (a + double(i)) * (b1 + double(i)) / ((c + double(i)) * (i + 1.0)) * x;
  }
  throw NoConvergence("F1 continuation series did not converge");
}

EvalResult appell_f2(Complex a, Complex b1, Complex b2, Complex c1, Complex c2, Complex x, Complex y,
                     double tol, const SeriesOptions& opts) {
  check_lower(c1, "F2 parameter c1");
  check_lower(c2, "F2 parameter c2");
  if (!(std::abs(x) + std::abs(y) < 1.0)) throw DomainError("F2 series needs |x| + |y| < 1");
  WavefrontSeries s;
  s.g_ratio = [=](int k) { return a + double(k); };
  s.a_ratio = [=](int i) { return (b1 + double(i)) / ((c1 + double(i)) * (i + 1.0)) * x; };
  s.b_ratio = [=](int j) { return (b2 + double(j)) / ((c2 + double(j)) * (j + 1.0)) * y; };
  return sum_wavefronts(s, tol, opts);
}

EvalResult appell_f3(Complex a1, Complex a2, Complex b1, Complex b2, Complex c, Complex x, Complex y,
                     double tol, const SeriesOptions& opts) {
  check_lower(c, "F3 parameter c");
  if (!(std::abs(x) < 1.0 && std::abs(y) < 1.0)) throw DomainError("F3 series needs |x| < 1 and |y| < 1");
  WavefrontSeries s;
  s.g_ratio = [=](int k) { return 1.0 / (c + double(k)); };
  s.a_ratio = [=](int i) { return (a1 + double(i)) * (b1 + double(i)) / (i + 1.0) * x; };
  s.b_ratio = [=](int j) { return (a2 + double(j)) * (b2 + double(j)) / (j + 1.0) * y; };
  return sum_wavefronts(s, tol, opts);
}

EvalResult h2_series(const H2Params& p, Complex x, Complex y, double tol, const SeriesOptions& opts) {
  check_lower(p.e, "H2 parameter e");
  if (!region_contains(Region::Omega1, x, y)) throw DomainError("H2 series: point outside Omega1");
  WavefrontSeries s;
  s.a_ratio = [=](int i) { return (p.b + double(i)) / ((p.e + double(i)) * (i + 1.0)) * x; };
  s.b_ratio = [=](int j) { return (p.c + double(j)) * (p.d + double(j)) / (j + 1.0) * y; };
  s.has_d = true;
  s.d = p.a;
  return sum_wavefronts(s, tol, opts);
}

EvalResult h2_single_sum(const H2Params& p, Complex x, Complex y, double tol, const SeriesOptions& opts) {
  check_lower(p.e, "H2 parameter e");
  if (!region_contains(Region::Omega1, x, y)) throw DomainError("H2 series: point outside Omega1");
  Complex coef = 1.0, sum = 0.0;
  double err = 0.0, abs_sum = 0.0;
  detail::SeriesTail tail;
  std::int64_t work = 0;
  const int nmax = std::max(opts.max_wavefronts, opts.min_wavefronts + 1);
  for (int j = 0; j < nmax; ++j) {
    EvalResult f = hyp2f1(p.a - double(j), p.b, p.e, x, 1e-16);
    Complex t = coef * f.value;
    sum += t;
    err += std::abs(coef) * f.err_estimate;
    abs_sum += std::abs(t);
    work += f.terms_or_nodes;
    if (tail.push(std::abs(t), std::abs(sum), tol) && j + 1 >= opts.min_wavefronts)
      return {sum, err + tail.bound() + 4.0 * kEps * abs_sum, Method::series, work};
    Complex den = (1.0 - p.a + double(j)) * (j + 1.0);
    if (std::abs(den) < 1e-12) throw PoleError("H2 single sum: 1-a is a nonpositive integer");
    coef *= (p.c + double(j)) * (p.d + double(j)) / den * (-y);
  }
  throw NoConvergence("H2 single sum did not converge");
}

std::string_view fp_form_name(FPForm f) {
  switch (f) {
    case FPForm::double_x_1my: return "double-x-1my";
    case FPForm::single_1my: return "single-1my";
    case FPForm::single_ym1_y: return "single-ym1y";
    case FPForm::double_xy_ym1y: return "double-xy-ym1y";
    case FPForm::single_3f2: return "single-3f2";
  }
  return "unknown";
}

double fp_rate_x_1my(Complex x, Complex y) { return std::max(std::abs(x), std::abs(1.0 - y)); }

double fp_rate_xy_ym1y(Complex x, Complex y) {
  if (y == 0.0) return INFINITY;
  return std::abs(x / y) + std::abs(1.0 - 1.0 / y);
}

namespace {

void check_fp(const FPParams& p) {
  check_lower(p.c1, "F_P parameter c1");
  check_lower(p.a + p.b2 - p.c2 + 1.0, "F_P parameter a+b2-c2+1");
}

// Outer single sum with inner 2F1 or 3F2 values.
template <class Inner>
EvalResult outer_sum(Complex x0, Complex prefactor, const std::function<Complex(int)>& ratio,
                     Inner inner, double tol, const SeriesOptions& opts) {
  Complex coef = 1.0, sum = 0.0;
  double err = 0.0, abs_sum = 0.0;
  detail::SeriesTail tail;
  std::int64_t work = 0;
  const int nmax = std::max(opts.max_wavefronts, opts.min_wavefronts + 1);
  for (int i = 0; i < nmax; ++i) {
    EvalResult f = inner(i);
    Complex t = coef * f.value;
    sum += t;
    err += std::abs(coef) * f.err_estimate;
    abs_sum += std::abs(t);
    work += f.terms_or_nodes;
    if (tail.push(std::abs(t), std::abs(sum), tol) && i + 1 >= opts.min_wavefronts) {
      double pm = std::abs(prefactor);
      return {prefactor * sum, pm * (err + tail.bound() + 4.0 * kEps * abs_sum), Method::series, work};
    }
    coef *= ratio(i) * x0;
  }
  throw NoConvergence("F_P single-sum form did not converge");
}

}  // namespace

EvalResult fp_series_form(FPForm form, const FPParams& p, Complex x, Complex y, double tol,
                          const SeriesOptions& opts) {
  check_fp(p);
  const Complex g = p.a + p.b2 - p.c2 + 1.0;
  const Complex a2 = p.a - p.c2 + 1.0;
  auto outer_ratio = [=](int i) {
    double di = i;
    return (p.a + di) * (a2 + di) * (p.b1 + di) / ((p.c1 + di) * (g + di) * (di + 1.0));
  };
  switch (form) {
    case FPForm::double_x_1my: {
      if (!region_contains(Region::FP41, x, y)) throw DomainError("F_P: point outside |x|<1, |1-y|<1");
      WavefrontSeries s;
      s.g_ratio = [=](int k) { return (p.a + double(k)) / (g + double(k)); };
      s.a_ratio = [=](int i) {
        return (a2 + double(i)) * (p.b1 + double(i)) / ((p.c1 + double(i)) * (i + 1.0)) * x;
      };
      s.b_ratio = [=](int j) { return (p.b2 + double(j)) / (j + 1.0) * (1.0 - y); };
      return sum_wavefronts(s, tol, opts);
    }
    case FPForm::double_xy_ym1y: {
      if (!region_contains(Region::FP44, x, y))
        throw DomainError("F_P: point outside |x/y| + |1-1/y| < 1");
      WavefrontSeries s;
      s.g_ratio = [=](int k) { return (p.a + double(k)) * (a2 + double(k)) / (g + double(k)); };
      s.a_ratio = [=](int i) { return (p.b1 + double(i)) / ((p.c1 + double(i)) * (i + 1.0)) * (x / y); };
      s.b_ratio = [=](int j) { return 1.0 / (j + 1.0) * ((y - 1.0) / y); };
      EvalResult r = sum_wavefronts(s, tol, opts);
      Complex f = principal_pow(y, -p.a);
      return {f * r.value, std::abs(f) * r.err_estimate, Method::series, r.terms_or_nodes};
    }
    case FPForm::single_1my: {
      if (!(std::abs(x) < 1.0)) throw DomainError("F_P single sum needs |x| < 1");
      if (y.imag() == 0.0 && y.real() <= 0.0) throw DomainError("F_P: y on the cut (-inf, 0]");
      return outer_sum(
          x, 1.0, outer_ratio,
          [&](int i) { return hyp2f1(p.a + double(i), p.b2, g + double(i), 1.0 - y, 1e-16); }, tol, opts);
    }
    case FPForm::single_ym1_y: {
      if (y.imag() == 0.0 && y.real() <= 0.0) throw DomainError("F_P: y on the cut (-inf, 0]");
      if (!(std::abs(x / y) < 1.0)) throw DomainError("F_P single sum needs |x/y| < 1");
      Complex w = (y - 1.0) / y;
      return outer_sum(
          x / y, principal_pow(y, -p.a), outer_ratio,
          [&](int i) { return hyp2f1(p.a + double(i), a2 + double(i), g + double(i), w, 1e-16); }, tol,
          opts);
    }
    case FPForm::single_3f2: {
      if (!region_contains(Region::FP41, x, y)) throw DomainError("F_P: point outside |x|<1, |1-y|<1");
      auto ratio = [=](int i) {
        double di = i;
        return (p.a + di) * (p.b2 + di) / ((g + di) * (di + 1.0));
      };
      return outer_sum(
          1.0 - y, 1.0, ratio,
          [&](int i) {
            return hyp_pfq({p.a + double(i), p.b1, a2}, {p.c1, g + double(i)}, x, 1e-16);
          },
          tol, opts);
    }
  }
  throw DomainError("unknown F_P form");
}

EvalResult fp_series(const FPParams& p, Complex x, Complex y, double tol, const SeriesOptions& opts) {
  check_fp(p);
  bool in41 = region_contains(Region::FP41, x, y);
  bool in44 = region_contains(Region::FP44, x, y);
  if (!in41 && !in44) throw DomainError("F_P series: point outside both convergence regions");
  if (in41 && !in44) return fp_series_form(FPForm::double_x_1my, p, x, y, tol, opts);
  if (in44 && !in41) return fp_series_form(FPForm::double_xy_ym1y, p, x, y, tol, opts);
  EvalResult r1, r2;
  bool ok1 = true, ok2 = true;
  try {
    r1 = fp_series_form(FPForm::double_x_1my, p, x, y, tol, opts);
  } catch (const NoConvergence&) {
    ok1 = false;
  }
  try {
    r2 = fp_series_form(FPForm::double_xy_ym1y, p, x, y, tol, opts);
  } catch (const NoConvergence&) {
    if (!ok1) throw;
    ok2 = false;
  }
  if (!ok1) return r2;
  if (!ok2) return r1;
  EvalResult best = fp_rate_x_1my(x, y) <= fp_rate_xy_ym1y(x, y) ? r1 : r2;
  best.err_estimate = std::max({r1.err_estimate, r2.err_estimate, std::abs(r1.value - r2.value)});
  best.terms_or_nodes = r1.terms_or_nodes + r2.terms_or_nodes;
  return best;
}

}  // namespace hypint
