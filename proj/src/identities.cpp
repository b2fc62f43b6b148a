#include "hypint/identities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <tuple>

#include "hypint/contour.hpp"
#include "hypint/errors.hpp"
#include "hypint/euler.hpp"
#include "hypint/quadrature.hpp"
#include "hypint/series.hpp"
#include "eval_detail.hpp"

namespace hypint {

double Sampler::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

Complex Sampler::param(double lo, double hi) {
  double re = uniform(lo + 0.1, hi - 0.1);
  return {re, uniform(-0.3, 0.3)};
}

Complex Sampler::disk(Complex center, double radius) {
  double r = radius * std::sqrt(uniform(0.0, 1.0));
  return center + std::polar(r, uniform(-kPi, kPi));
}

namespace {

using detail::min_re;
using detail::NodeError;
using detail::scaled;

using Sides = std::pair<EvalResult, EvalResult>;
using Draw = std::optional<IdentityPoint>;

// Integer differences closer than this are redrawn.
constexpr double kDegenerateGap = 1e-3;

bool near_int(Complex z) { return integer_distance(z) < kDegenerateGap; }
bool near_pole(Complex z) { return near_int(z) && z.real() < 0.5; }
// (a)_{m-n} in H2 needs 1 - a off the non-positive integers.
bool h2_bad_a(Complex a) { return near_int(a) && a.real() > 0.5; }

Complex cpow(Complex z, Complex e) { return principal_pow(z, e); }

EvalResult times(const EvalResult& r, Complex pref) { return scaled(r, pref, 0.0); }

EvalResult closed(Complex v, double rel_err = 64.0 * kEps) {
  return {v, rel_err * std::abs(v), Method::closed_form, 0};
}

// z in the strip Re z < 0.9, |Im z| < 1: off the cut of 2F1.
Complex gauss_argument(Sampler& s) { return {s.uniform(-3.0, 0.9), s.uniform(-1.0, 1.0)}; }

H2Params h2_of(const IdentityPoint& p) { return {p.params[0], p.params[1], p.params[2], p.params[3], p.params[4]}; }
FPParams fp_of(const IdentityPoint& p) { return {p.params[0], p.params[1], p.params[2], p.params[3], p.params[4]}; }

// F_P parameters with a, a-b2, b2+c1-a, b2-c2+1, c1+c2-a-1 all of positive
// real part.
FPParams draw_fp_positive(Sampler& s) {
  FPParams p;
  p.a = s.param(0.0, 2.0);
  p.b2 = p.a - s.param(0.0, 1.5);
  const Complex gap = s.param(0.2, 2.5);
  p.c1 = p.a - p.b2 + gap;
  p.c2 = p.a + 1.0 - p.c1 + s.uniform(0.3, 0.7) * gap;
  p.b1 = s.param(-1.5, 1.5);
  return p;
}

IdentityPoint fp_point(const FPParams& p, Complex x, Complex y) { return {{p.a, p.b1, p.b2, p.c1, p.c2}, x, y}; }

std::vector<IdentitySpec> build_registry() {
  std::vector<IdentitySpec> r;
  auto add = [&](std::string id, std::string summary, std::size_t arity, double floor, auto sample, auto sides) {
    r.push_back({std::move(id), std::move(summary), arity, floor, sample, sides});
  };

  add("euler-transform", "2F1(a,b;c;z) = (1-z)^{c-a-b} 2F1(c-a,c-b;c;z)", 3, 1e-9,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-2, 2), b = s.param(-2, 2), c = s.param(-2, 3);
        if (near_pole(c)) return std::nullopt;
        return IdentityPoint{{a, b, c}, gauss_argument(s), 0.0};
      },
      [](const IdentityPoint& p, double) -> Sides {
        auto [a, b, c] = std::tuple(p.params[0], p.params[1], p.params[2]);
        return {hyp2f1(a, b, c, p.x), times(hyp2f1(c - a, c - b, c, p.x), cpow(1.0 - p.x, c - a - b))};
      });

  add("pfaff-transform", "2F1(a,b;c;z) = (1-z)^{-a} 2F1(a,c-b;c;z/(z-1))", 3, 1e-9,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-2, 2), b = s.param(-2, 2), c = s.param(-2, 3);
        if (near_pole(c)) return std::nullopt;
        return IdentityPoint{{a, b, c}, gauss_argument(s), 0.0};
      },
      [](const IdentityPoint& p, double) -> Sides {
        auto [a, b, c] = std::tuple(p.params[0], p.params[1], p.params[2]);
        Complex z = p.x;
        return {hyp2f1(a, b, c, z), times(hyp2f1(a, c - b, c, z / (z - 1.0)), cpow(1.0 - z, -a))};
      });

  // x holds z, y holds the real group parameter p.
  add("phi-reduction", "2F1(a,b;c;z) = p^{-b} F1(b; c-a, a; c; (p-1)/p, (z+p-1)/p)", 3, 1e-9,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-2, 2), b = s.param(-2, 2), c = s.param(-2, 3);
        if (near_pole(c)) return std::nullopt;
        double p = s.uniform(0.6, 2.5);
        Complex w = s.disk(0.0, 0.85);
        return IdentityPoint{{a, b, c}, p * w + 1.0 - p, p};
      },
      [](const IdentityPoint& pt, double) -> Sides {
        auto [a, b, c] = std::tuple(pt.params[0], pt.params[1], pt.params[2]);
        Complex z = pt.x, p = pt.y;
        return {hyp2f1(a, b, c, z), times(appell_f1(b, c - a, a, c, (p - 1.0) / p, (z + p - 1.0) / p), cpow(p, -b))};
      });

  add("psi-reduction", "2F1(a,b;c;z) = p^{c-b} (1-z)^{-a} F1(c-b; c-a, a; c; 1-p, (1-p-z)/(1-z))", 3, 1e-9,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-2, 2), b = s.param(-2, 2), c = s.param(-2, 3);
        if (near_pole(c)) return std::nullopt;
        double p = s.uniform(0.2, 1.8);
        Complex w = s.disk(0.0, 0.85);
        return IdentityPoint{{a, b, c}, (1.0 - p - w) / (1.0 - w), p};
      },
      [](const IdentityPoint& pt, double) -> Sides {
        auto [a, b, c] = std::tuple(pt.params[0], pt.params[1], pt.params[2]);
        Complex z = pt.x, p = pt.y;
        EvalResult f1 = appell_f1(c - b, c - a, a, c, 1.0 - p, (1.0 - p - z) / (1.0 - z));
        return {hyp2f1(a, b, c, z), times(f1, cpow(p, c - b) * cpow(1.0 - z, -a))};
      });

  add("gauss-at-c-equals-a", "2F1(a,b;a;z) = (1-z)^{-b}", 2, 1e-9,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-2, 3), b = s.param(-2, 2);
        if (near_pole(a)) return std::nullopt;
        return IdentityPoint{{a, b}, gauss_argument(s), 0.0};
      },
      [](const IdentityPoint& p, double) -> Sides {
        return {hyp2f1(p.params[0], p.params[1], p.params[0], p.x), closed(cpow(1.0 - p.x, -p.params[1]))};
      });

  add("h2-at-x-zero", "H2(a,b,c,d,e;0,y) = 2F1(c,d;1-a;-y)", 5, 1e-9,
      [](Sampler& s) -> Draw {
        H2Params h{s.param(-2, 2), s.param(-2, 2), s.param(-2, 2), s.param(-2, 2), s.param(-1, 3)};
        if (h2_bad_a(h.a) || near_pole(h.e)) return std::nullopt;
        return IdentityPoint{{h.a, h.b, h.c, h.d, h.e}, 0.0, s.disk(0.0, 0.85)};
      },
      [](const IdentityPoint& p, double) -> Sides {
        H2Params h = h2_of(p);
        return {h2_series(h, 0.0, p.y), hyp2f1(h.c, h.d, 1.0 - h.a, -p.y)};
      });

  add("h2-transform", "H2(a,b,c,d,e;x,y) = (1-x)^{-a} H2(a,e-b,c,d,e;x/(x-1),y(1-x))", 5, 1e-9,
      [](Sampler& s) -> Draw {
        H2Params h{s.param(-2, 2), s.param(-2, 2), s.param(-2, 2), s.param(-2, 2), s.param(-1, 3)};
        if (h2_bad_a(h.a) || near_pole(h.e)) return std::nullopt;
        Complex x = s.disk(0.0, 0.45);
        Complex xt = x / (x - 1.0);
        double r = 0.85 * std::min(1.0 / (1.0 + std::abs(x)), 1.0 / ((1.0 + std::abs(xt)) * std::abs(1.0 - x)));
        return IdentityPoint{{h.a, h.b, h.c, h.d, h.e}, x, s.disk(0.0, r)};
      },
      [](const IdentityPoint& p, double) -> Sides {
        H2Params h = h2_of(p);
        H2Params t{h.a, h.e - h.b, h.c, h.d, h.e};
        EvalResult rhs = h2_series(t, p.x / (p.x - 1.0), p.y * (1.0 - p.x));
        return {h2_series(h, p.x, p.y), times(rhs, cpow(1.0 - p.x, -h.a))};
      });

  add("h2-cd-symmetry", "H2(a,b,c,d,e;x,y) = H2(a,b,d,c,e;x,y)", 5, 1e-9,
      [](Sampler& s) -> Draw {
        H2Params h{s.param(-2, 2), s.param(-2, 2), s.param(-2, 2), s.param(-2, 2), s.param(-1, 3)};
        if (h2_bad_a(h.a) || near_pole(h.e)) return std::nullopt;
        Complex x = s.disk(0.0, 0.7);
        return IdentityPoint{{h.a, h.b, h.c, h.d, h.e}, x, s.disk(0.0, 0.85 / (1.0 + std::abs(x)))};
      },
      [](const IdentityPoint& p, double) -> Sides {
        H2Params h = h2_of(p);
        H2Params sw{h.a, h.b, h.d, h.c, h.e};
        return {h2_series(h, p.x, p.y), h2_single_sum(sw, p.x, p.y)};
      });

  // c1 is fixed to a; the point carries a, b1, b2, c2.
  add("fp-at-x-zero", "F_P(a,b1,b2,a,c2;0,y) = y^{1-c2} 2F1(b2-c2+1,a-c2+1;a+b2-c2+1;1-y)", 4, 1e-9,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-2, 3), b1 = s.param(-2, 2), b2 = s.param(-2, 2), c2 = s.param(-2, 3);
        if (near_pole(a) || near_pole(a + b2 - c2 + 1.0)) return std::nullopt;
        return IdentityPoint{{a, b1, b2, c2}, 0.0, s.disk(1.0, 0.85)};
      },
      [](const IdentityPoint& p, double) -> Sides {
        auto [a, b1, b2, c2] = std::tuple(p.params[0], p.params[1], p.params[2], p.params[3]);
        EvalResult lhs = fp_value({a, b1, b2, a, c2}, 0.0, p.y);
        EvalResult g = hyp2f1(b2 - c2 + 1.0, a - c2 + 1.0, a + b2 - c2 + 1.0, 1.0 - p.y);
        return {lhs, times(g, cpow(p.y, 1.0 - c2))};
      });

  add("fp-f1-integral", "F_P as a single integral over Appell F1", 5, 1e-9,
      [](Sampler& s) -> Draw {
        FPParams q = draw_fp_positive(s);
        if (near_pole(q.c2)) return std::nullopt;
        return fp_point(q, s.disk(0.0, 0.7), Complex(s.uniform(0.3, 2.5), s.uniform(-1.0, 1.0)));
      },
      [](const IdentityPoint& p, double tol) -> Sides {
        return {fp_value(fp_of(p), p.x, p.y), fp_integral(Rep::FP4_7, fp_of(p), p.x, p.y, tol)};
      });

  add("fp-gauss-product-series", "F_P as a series of products of two 2F1", 5, 1e-9,
      [](Sampler& s) -> Draw {
        FPParams q = draw_fp_positive(s);
        if (near_pole(q.c2)) return std::nullopt;
        return fp_point(q, s.disk(0.0, 0.7), Complex(s.uniform(0.75, 2.5), s.uniform(-1.0, 1.0)));
      },
      [](const IdentityPoint& p, double tol) -> Sides {
        return {fp_value(fp_of(p), p.x, p.y), fp_integral(Rep::FP4_7a, fp_of(p), p.x, p.y, tol)};
      });

  auto gauss_loop_draw = [](Sampler& s) -> Draw {
    Complex a = s.param(-1, 1), b = s.param(0, 2);
    Complex c = b + s.param(0, 2);
    if (near_int(b - a) || near_int(c - b) || near_pole(c)) return std::nullopt;
    return IdentityPoint{{a, b, c}, s.uniform(-8.0, -1.5), 0.0};
  };

  add("gauss-loop-shrink", "loop with 1/z grouped with 0 equals the two interval integrals", 3, 1e-7,
      gauss_loop_draw, [](const IdentityPoint& p, double) -> Sides {
        auto [a, b, c] = std::tuple(p.params[0], p.params[1], p.params[2]);
        LoopSpec spec;
        spec.shrink_to_fit = true;
        return {hyp2f1_loop(LoopMode::inside, a, b, c, p.x, spec), hyp2f1_shrunk(a, b, c, p.x)};
      });

  add("gauss-three-term", "interval integrals equal 2F1(z) minus the 1/z connection term", 3, 1e-7, gauss_loop_draw,
      [](const IdentityPoint& p, double) -> Sides {
        auto [a, b, c] = std::tuple(p.params[0], p.params[1], p.params[2]);
        EvalResult f = hyp2f1(a, b, c, p.x);
        EvalResult t = hyp2f1_connection_term(b, a, c, p.x);
        EvalResult rhs{f.value - t.value, f.err_estimate + t.err_estimate, Method::series,
                       f.terms_or_nodes + t.terms_or_nodes};
        return {hyp2f1_shrunk(a, b, c, p.x), rhs};
      });

  add("olsson-three-term", "Olsson loop integral equals the sum of its two shrunk F_P terms", 5, 1e-6,
      [](Sampler& s) -> Draw {
        FPParams q;
        q.a = s.param(0.1, 2.0);
        q.c2 = q.a + 1.0 - s.param(0.0, 1.5);
        q.b2 = s.param(-0.8, 1.2);
        Complex lo = (q.a - q.b2).real() > (q.a + q.b2 - q.c2).real() ? q.a - q.b2 : q.a + q.b2 - q.c2;
        q.c1 = lo + s.param(0.0, 1.5);
        q.b1 = s.param(-1.0, 1.0);
        if (near_int(q.a - q.b2) || near_int(q.c1 - q.a + q.b2) || near_pole(q.b2 - q.a + 1.0) ||
            near_pole(q.c1) || near_pole(q.c2) || near_pole(q.c1 + q.c2 - q.a - q.b2))
          return std::nullopt;
        double x = s.uniform(-0.85, -0.05);
        double y = s.uniform(1.0 - x + 0.1, 3.5);
        return fp_point(q, x, y);
      },
      [](const IdentityPoint& p, double) -> Sides {
        FPParams q = fp_of(p);
        LoopSpec spec;
        spec.shrink_to_fit = true;
        EvalResult loop = olsson_I(q, p.x, p.y, spec);
        ShrinkParts sp = shrink_case1(q, p.x, p.y);
        EvalResult sum{sp.i1_closed.value + sp.i2_closed.value, sp.i1_closed.err_estimate + sp.i2_closed.err_estimate,
                       Method::closed_form, 0};
        return {loop, sum};
      });

  add("f2-double-integral", "Appell F2 over the unit square", 5, 1e-6,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-1.5, 1.5), b1 = s.param(0, 2), b2 = s.param(0, 2);
        Complex c1 = b1 + s.param(0, 2), c2 = b2 + s.param(0, 2);
        double x = s.uniform(0.05, 0.8);
        return IdentityPoint{{a, b1, b2, c1, c2}, x, s.uniform(0.05, 0.9 - x)};
      },
      [](const IdentityPoint& p, double tol) -> Sides {
        auto [a, b1, b2, c1, c2] = std::tuple(p.params[0], p.params[1], p.params[2], p.params[3], p.params[4]);
        const double x = p.x.real(), y = p.y.real();
        WeightedIntegrand2D f;
        f.alpha_u = b1 - 1.0;
        f.beta_u = c1 - b1 - 1.0;
        f.alpha_v = b2 - 1.0;
        f.beta_v = c2 - b2 - 1.0;
        f.core = [=](double u, double, double v, double) { return std::pow(Complex(1.0 - x * u - y * v), -a); };
        Complex k = gamma(c1) * gamma(c2) * rgamma(b1) * rgamma(b2) * rgamma(c1 - b1) * rgamma(c2 - b2);
        return {appell_f2(a, b1, b2, c1, c2, x, y), times(integrate_unit_square(f, std::max(tol, 1e-9)), k)};
      });

  add("f3-double-integral", "x^{-b1} y^{-b2} F3 at (1/x, 1/y) over the triangle", 5, 1e-6,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-1.5, 1.0), b1 = s.param(0, 2), b2 = s.param(0, 2);
        Complex c1 = s.param(-1, 2), c2 = s.param(-1, 2);
        if (near_pole(b1 + b2 - a + 1.0)) return std::nullopt;
        return IdentityPoint{{a, b1, b2, c1, c2}, s.uniform(1.5, 4.0), s.uniform(1.5, 4.0)};
      },
      [](const IdentityPoint& p, double tol) -> Sides {
        auto [a, b1, b2, c1, c2] = std::tuple(p.params[0], p.params[1], p.params[2], p.params[3], p.params[4]);
        const double x = p.x.real(), y = p.y.real();
        EvalResult f3 = appell_f3(b1, b2, 1.0 + b1 - c1, 1.0 + b2 - c2, b1 + b2 - a + 1.0, 1.0 / x, 1.0 / y);
        // u = (1-t) s, v = t
        WeightedIntegrand2D f;
        f.alpha_u = b1 - 1.0;
        f.beta_u = -a;
        f.alpha_v = b2 - 1.0;
        f.beta_v = b1 - a;
        f.core = [=](double s, double, double, double omt) {
          return std::pow(Complex(x - omt * s), c1 - b1 - 1.0);
        };
        f.v_factor = [=](double t, double) { return std::pow(Complex(y - t), c2 - b2 - 1.0); };
        Complex k = gamma(b1 + b2 - a + 1.0) * rgamma(b1) * rgamma(b2) * rgamma(1.0 - a) *
                    std::pow(Complex(x), 1.0 - c1) * std::pow(Complex(y), 1.0 - c2);
        return {times(f3, std::pow(Complex(x), -b1) * std::pow(Complex(y), -b2)),
                times(integrate_unit_square(f, std::max(tol, 1e-9)), k)};
      });

  add("h2-double-integral", "y^{-b2} H2(a-b2,b1,b2-c2+1,b2,c1;x,-1/y) over the triangle", 5, 1e-6,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-1.5, 1.0), b1 = s.param(0, 2), b2 = s.param(0, 2);
        Complex c1 = b1 + s.param(0, 2), c2 = s.param(-1, 2);
        if (h2_bad_a(a - b2) || near_pole(c1)) return std::nullopt;
        double x = s.uniform(0.05, 0.85);
        return IdentityPoint{{a, b1, b2, c1, c2}, x, s.uniform(1.2 * (1.0 + x), 4.5)};
      },
      [](const IdentityPoint& p, double tol) -> Sides {
        auto [a, b1, b2, c1, c2] = std::tuple(p.params[0], p.params[1], p.params[2], p.params[3], p.params[4]);
        const double x = p.x.real(), y = p.y.real();
        EvalResult h = h2_series({a - b2, b1, b2 - c2 + 1.0, b2, c1}, x, -1.0 / y);
        // u = x s, v = (1 - x s) t
        WeightedIntegrand2D f;
        f.alpha_u = b1 - 1.0;
        f.beta_u = c1 - b1 - 1.0;
        f.alpha_v = b2 - 1.0;
        f.beta_v = -a;
        f.u_factor = [=](double s, double) { return std::pow(Complex(1.0 - x * s), b2 - a); };
        f.core = [=](double s, double, double t, double) {
          return std::pow(Complex(y - (1.0 - x * s) * t), c2 - b2 - 1.0);
        };
        Complex k = gamma(b2 - a + 1.0) * gamma(c1) * rgamma(1.0 - a) * rgamma(b2) * rgamma(b1) * rgamma(c1 - b1) *
                    std::pow(Complex(y), 1.0 - c2);
        return {times(h, std::pow(Complex(y), -b2)), times(integrate_unit_square(f, std::max(tol, 1e-9)), k)};
      });

  add("fp-double-integral", "F_P with shifted parameters over u in (1, inf) mapped by u -> 1/u", 5, 1e-6,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-1.5, 1.0), b1 = s.param(-1.5, 1.5), b2 = s.param(0, 2);
        Complex d1 = s.param(0, 2);
        Complex c1 = a + 1.0 - d1;
        Complex c2 = d1 + 1.0 - s.param(0, 2);
        if (near_pole(2.0 - c1) || near_pole(2.0 - c2)) return std::nullopt;
        return IdentityPoint{{a, b1, b2, c1, c2}, s.uniform(-0.8, 0.8), s.uniform(0.3, 2.0)};
      },
      [](const IdentityPoint& p, double tol) -> Sides {
        auto [a, b1, b2, c1, c2] = std::tuple(p.params[0], p.params[1], p.params[2], p.params[3], p.params[4]);
        const double x = p.x.real(), y = p.y.real();
        const Complex big_a = a - c1 - c2 + 2.0;
        EvalResult lhs = fp_value({big_a, b1 - c1 + 1.0, b2 - c2 + 1.0, 2.0 - c1, 2.0 - c2}, x, y);
        // The unit square in (p, q) is split along p = q and each half is
        // mapped by the Duffy substitution, which turns the singular corner
        // (yp + (1-p)q)^{c2-b2-1} at the origin into a pure power.
        const Complex al = a - c1 - c2 + 1.0, ex = c2 - b2 - 1.0;
        WeightedIntegrand2D lower;  // q = p s
        lower.alpha_u = a - c1;
        lower.beta_u = b2 - a;
        lower.alpha_v = b2 - 1.0;
        lower.core = [=](double p, double omp, double s, double oms) {
          return std::pow(Complex(1.0 - x * p), c1 - b1 - 1.0) * std::pow(Complex(omp + p * oms), -a) *
                 std::pow(Complex(y + omp * s), ex);
        };
        WeightedIntegrand2D upper;  // p = q r
        upper.alpha_u = a - c1;
        upper.beta_u = -a;
        upper.alpha_v = al;
        upper.core = [=](double q, double omq, double r, double omr) {
          const double omp = omq + q * omr;
          return std::pow(Complex(omp), b2 - a) * std::pow(Complex(1.0 - x * q * r), c1 - b1 - 1.0) *
                 std::pow(Complex(y * r + omp), ex);
        };
        const double qtol = std::max(tol, 1e-9);
        EvalResult lo = integrate_unit_square(lower, qtol), up = integrate_unit_square(upper, qtol);
        EvalResult sum{lo.value + up.value, lo.err_estimate + up.err_estimate, Method::double_integral,
                       lo.terms_or_nodes + up.terms_or_nodes};
        Complex k = gamma(big_a + b2) * gamma(2.0 - c1) * rgamma(big_a) * rgamma(a - c1 + 1.0) * rgamma(b2) *
                    rgamma(1.0 - a);
        return {lhs, times(sum, k)};
      });

  // Fractional integral of order mu over (-inf, x], mapped to s in (0, 1]
  // by t = x - (1-x)(1-s)/s.
  add("riemann-liouville-lemma", "order-mu integral of 2F1(a,b;c) over (-inf, x] lowers c by mu", 4, 1e-9,
      [](Sampler& s) -> Draw {
        Complex a = s.param(-1.5, 1.5), b = s.param(-1.5, 1.5), mu = s.param(0, 1.5);
        Complex c = (a.real() > b.real() ? a : b) + mu + s.param(0, 2);
        if (near_pole(c) || near_pole(c - mu)) return std::nullopt;
        return IdentityPoint{{a, b, c, mu}, s.uniform(-3.0, 0.9), 0.0};
      },
      [](const IdentityPoint& p, double tol) -> Sides {
        auto [a, b, c, mu] = std::tuple(p.params[0], p.params[1], p.params[2], p.params[3]);
        const double x = p.x.real();
        Hyp2f1 g(a, b, c);
        const Complex alpha = min_re(c - b - mu - 1.0, c - a - mu - 1.0);
        NodeError ne;
        WeightedIntegrand1D f{[&](double s, double oms) {
                                double t = x - (1.0 - x) * oms / s;
                                return std::exp((c - a - b - mu - 1.0 - alpha) * std::log(s)) *
                                       ne.track(g(t, 1e-15));
                              },
                              alpha, mu - 1.0};
        EvalResult lhs = scaled(integrate_weighted_01(f, tol), cpow(1.0 - x, a + b - c + mu) * rgamma(mu), ne.worst);
        Complex k = gamma(c - a - mu) * gamma(c - b - mu) * gamma(c) * rgamma(c - a) * rgamma(c - b) * rgamma(c - mu) *
                    cpow(1.0 - x, a + b - c + mu);
        return {lhs, times(hyp2f1(a, b, c - mu, x), k)};
      });

  return r;
}

std::uint64_t id_hash(std::string_view id) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : id) h = (h ^ ch) * 1099511628211ull;
  return h;
}

double relative(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

void record(IdentityReport& rep, const IdentityPoint& pt, const ResidualRecord& rr) {
  ++rep.samples;
  rep.max_rel_residual = std::max(rep.max_rel_residual, rr.residual);
  if (!rr.pass) rep.failures.emplace_back(pt, rr.residual);
}

void evaluate_into(IdentityReport& rep, const IdentitySpec& spec, const IdentityPoint& pt, double tol) {
  try {
    record(rep, pt, check_identity(spec, pt, tol));
  } catch (const SkippedError&) {
    ++rep.skipped;
  } catch (const Error&) {
    // Domain or convergence failures at a sampled point are failures.
    ResidualRecord bad;
    bad.residual = std::numeric_limits<double>::infinity();
    record(rep, pt, bad);
  }
}

void finish(IdentityReport& rep) {
  if (!rep.failures.empty())
    rep.status = Status::fail;
  else
    rep.status = rep.samples > 0 ? Status::pass : Status::skipped;
}

}  // namespace

const std::vector<IdentitySpec>& identity_registry() {
  static const std::vector<IdentitySpec> reg = build_registry();
  return reg;
}

const IdentitySpec* find_identity(std::string_view id) {
  for (const auto& s : identity_registry())
    if (s.id == id) return &s;
  return nullptr;
}

ResidualRecord check_identity(const IdentitySpec& spec, const IdentityPoint& point, double tol) {
  if (point.params.size() != spec.arity)
    throw SkippedError(spec.id + ": expected " + std::to_string(spec.arity) + " parameters");
  Sides s;
  try {
    s = spec.sides(point, tol);
  } catch (const DegenerateError& e) {
    throw SkippedError(spec.id + ": " + e.what());
  } catch (const GeometryError& e) {
    throw SkippedError(spec.id + ": " + e.what());
  } catch (const ConstraintError& e) {
    throw SkippedError(spec.id + ": " + e.what());
  }
  ResidualRecord r;
  r.lhs = s.first.value;
  r.rhs = s.second.value;
  const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
  r.residual = std::abs(r.lhs - r.rhs) / scale;
  r.combined = (s.first.err_estimate + s.second.err_estimate) / scale;
  r.threshold = std::max(10.0 * r.combined, spec.floor);
  r.pass = r.residual < r.threshold;
  return r;
}

ResidualRecord check_identity(std::string_view id, const IdentityPoint& point, double tol) {
  const IdentitySpec* spec = find_identity(id);
  if (!spec) throw DomainError("unknown identity: " + std::string(id));
  return check_identity(*spec, point, tol);
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    default:
      return "skipped";
  }
}

IdentityReport run_identity(const IdentitySpec& spec, int samples, std::uint64_t seed, double tol) {
  IdentityReport rep;
  rep.id = spec.id;
  Sampler s(seed ^ id_hash(spec.id));
  const int max_draws = 50 * samples + 100;
  int drawn = 0;
  for (int k = 0; k < samples && drawn < max_draws;) {
    ++drawn;
    std::optional<IdentityPoint> pt = spec.sample(s);
    if (!pt) {
      ++rep.rejected;
      continue;
    }
    evaluate_into(rep, spec, *pt, tol);
    ++k;
  }
  finish(rep);
  return rep;
}

IdentityReport run_points(const IdentitySpec& spec, const std::vector<IdentityPoint>& points, double tol) {
  IdentityReport rep;
  rep.id = spec.id;
  for (const auto& pt : points) evaluate_into(rep, spec, pt, tol);
  finish(rep);
  return rep;
}

int suite_samples(Suite s) { return s == Suite::fast ? 10 : 100; }

std::vector<IdentityReport> run_suite(Suite suite, std::uint64_t seed, double tol) {
  std::vector<IdentityReport> out;
  const int n = suite_samples(suite);
  for (const auto& spec : identity_registry()) out.push_back(run_identity(spec, n, seed, tol));
  out.push_back(discrepancy_report(n, seed, tol));
  return out;
}

std::string format_reports(const std::vector<IdentityReport>& reports, ReportFormat fmt) {
  std::string out;
  char buf[256];
  for (const auto& r : reports) {
    const char* st = status_name(r.status).data();
    if (fmt == ReportFormat::text)
      std::snprintf(buf, sizeof buf, "id=%s samples=%d max_rel_residual=%.5e status=%s\n", r.id.c_str(), r.samples,
                    r.max_rel_residual, st);
    else
      std::snprintf(buf, sizeof buf, "{\"id\": \"%s\", \"samples\": %d, \"max_rel_residual\": %.5e, \"status\": \"%s\"}\n",
                    r.id.c_str(), r.samples, r.max_rel_residual, st);
    out += buf;
  }
  return out;
}

std::vector<DiscrepancySample> discrepancy_check(int samples, std::uint64_t seed, double tol) {
  std::vector<DiscrepancySample> out;
  Sampler s(seed ^ id_hash("classical-vs-loop"));
  LoopSpec spec;
  spec.shrink_to_fit = true;
  for (int drawn = 0; int(out.size()) < samples && drawn < 50 * samples + 100; ++drawn) {
    H2Params h;
    h.a = s.param(0, 1.5);
    h.b = s.param(-1, 1);
    h.c = -h.a + s.param(0, 2);
    h.d = s.param(0, 1.5);
    h.e = h.a + h.d + s.param(0, 2);
    if (near_int(h.a) || near_int(h.e - h.a)) continue;
    const double x = s.uniform(-0.9, 0.9);
    // Keeps 1/x outside the capsule around [0, y/(1+y)].
    const double ylo = x < 0.0 ? std::max(-0.95, -1.0 / (1.0 - x) + 0.05) : -0.95;
    const double y = s.uniform(ylo, -0.1);
    DiscrepancySample d;
    d.point = {{h.a, h.b, h.c, h.d, h.e}, x, y};
    try {
      d.classical = h2_rewrite(Rep::C4_8b, h, x, y, std::max(tol, 1e-9));
      d.fp_side = h2_rewrite_fp_side(h, x, y);
      d.loop = kita_h2_loop(h, x, y, spec);
    } catch (const GeometryError&) {
      continue;
    } catch (const DegenerateError&) {
      continue;
    }
    d.classical_vs_fp = relative(d.classical.value, d.fp_side.value);
    d.classical_vs_loop = relative(d.classical.value, d.loop.value);
    const double scale = std::max({std::abs(d.classical.value), std::abs(d.loop.value), 1e-300});
    d.loop_estimate = (d.classical.err_estimate + d.loop.err_estimate) / scale;
    d.pass = d.classical_vs_fp < 1e-6 && d.classical_vs_loop > 10.0 * d.loop_estimate;
    out.push_back(d);
  }
  return out;
}

IdentityReport discrepancy_report(int samples, std::uint64_t seed, double tol) {
  IdentityReport rep;
  rep.id = "classical-differs-from-loop";
  for (const auto& d : discrepancy_check(samples, seed, tol)) {
    ++rep.samples;
    rep.max_rel_residual = std::max(rep.max_rel_residual, d.classical_vs_fp);
    if (!d.pass) rep.failures.emplace_back(d.point, d.classical_vs_loop);
  }
  finish(rep);
  return rep;
}

}  // namespace hypint
