#include "hypint/contour.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "eval_detail.hpp"
#include "hypint/errors.hpp"
#include "hypint/euler.hpp"

namespace hypint {

namespace {

using detail::min_re;
using detail::NodeError;
using detail::positive;
using detail::scaled;

constexpr double kIntegerGuard = 1e-6;
constexpr double kNodeMargin = 1e-6;

double segment_distance(Complex p, Complex a, Complex b) {
  Complex d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double element_distance(Complex p, const PathElement& el) {
  if (el.kind == PathElement::Kind::segment) return segment_distance(p, el.z0, el.z1);
  const double lo = std::min(el.theta0, el.theta1), hi = std::max(el.theta0, el.theta1);
  const double ring = std::fabs(std::abs(p - el.center) - el.radius);
  if (hi - lo >= kTwoPi - 1e-12 || p == el.center) return ring;
  double ang = std::arg(p - el.center);
  while (ang < lo) ang += kTwoPi;
  while (ang >= lo + kTwoPi) ang -= kTwoPi;
  if (ang <= hi) return ring;
  return std::min(std::abs(p - el.start()), std::abs(p - el.end()));
}

// Angle representative in [lo, lo + 2 pi).
double angle_from(double ang, double lo) {
  while (ang < lo) ang += kTwoPi;
  while (ang >= lo + kTwoPi) ang -= kTwoPi;
  return ang;
}

void push_nonempty(std::vector<PathElement>& out, const PathElement& el) {
  if (el.length() > 1e-13) out.push_back(el);
}

// Positive boundary of the epsilon-neighbourhood of [0, g], starting and
// ending at the largest real r with dist(r, [0, g]) = eps.
std::vector<PathElement> capsule(Complex g, double eps, double& rstar) {
  double lo = 0.0, hi = std::abs(g) + eps + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (segment_distance(mid, 0.0, g) <= eps ? lo : hi) = mid;
  }
  rstar = lo;
  const Complex q = rstar;
  const double phi = std::arg(g);
  const Complex dir = std::polar(1.0, phi), nrm = Complex(0.0, 1.0) * dir;

  std::vector<PathElement> pieces{
      PathElement::arc(g, eps, phi - kPi / 2, phi + kPi / 2),
      PathElement::segment(g + eps * nrm, eps * nrm),
      PathElement::arc(0.0, eps, phi + kPi / 2, phi + 3 * kPi / 2),
      PathElement::segment(-eps * nrm, g - eps * nrm),
  };
  const double along = (q * std::conj(dir)).real();
  const double side = (q * std::conj(dir)).imag();
  int k;
  PathElement head, tail;
  if (along >= std::abs(g)) {
    k = 0;
    double th = angle_from(std::arg(q - g), phi - kPi / 2);
    head = PathElement::arc(g, eps, th, phi + kPi / 2);
    tail = PathElement::arc(g, eps, phi - kPi / 2, th);
  } else if (along <= 0.0) {
    k = 2;
    double th = angle_from(std::arg(q), phi + kPi / 2);
    head = PathElement::arc(0.0, eps, th, phi + 3 * kPi / 2);
    tail = PathElement::arc(0.0, eps, phi + kPi / 2, th);
  } else if (side > 0.0) {
    k = 1;
    head = PathElement::segment(q, eps * nrm);
    tail = PathElement::segment(g + eps * nrm, q);
  } else {
    k = 3;
    head = PathElement::segment(q, g - eps * nrm);
    tail = PathElement::segment(-eps * nrm, q);
  }
  std::vector<PathElement> out;
  push_nonempty(out, head);
  for (int j = 1; j < 4; ++j) push_nonempty(out, pieces[(k + j) % 4]);
  push_nonempty(out, tail);
  return out;
}

ContourPath build_once(const LoopSpec& spec, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw GeometryError("loop radius must lie in (0, 1/2)");
  std::vector<PathElement> inner;
  double rstar = eps;
  const bool grouped = spec.grouped && std::abs(*spec.grouped) > 1e-12;
  if (grouped) {
    const Complex g = *spec.grouped;
    require_finite(g, "grouped point");
    if (segment_distance(1.0, 0.0, g) <= 2.0 * eps)
      throw GeometryError("grouped point leaves no room for the circle around 1");
    inner = capsule(g, eps, rstar);
  } else {
    inner.push_back(PathElement::arc(0.0, eps, 0.0, kTwoPi));
  }
  const double b = 1.0 - eps;
  if (!(rstar < b - 1e-9)) throw GeometryError("no bridge left between the inner loop and 1 - epsilon");
  double t0 = spec.base.value_or(rstar);
  if (std::fabs(t0 - rstar) < 1e-14) t0 = rstar;
  if (!(t0 >= rstar && t0 < b)) throw GeometryError("base point is not on the bridge");
  const double m = t0 > rstar ? t0 : 0.5 * (rstar + b);

  std::vector<PathElement> inner_neg;
  for (auto it = inner.rbegin(); it != inner.rend(); ++it) inner_neg.push_back(it->reversed());

  std::vector<PathElement> el;
  auto bridge_out = [&] {
    el.push_back(PathElement::segment(rstar, m));
    el.push_back(PathElement::segment(m, b));
  };
  auto bridge_back = [&] {
    el.push_back(PathElement::segment(b, m));
    el.push_back(PathElement::segment(m, rstar));
  };
  bridge_out();
  el.push_back(PathElement::arc(1.0, eps, kPi, 3 * kPi));
  bridge_back();
  el.insert(el.end(), inner.begin(), inner.end());
  bridge_out();
  el.push_back(PathElement::arc(1.0, eps, 3 * kPi, kPi));
  bridge_back();
  el.insert(el.end(), inner_neg.begin(), inner_neg.end());
  if (t0 > rstar) std::rotate(el.begin(), el.begin() + 1, el.end());

  for (Complex p : spec.excluded) {
    require_finite(p, "excluded point");
    for (const auto& e : el) {
      if (element_distance(p, e) <= 2.0 * eps) {
        std::ostringstream msg;
        msg << "excluded point (" << p.real() << ", " << p.imag() << ") within 2 epsilon of the loop";
        throw GeometryError(msg.str());
      }
    }
  }
  ContourPath path;
  path.elements = std::move(el);
  path.base = t0;
  path.factors = {{"u", 0.0}, {"1-u", 0.0}};
  path.epsilon = eps;
  path.bridge_start = rstar;
  return path;
}

Complex loop_factor(Complex p) { return 1.0 - std::exp(Complex(0.0, kTwoPi) * p); }

void guard_integer(Complex p, const char* what) {
  if (integer_distance(p) < kIntegerGuard)
    throw DegenerateError(std::string(what) + " is too close to an integer for the loop prefactor");
}

double path_length(const ContourPath& path) {
  double len = 0.0;
  for (const auto& e : path.elements) len += e.length();
  return len;
}

// Rejects nodes on or across the principal cut [1, inf) of a factor whose
// argument is tracked in slot id.
void check_node(Complex v, BranchState& st, std::size_t id, Complex u, const char* what) {
  const Complex om = 1.0 - v;
  if (std::fabs(v.imag()) <= kNodeMargin && v.real() >= 1.0 - kNodeMargin) {
    std::ostringstream msg;
    msg << what << " reaches [1, inf) at u = (" << u.real() << ", " << u.imag() << ")";
    throw GeometryError(msg.str());
  }
  double tracked = st.advance(id, om);
  if (std::fabs(tracked - std::arg(om)) > 1e-6) {
    std::ostringstream msg;
    msg << "loop crosses the cut of " << what << " near u = (" << u.real() << ", " << u.imag() << ")";
    throw GeometryError(msg.str());
  }
}

struct LoopIntegral {
  EvalResult raw;
  double max_abs = 0.0;
};

// Double-loop integral of u^{a-1} (1-u)^{e-a-1} (1-ux)^{-b} G((1/u - 1) y).
template <class Inner>
LoopIntegral h2_loop_raw(const H2Params& p, Complex x, Complex y, const ContourPath& path, double tol,
                         Inner&& inner) {
  BranchState st;
  const auto iu = st.add_factor(0.0), i1 = st.add_factor(0.0);
  const Complex u0 = path.base;
  const auto ix = st.add_factor(std::arg(1.0 - u0 * x));
  const auto iw = st.add_factor(std::arg(1.0 - (1.0 / u0 - 1.0) * y));
  double max_abs = 0.0;
  PathIntegrand f = [&](Complex u, BranchState& s) {
    const Complex ux = u * x, w = (1.0 / u - 1.0) * y;
    check_node(ux, s, ix, u, "ux");
    check_node(w, s, iw, u, "(1/u - 1) y");
    Complex v = tracked_power(u, p.a - 1.0, s, iu) * tracked_power(1.0 - u, p.e - p.a - 1.0, s, i1) *
                principal_pow(1.0 - ux, -p.b) * inner(w);
    max_abs = std::max(max_abs, std::abs(v));
    return v;
  };
  EvalResult r = integrate_path(f, path.elements, st, tol);
  if (std::fabs(st.argument(iu)) > 1e-8 || std::fabs(st.argument(i1)) > 1e-8)
    throw GeometryError("tracked arguments did not return after the loop");
  return {r, max_abs};
}

EvalResult h2_loop(const H2Params& p, Complex x, Complex y, const ContourPath& path, double tol, bool quad) {
  guard_integer(p.a, "a");
  guard_integer(p.e - p.a, "e-a");
  const Complex pref =
      gamma(p.e) * rgamma(p.a) * rgamma(p.e - p.a) / (loop_factor(p.a) * loop_factor(p.e - p.a));
  NodeError ne;
  LoopIntegral li;
  if (quad) {
    const Complex ipref = gamma(p.e - p.a) * rgamma(p.d) * rgamma(p.e - p.a - p.d);
    li = h2_loop_raw(p, x, y, path, tol, [&](Complex w) {
      WeightedIntegrand1D g{[&](double v, double) { return principal_pow(1.0 - w * v, -p.c); }, p.d - 1.0,
                            p.e - p.a - p.d - 1.0};
      return ipref * ne.track(integrate_weighted_01(g, 1e-13));
    });
  } else {
    Hyp2f1 inner(p.c, p.d, p.e - p.a);
    li = h2_loop_raw(p, x, y, path, tol, [&](Complex w) { return ne.track(inner(w, 1e-15)); });
  }
  EvalResult out = scaled(li.raw, pref, 0.0);
  out.err_estimate += std::abs(pref) * ne.worst * li.max_abs * path_length(path);
  out.err_estimate += 64.0 * kEps * std::abs(out.value);
  return out;
}

ContourPath build_fitted(LoopSpec spec) {
  const int tries = spec.shrink_to_fit ? 11 : 1;
  double eps = spec.epsilon;
  for (int k = 0;; ++k) {
    try {
      return build_once(spec, eps);
    } catch (const GeometryError&) {
      if (k + 1 >= tries) throw;
    }
    eps *= 0.7;
    if (spec.base && *spec.base < eps) spec.base.reset();
  }
}

}  // namespace

ContourPath build_double_loop(const LoopSpec& spec) { return build_fitted(spec); }

std::vector<LoopSample> trace_loop(const ContourPath& path, int samples_per_element) {
  samples_per_element = std::max(samples_per_element, 1);
  BranchState st;
  const auto iu = st.add_factor(path.factors.empty() ? 0.0 : path.factors[0].initial_arg);
  const auto i1 = st.add_factor(path.factors.size() < 2 ? 0.0 : path.factors[1].initial_arg);
  std::vector<LoopSample> out;
  for (std::size_t e = 0; e < path.elements.size(); ++e) {
    const auto& el = path.elements[e];
    const int sub = 8;
    for (int k = 0; k <= samples_per_element; ++k) {
      const double s = double(k) / samples_per_element;
      if (k > 0) {
        for (int j = 1; j < sub; ++j) {
          Complex u = el.point((k - 1 + double(j) / sub) / samples_per_element);
          st.advance(iu, u);
          st.advance(i1, 1.0 - u);
        }
      }
      const Complex u = el.point(s);
      out.push_back({e, s, u, st.advance(iu, u), st.advance(i1, 1.0 - u)});
    }
  }
  return out;
}

void write_loop_csv(std::ostream& out, const ContourPath& path, int samples_per_element) {
  out << "element,s,re_u,im_u,arg_u,arg_1mu\n";
  const auto old = out.precision(17);
  for (const auto& p : trace_loop(path, samples_per_element))
    out << p.element << ',' << p.s << ',' << p.u.real() << ',' << p.u.imag() << ',' << p.arg_u << ','
        << p.arg_1mu << '\n';
  out.precision(old);
}

double winding_number(const std::vector<PathElement>& elements, Complex p) {
  double total = 0.0;
  for (const auto& el : elements) {
    const int n = 256 + static_cast<int>(64.0 * el.length());
    Complex prev = el.point(0.0) - p;
    for (int k = 1; k <= n; ++k) {
      Complex cur = el.point(double(k) / n) - p;
      total += std::arg(cur / prev);
      prev = cur;
    }
  }
  return total / kTwoPi;
}

EvalResult beta_double_loop(Complex a, Complex b, const LoopSpec& spec, double tol) {
  guard_integer(a, "a");
  guard_integer(b, "b");
  const ContourPath path = build_double_loop(spec);
  BranchState st;
  const auto iu = st.add_factor(0.0), i1 = st.add_factor(0.0);
  PathIntegrand f = [&](Complex u, BranchState& s) {
    return tracked_power(u, a - 1.0, s, iu) * tracked_power(1.0 - u, b - 1.0, s, i1);
  };
  EvalResult r = integrate_path(f, path.elements, st, tol);
  const Complex pref = 1.0 / (loop_factor(a) * loop_factor(b));
  EvalResult out = scaled(r, pref, 0.0);
  out.err_estimate += 64.0 * kEps * std::abs(out.value);
  return out;
}

EvalResult hyp2f1_loop(LoopMode mode, Complex a, Complex b, Complex c, Complex z, const LoopSpec& spec,
                       double tol) {
  require_finite(z, "z");
  LoopSpec s = spec;
  Complex pref;
  if (mode == LoopMode::outside) {
    guard_integer(b, "b");
    guard_integer(c - b, "c-b");
    if (z != 0.0) s.excluded.push_back(1.0 / z);
    pref = gamma(c) * rgamma(b) * rgamma(c - b) / (loop_factor(b) * loop_factor(c - b));
  } else {
    if (z == 0.0 || detail::on_real_ray(z, 0.0, true)) throw DomainError("inside mode needs z off [0, inf)");
    guard_integer(b - a, "b-a");
    guard_integer(c - b, "c-b");
    if (near_nonpositive_integer(c, kIntegerGuard)) throw DegenerateError("c is a non-positive integer");
    s.grouped = 1.0 / z;
    pref = gamma(c) * rgamma(b) * rgamma(c - b) / (loop_factor(b - a) * loop_factor(c - b));
  }
  const ContourPath path = build_double_loop(s);
  BranchState st;
  const auto iu = st.add_factor(0.0), i1 = st.add_factor(0.0);
  const auto iz = st.add_factor(std::arg(1.0 - path.base * z));
  PathIntegrand f = [&](Complex t, BranchState& bs) {
    return tracked_power(t, b - 1.0, bs, iu) * tracked_power(1.0 - t, c - b - 1.0, bs, i1) *
           tracked_power(1.0 - t * z, -a, bs, iz);
  };
  EvalResult r = integrate_path(f, path.elements, st, tol);
  EvalResult out = scaled(r, pref, 0.0);
  out.err_estimate += 64.0 * kEps * std::abs(out.value);
  return out;
}

EvalResult hyp2f1_connection_term(Complex a, Complex b, Complex c, Complex z, double tol) {
  require_finite(z, "z");
  if (z == 0.0 || detail::on_real_ray(z, 0.0, true)) throw DomainError("needs z off [0, inf)");
  const Complex pref = gamma(c) * gamma(b - a) * rgamma(b) * rgamma(c - a) * principal_pow(-z, -a);
  EvalResult f = hyp2f1(a, a - c + 1.0, a - b + 1.0, 1.0 / z, tol);
  return {pref * f.value, std::abs(pref) * f.err_estimate, Method::closed_form, f.terms_or_nodes};
}

EvalResult hyp2f1_shrunk(Complex a, Complex b, Complex c, Complex z, double tol) {
  require_finite(z, "z");
  if (z == 0.0 || detail::on_real_ray(z, 0.0, true)) throw DomainError("needs z off [0, inf)");
  positive(1.0 - a, "1-a");
  positive(b, "b");
  positive(c - b, "c-b");
  guard_integer(a - b, "a-b");
  WeightedIntegrand1D f1{[&](double t, double) { return principal_pow(1.0 - t * z, -a); }, b - 1.0, c - b - 1.0};
  WeightedIntegrand1D f2{[&](double s, double) { return principal_pow(1.0 - s / z, c - b - 1.0); }, b - 1.0, -a};
  const Complex p1 = gamma(c) * rgamma(b) * rgamma(c - b);
  const Complex p2 = gamma(c) * gamma(a - b) * gamma(b - a + 1.0) * rgamma(b) * rgamma(c - b) * rgamma(a) *
                     rgamma(1.0 - a) * principal_pow(-z, -b);
  EvalResult r1 = scaled(integrate_weighted_01(f1, tol), p1, 0.0);
  EvalResult r2 = scaled(integrate_weighted_01(f2, tol), p2, 0.0);
  return {r1.value - r2.value, r1.err_estimate + r2.err_estimate, Method::single_integral,
          r1.terms_or_nodes + r2.terms_or_nodes};
}

ContourPath kita_contour(Complex x, Complex y, const LoopSpec& spec) {
  require_finite(x, "x");
  require_finite(y, "y");
  LoopSpec s = spec;
  if (y == -1.0) throw GeometryError("y = -1 sends the inner branch point to infinity");
  if (y != 0.0) s.grouped = y / (1.0 + y);
  if (x != 0.0) s.excluded.push_back(1.0 / x);
  return build_double_loop(s);
}

EvalResult kita_h2_loop(const H2Params& p, Complex x, Complex y, const LoopSpec& spec, double tol,
                        const KitaOptions& opts) {
  positive(p.d, "d");
  positive(p.e - p.a - p.d, "e-a-d");
  guard_integer(p.a, "a");
  guard_integer(p.e - p.a, "e-a");
  return h2_loop(p, x, y, kita_contour(x, y, spec), tol, opts.inner_quadrature);
}

int olsson_case(Complex x, Complex y) {
  if (x.imag() != 0.0 || y.imag() != 0.0) return 0;
  constexpr Region cases[] = {Region::Case1, Region::Case2, Region::Case3, Region::Case4};
  for (int k = 0; k < 4; ++k)
    if (region_contains(cases[k], x, y)) return k + 1;
  return 0;
}

ContourPath olsson_contour(Complex x, Complex y, const LoopSpec& spec) {
  if (olsson_case(x, y) == 0) throw DomainError("(x, y) is in none of the four hole routings");
  return kita_contour(x, -1.0 / y, spec);
}

EvalResult olsson_I(const FPParams& p, Complex x, Complex y, const LoopSpec& spec, double tol) {
  const ContourPath path = olsson_contour(x, y, spec);
  const H2Params q{p.a - p.b2, p.b1, p.b2, p.b2 - p.c2 + 1.0, p.c1};
  EvalResult r = h2_loop(q, x, -1.0 / y, path, tol, false);
  return scaled(r, principal_pow(y, -p.b2), 0.0);
}

ShrinkParts shrink_case1(const FPParams& p, Complex x, Complex y, double tol) {
  if (x.imag() != 0.0 || y.imag() != 0.0 || !(x.real() <= 0.0 && x.real() + y.real() > 1.0))
    throw DomainError("shrinking is implemented for x <= 0, x + y > 1 only");
  positive(p.b2 + p.c1 - p.a, "b2+c1-a");
  positive(p.a, "a");
  positive(p.a - p.c2 + 1.0, "a-c2+1");
  positive(p.c1 + p.c2 - p.a - p.b2, "c1+c2-a-b2");
  const Complex alpha = min_re(p.a - 1.0, p.a - p.c2);
  ShrinkParts out;

  {
    const Complex pref = gamma(p.c1) * rgamma(p.a - p.b2) * rgamma(p.c1 - p.a + p.b2) * principal_pow(y, -p.b2);
    Hyp2f1 inner(p.b2, p.b2 - p.c2 + 1.0, p.c1 - p.a + p.b2);
    NodeError ne;
    WeightedIntegrand1D f{[&](double u, double omu) {
                            return std::exp((p.a - p.b2 - 1.0 - alpha) * std::log(u)) *
                                   principal_pow(1.0 - x * u, -p.b1) * ne.track(inner(-omu / (u * y), 1e-15));
                          },
                          alpha, p.c1 - p.a + p.b2 - 1.0};
    out.i1 = scaled(integrate_weighted_01(f, tol), pref, ne.worst);
  }
  {
    // u = -s/(y-1) maps [0, 1] onto [(1-y)^{-1}, 0].
    const Complex r = 1.0 / (y - 1.0);
    const Complex pref = gamma(p.c1) * gamma(p.b2 - p.a + 1.0) * rgamma(p.b2) * rgamma(p.b2 - p.c2 + 1.0) *
                         rgamma(p.c1 + p.c2 - p.a - p.b2) * principal_pow(y, p.b2 - p.c2) *
                         principal_pow(r, p.a + p.b2 - p.c2);
    Hyp2f1 inner(p.c2 - p.b2, 1.0 - p.b2, p.c1 + p.c2 - p.a - p.b2);
    NodeError ne;
    WeightedIntegrand1D f{[&](double s, double) {
                            const Complex w = 1.0 - (1.0 + 1.0 / (r * s)) / y;
                            return std::exp((p.a + p.b2 - p.c2 - 1.0 - alpha) * std::log(s)) *
                                   principal_pow(1.0 + x * r * s, -p.b1) * ne.track(inner(w, 1e-15));
                          },
                          alpha, p.c1 + p.c2 - p.a - p.b2 - 1.0};
    out.i2 = scaled(integrate_weighted_01(f, tol), pref, ne.worst);
  }
  {
    const Complex pref = gamma(p.a) * gamma(p.a - p.c2 + 1.0) * rgamma(p.a + p.b2 - p.c2 + 1.0) * rgamma(p.a - p.b2);
    out.i1_closed = scaled(fp_value(p, x, y), pref, 0.0);
    out.i1_closed.method = Method::closed_form;
  }
  {
    const Complex pref = gamma(p.b2 - p.a + 1.0) * gamma(p.a) * gamma(p.a - p.c2 + 1.0) * rgamma(p.b2) *
                         rgamma(p.a - p.b2 + 1.0) * rgamma(p.b2 - p.c2 + 1.0) * principal_pow(y - 1.0, -p.a);
    const FPParams q{p.a, p.b1, p.c2 - p.b2, p.c1, p.c2};
    out.i2_closed = scaled(fp_value(q, x / (1.0 - y), y / (y - 1.0)), pref, 0.0);
    out.i2_closed.method = Method::closed_form;
  }
  return out;
}

}  // namespace hypint
