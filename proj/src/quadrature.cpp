#include "hypint/quadrature.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hypint/errors.hpp"

namespace hypint {

namespace {

// ---------------------------------------------------------------- tanh-sinh

constexpr double kRelWeightCut = 1e-20;
constexpr double kLogTiny = -690.0;  // t >= ~1e-300

struct DeNode {
  double t, omt;
  Complex w;  // dt/ds * t^alpha (1-t)^beta * axis factor
};

struct DePoint {
  double t, omt, logt, logomt, jac;
};

DePoint de_point(double s) {
  const double u = 0.5 * kPi * std::sinh(s);
  const double logt = -std::log1p(std::exp(-2.0 * u));
  const double logomt = -std::log1p(std::exp(2.0 * u));
  return {std::exp(logt), std::exp(logomt), logt, logomt, kPi * std::cosh(s)};
}

double weight_mag(const DePoint& p, double ar, double br) {
  return p.jac * std::exp((ar + 1.0) * p.logt + (br + 1.0) * p.logomt);
}

Complex weight(const DePoint& p, Complex alpha, Complex beta) {
  return p.jac * std::exp((alpha + 1.0) * p.logt + (beta + 1.0) * p.logomt);
}

void check_exponents(Complex alpha, Complex beta) {
  require_finite(alpha, "endpoint exponent");
  require_finite(beta, "endpoint exponent");
  if (alpha.real() <= -1.0 || beta.real() <= -1.0)
    throw NonIntegrable("endpoint exponent with real part <= -1");
}

// One axis of the tanh-sinh rule: truncated s-range and nested node sets.
class DeAxis {
 public:
  DeAxis(Complex alpha, Complex beta, std::function<Complex(double, double)> factor)
      : alpha_(alpha), beta_(beta), factor_(std::move(factor)) {
    check_exponents(alpha, beta);
    const double ar = alpha.real(), br = beta.real();
    double wmax = 0.0;
    for (double s = -8.0; s <= 8.0; s += 0.25) wmax = std::max(wmax, weight_mag(de_point(s), ar, br));
    lo_ = 0.0;
    for (;;) {
      DePoint p = de_point(lo_ - 0.125);
      if (p.logt < kLogTiny) {
        lo_clamped_ = weight_mag(p, ar, br) > kRelWeightCut * wmax;
        break;
      }
      lo_ -= 0.125;
      if (weight_mag(p, ar, br) < kRelWeightCut * wmax) break;
    }
    hi_ = 0.0;
    for (;;) {
      DePoint p = de_point(hi_ + 0.125);
      if (p.logomt < kLogTiny) {
        hi_clamped_ = weight_mag(p, ar, br) > kRelWeightCut * wmax;
        break;
      }
      hi_ += 0.125;
      if (weight_mag(p, ar, br) < kRelWeightCut * wmax) break;
    }
  }

  // Appends the nodes first used at this level; returns index of the first.
  std::size_t refine(int level) {
    const std::size_t first = nodes_.size();
    if (level == 0) {
      for (double s = std::ceil(lo_); s <= hi_; s += 1.0) add(s);
    } else {
      const double h = std::ldexp(1.0, -level);
      const long kmin = static_cast<long>(std::ceil((lo_ / h - 1.0) / 2.0));
      for (long k = kmin;; ++k) {
        double s = (2.0 * k + 1.0) * h;
        if (s < lo_) continue;
        if (s > hi_) break;
        add(s);
      }
    }
    return first;
  }

  const std::vector<DeNode>& nodes() const { return nodes_; }
  bool clamped() const { return lo_clamped_ || hi_clamped_; }

  // Approximate contribution of the cut-off ends, for error bookkeeping.
  double truncated_mass(const std::function<double(double, double)>& gabs) const {
    double m = 0.0;
    const double ar = alpha_.real(), br = beta_.real();
    DePoint l = de_point(lo_);
    DePoint r = de_point(hi_);
    m += gabs(l.t, l.omt) * std::exp((ar + 1.0) * l.logt) / (ar + 1.0);
    m += gabs(r.t, r.omt) * std::exp((br + 1.0) * r.logomt) / (br + 1.0);
    return m;
  }

 private:
  void add(double s) {
    DePoint p = de_point(s);
    Complex w = weight(p, alpha_, beta_);
    if (factor_) w *= factor_(p.t, p.omt);
    nodes_.push_back({p.t, p.omt, w});
  }

  Complex alpha_, beta_;
  std::function<Complex(double, double)> factor_;
  double lo_ = 0.0, hi_ = 0.0;
  bool lo_clamped_ = false, hi_clamped_ = false;
  std::vector<DeNode> nodes_;
};

bool converged(double err, Complex value, double abs_value, double tol) {
  double scale = std::abs(value);
  if (scale <= 1e-14 * abs_value) scale = abs_value;
  return err <= tol * scale;
}

// ----------------------------------------------------------- Gauss-Legendre

template <int N>
struct GaussLegendre {
  std::array<double, N> x{}, w{};

  // Legendre P_N and its derivative at z.
  static void legendre(double z, double& p, double& dp) {
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= N; ++k) {
      double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = N * (z * p1 - p0) / (z * z - 1.0);
  }

  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (N + 0.5));
      double p = 0.0, dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        legendre(z, p, dp);
        double dz = p / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      legendre(z, p, dp);
      // ascending nodes on [0, 1]
      x[N - 1 - i] = 0.5 * (1.0 + z);
      w[N - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre<16>& gl16() {
  static const GaussLegendre<16> g;
  return g;
}
const GaussLegendre<32>& gl32() {
  static const GaussLegendre<32> g;
  return g;
}

template <int N>
Complex panel_rule(const GaussLegendre<N>& g, const PathIntegrand& f, const PathElement& el, double s0,
                   double s1, BranchState& st, double& abs_out) {
  Complex sum = 0.0;
  double abs_sum = 0.0;
  const double len = s1 - s0;
  for (int i = 0; i < N; ++i) {
    double s = s0 + len * g.x[i];
    Complex v = f(el.point(s), st) * el.derivative(s);
    require_finite(v, "path integrand");
    sum += g.w[i] * v;
    abs_sum += g.w[i] * std::abs(v);
  }
  abs_out = abs_sum * len;
  return sum * len;
}

struct PathWork {
  const PathIntegrand& f;
  double tol;
  int max_depth;
  double total_len;
  double abs_scale = 0.0;
  Complex value = 0.0;
  double err = 0.0;
  std::int64_t nodes = 0;
};

void panel(PathWork& w, const PathElement& el, double s0, double s1, BranchState& state, int depth) {
  BranchState a = state, b = state;
  double abs16 = 0.0, abs32 = 0.0;
  Complex q16 = panel_rule(gl16(), w.f, el, s0, s1, a, abs16);
  Complex q32 = panel_rule(gl32(), w.f, el, s0, s1, b, abs32);
  w.nodes += 48;
  double diff = std::abs(q32 - q16);
  double scale = std::max(w.abs_scale, abs32);
  double share = el.length() * (s1 - s0) / w.total_len;
  if (diff <= w.tol * std::max(std::abs(q32), scale * share) || depth >= w.max_depth) {
    if (depth >= w.max_depth && diff > w.tol * std::max(std::abs(q32), scale * share))
      throw NoConvergence("path quadrature: panel refinement limit reached");
    w.value += q32;
    w.err += diff;
    w.abs_scale += abs32;
    w.f(el.point(s1), b);  // carry tracked arguments to the panel end
    ++w.nodes;
    state = b;
    return;
  }
  double mid = 0.5 * (s0 + s1);
  panel(w, el, s0, mid, state, depth + 1);
  panel(w, el, mid, s1, state, depth + 1);
}

}  // namespace

EvalResult integrate_weighted_01(const WeightedIntegrand1D& f, double tol, const QuadOptions& opts) {
  DeAxis axis(f.alpha, f.beta, nullptr);
  Complex prev = 0.0, cur = 0.0;
  double err = INFINITY, abs_int = 0.0;
  Complex raw = 0.0;
  double raw_abs = 0.0;
  int level = 0;
  for (; level <= opts.max_level; ++level) {
    std::size_t first = axis.refine(level);
    const auto& nodes = axis.nodes();
    for (std::size_t k = first; k < nodes.size(); ++k) {
      Complex g = f.smooth(nodes[k].t, nodes[k].omt);
      Complex v = nodes[k].w * g;
      require_finite(v, "weighted integrand");
      raw += v;
      raw_abs += std::abs(v);
    }
    const double h = std::ldexp(1.0, -level);
    prev = cur;
    cur = h * raw;
    abs_int = h * raw_abs;
    if (level > 0) err = std::abs(cur - prev);
    if (level >= opts.min_level && converged(err, cur, abs_int, tol)) break;
  }
  double tail = axis.truncated_mass([&](double t, double omt) { return std::abs(f.smooth(t, omt)); });
  if (level > opts.max_level) {
    level = opts.max_level;
    if (opts.throw_on_stall && !converged(err, cur, abs_int, tol * 10.0))
      throw NoConvergence("tanh-sinh refinement stalled at error " + std::to_string(err));
  }
  double e = err + tail + 8.0 * kEps * abs_int;
  return {cur, e, Method::single_integral, static_cast<std::int64_t>(axis.nodes().size())};
}

EvalResult integrate_unit_square(const WeightedIntegrand2D& f, double tol, const QuadOptions& opts) {
  DeAxis ax(f.alpha_u, f.beta_u, f.u_factor);
  DeAxis ay(f.alpha_v, f.beta_v, f.v_factor);
  Complex prev = 0.0, cur = 0.0;
  double err = INFINITY, abs_int = 0.0;
  std::int64_t evals = 0;
  int level = 0;
  for (; level <= opts.max_level; ++level) {
    std::size_t fu = ax.refine(level);
    std::size_t fv = ay.refine(level);
    const auto& nu = ax.nodes();
    const auto& nv = ay.nodes();
    Complex add = 0.0;
    double add_abs = 0.0;
    auto term = [&](const DeNode& p, const DeNode& q) {
      Complex v = p.w * q.w * f.core(p.t, p.omt, q.t, q.omt);
      require_finite(v, "double integrand");
      add += v;
      add_abs += std::abs(v);
    };
    for (std::size_t i = fu; i < nu.size(); ++i)
      for (std::size_t j = 0; j < nv.size(); ++j) term(nu[i], nv[j]);
    for (std::size_t i = 0; i < fu; ++i)
      for (std::size_t j = fv; j < nv.size(); ++j) term(nu[i], nv[j]);
    evals += static_cast<std::int64_t>((nu.size() - fu) * nv.size() + fu * (nv.size() - fv));
    const double h = std::ldexp(1.0, -level);
    prev = cur;
    if (level == 0) {
      cur = add;
      abs_int = add_abs;
    } else {
      cur = 0.25 * prev + h * h * add;
      abs_int = 0.25 * abs_int + h * h * add_abs;
      err = std::abs(cur - prev);
    }
    if (level >= opts.min_level && converged(err, cur, abs_int, tol)) break;
  }
  if (level > opts.max_level && opts.throw_on_stall && !converged(err, cur, abs_int, tol * 10.0))
    throw NoConvergence("2D tanh-sinh refinement stalled at error " + std::to_string(err));
  return {cur, err + 16.0 * kEps * abs_int, Method::double_integral, evals};
}

PathElement PathElement::segment(Complex a, Complex b) {
  PathElement e;
  e.kind = Kind::segment;
  e.z0 = a;
  e.z1 = b;
  return e;
}

PathElement PathElement::arc(Complex c, double r, double t0, double t1) {
  if (!(r > 0.0)) throw GeometryError("arc radius must be positive");
  PathElement e;
  e.kind = Kind::arc;
  e.center = c;
  e.radius = r;
  e.theta0 = t0;
  e.theta1 = t1;
  return e;
}

Complex PathElement::point(double s) const {
  if (kind == Kind::segment) {
    if (s == 1.0) return z1;
    return z0 + s * (z1 - z0);
  }
  double th = theta0 + s * (theta1 - theta0);
  return center + std::polar(radius, th);
}

Complex PathElement::derivative(double s) const {
  if (kind == Kind::segment) return z1 - z0;
  double th = theta0 + s * (theta1 - theta0);
  return Complex(0.0, theta1 - theta0) * std::polar(radius, th);
}

double PathElement::length() const {
  if (kind == Kind::segment) return std::abs(z1 - z0);
  return radius * std::fabs(theta1 - theta0);
}

PathElement PathElement::reversed() const {
  if (kind == Kind::segment) return segment(z1, z0);
  return arc(center, radius, theta1, theta0);
}

EvalResult integrate_path(const PathIntegrand& f, const std::vector<PathElement>& path, BranchState& state,
                          double tol, const PathOptions& opts) {
  double total_len = 0.0;
  for (const auto& el : path) total_len += el.length();
  PathWork w{f, tol, opts.max_depth, std::max(total_len, 1e-300)};
  for (const auto& el : path) {
    if (el.length() == 0.0) continue;
    int pieces = 1;
    if (el.kind == PathElement::Kind::arc)
      pieces = static_cast<int>(std::ceil(std::fabs(el.theta1 - el.theta0) / opts.max_arc_panel - 1e-12));
    else
      pieces = static_cast<int>(std::ceil(el.length() / opts.max_segment_panel - 1e-12));
    pieces = std::max(pieces, 1);
    for (int k = 0; k < pieces; ++k) panel(w, el, double(k) / pieces, double(k + 1) / pieces, state, 0);
  }
  return {w.value, w.err, Method::loop_integral, w.nodes};
}

}  // namespace hypint
