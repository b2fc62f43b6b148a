#pragma once

#include <functional>
#include <vector>

#include "hypint/numerics.hpp"

namespace hypint {

struct QuadOptions {
  int min_level = 3;
  int max_level = 10;
  // Throw NoConvergence when the final level misses tol; otherwise return
  // the best value with its (large) error estimate.
  bool throw_on_stall = true;
};

// t^alpha (1-t)^beta g(t) on [0, 1]. g receives both t and 1-t so it can
// stay accurate near t = 1.
struct WeightedIntegrand1D {
  std::function<Complex(double t, double omt)> smooth;
  Complex alpha = 0.0;
  Complex beta = 0.0;
};

EvalResult integrate_weighted_01(const WeightedIntegrand1D& f, double tol, const QuadOptions& opts = {});

// u^au (1-u)^bu v^av (1-v)^bv core(u, v) on the unit square. The optional
// per-axis factors are evaluated once per node and multiplied in.
struct WeightedIntegrand2D {
  Complex alpha_u = 0.0, beta_u = 0.0, alpha_v = 0.0, beta_v = 0.0;
  std::function<Complex(double u, double omu)> u_factor;
  std::function<Complex(double v, double omv)> v_factor;
  std::function<Complex(double u, double omu, double v, double omv)> core;
};

EvalResult integrate_unit_square(const WeightedIntegrand2D& f, double tol, const QuadOptions& opts = {});

struct PathElement {
  enum class Kind { segment, arc };
  Kind kind = Kind::segment;
  Complex z0 = 0.0, z1 = 0.0;  // segment endpoints
  Complex center = 0.0;        // arc data; theta1 < theta0 is clockwise
  double radius = 0.0;
  double theta0 = 0.0, theta1 = 0.0;

  static PathElement segment(Complex a, Complex b);
  static PathElement arc(Complex center, double radius, double theta0, double theta1);

  Complex point(double s) const;       // s in [0, 1]
  Complex derivative(double s) const;  // d point / ds
  Complex start() const { return point(0.0); }
  Complex end() const { return point(1.0); }
  double length() const;
  PathElement reversed() const;
};

using PathIntegrand = std::function<Complex(Complex u, BranchState& state)>;

struct PathOptions {
  int max_depth = 40;
  double max_arc_panel = kPi / 8.0;
  double max_segment_panel = 0.25;
};

// Adaptive Gauss-Legendre (16 vs 32 points) along the elements in order.
// The state is threaded through the path and left at its end.
EvalResult integrate_path(const PathIntegrand& f, const std::vector<PathElement>& path, BranchState& state,
                          double tol, const PathOptions& opts = {});

}  // namespace hypint
