#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hypint/numerics.hpp"
#include "hypint/quadrature.hpp"
#include "hypint/series.hpp"

namespace hypint {

struct LoopSpec {
  double epsilon = 0.25;
  // Base point on the bridge towards 1; defaults to the first point of
  // the bridge (epsilon for the plain loop).
  std::optional<double> base;
  // Point enclosed together with 0: the inner circle becomes the
  // epsilon-neighbourhood of the segment [0, grouped].
  std::optional<Complex> grouped;
  // Points that must stay more than 2 epsilon away from the path.
  std::vector<Complex> excluded;
  // Retry with epsilon * 0.7^k (k <= 10) when the requested radius fails.
  bool shrink_to_fit = false;
};

struct TrackedFactor {
  std::string expr;
  double initial_arg = 0.0;
};

struct ContourPath {
  std::vector<PathElement> elements;
  Complex base = 0.0;
  std::vector<TrackedFactor> factors;  // u and 1-u, both with argument 0 at the base
  double epsilon = 0.0;
  double bridge_start = 0.0;  // real point where the inner loop meets [., 1 - epsilon]
};

// The loop (1+, 0+, 1-, 0-): bridge to 1 - epsilon, C(1) positive, back,
// inner loop positive, bridge, C(1) negative, back, inner loop negative.
// Every bridge pass is split at the base point (or at its midpoint when the
// base point is the bridge start), so the plain loop has 12 elements.
ContourPath build_double_loop(const LoopSpec& spec);

struct LoopSample {
  std::size_t element = 0;
  double s = 0.0;
  Complex u = 0.0;
  double arg_u = 0.0;
  double arg_1mu = 0.0;
};

// Continuous arguments of u and 1-u at samples_per_element + 1 equally
// spaced parameters of every element.
std::vector<LoopSample> trace_loop(const ContourPath& path, int samples_per_element = 16);

// CSV: element,s,re_u,im_u,arg_u,arg_1mu
void write_loop_csv(std::ostream& out, const ContourPath& path, int samples_per_element = 16);

// Net winding number of the concatenated elements around p.
double winding_number(const std::vector<PathElement>& elements, Complex p);

EvalResult beta_double_loop(Complex a, Complex b, const LoopSpec& spec = {}, double tol = 1e-13);

enum class LoopMode { outside, inside };

// outside: 2F1(a, b; c; z) with 1/z outside the loop.
// inside: 1/z grouped with 0; returns the prefactored 2F1 at 1/z.
EvalResult hyp2f1_loop(LoopMode mode, Complex a, Complex b, Complex c, Complex z, const LoopSpec& spec = {},
                       double tol = 1e-13);

// Gamma(c)Gamma(b-a)/(Gamma(b)Gamma(c-a)) (-z)^{-a} 2F1(a, a-c+1; a-b+1; 1/z) by series.
EvalResult hyp2f1_connection_term(Complex a, Complex b, Complex c, Complex z, double tol = 1e-14);

// The inside loop shrunk onto [0, 1] and [1/z, 0]: two Euler integrals.
// Needs Re a < 1, Re c > Re b > 0 and z off [0, inf).
EvalResult hyp2f1_shrunk(Complex a, Complex b, Complex c, Complex z, double tol = 1e-12);

struct KitaOptions {
  // Evaluate the inner v-integral by quadrature instead of its 2F1 closed form.
  bool inner_quadrature = false;
};

// Loop around u0 = y/(1+y) grouped with 0, 1/x excluded.
ContourPath kita_contour(Complex x, Complex y, const LoopSpec& spec = {});

// H2(a,b,c,d,e; x, y) as the double-loop integral in u over the Euler
// integral in v. Needs Re d, Re(e-a-d) > 0 and a, e-a off the integers.
EvalResult kita_h2_loop(const H2Params& p, Complex x, Complex y, const LoopSpec& spec = {}, double tol = 1e-11,
                        const KitaOptions& opts = {});

// Real (x, y) in one of the four hole routings; 0 if none.
int olsson_case(Complex x, Complex y);

ContourPath olsson_contour(Complex x, Complex y, const LoopSpec& spec = {});

// y^{-b2} H2(a-b2, b1, b2, b2-c2+1, c1; x, -1/y) as a double-loop integral
// over 2F1(b2, b2-c2+1; c1-a+b2; (1-1/u)/y).
EvalResult olsson_I(const FPParams& p, Complex x, Complex y, const LoopSpec& spec = {}, double tol = 1e-11);

struct ShrinkParts {
  EvalResult i1;         // interval integral over [0, 1]
  EvalResult i2;         // interval integral over [(1-y)^{-1}, 0]
  EvalResult i1_closed;  // Gamma ratio times F_P(a, b1, b2, c1, c2; x, y)
  EvalResult i2_closed;  // Gamma ratio times (y-1)^{-a} F_P(a, b1, c2-b2, c1, c2; x/(1-y), y/(y-1))
};

// Shrinks the case-1 loop (x <= 0, x + y > 1). Needs Re(b2+c1-a), Re a,
// Re(a-c2+1), Re(c1+c2-a-b2) > 0.
ShrinkParts shrink_case1(const FPParams& p, Complex x, Complex y, double tol = 1e-11);

}  // namespace hypint
