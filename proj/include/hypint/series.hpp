#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hypint/numerics.hpp"

namespace hypint {

struct SeriesOptions {
  int max_wavefronts = 4000;
  // Forces at least this many wavefronts (or terms) to be summed.
  int min_wavefronts = 0;
};

struct Hyp2f1Options {
  double direct_radius = 0.5;
  double inversion_radius = 2.0;
  // Integer gap below which a connection formula counts as degenerate.
  double degenerate_gap = 1e-6;
  // Degenerate connection cases switch to ODE continuation instead of
  // raising DegenerateError.
  bool degenerate_fallback = true;
};

// Gauss 2F1 with fixed parameters, reusable across many arguments.
class Hyp2f1 {
 public:
  Hyp2f1(Complex a, Complex b, Complex c, Hyp2f1Options opts = {});
  EvalResult operator()(Complex z, double tol = 1e-15) const;

 private:
  EvalResult direct(Complex z, double tol) const;
  EvalResult connection(Complex z, Complex w, double tol) const;
  EvalResult ode(Complex z, double tol) const;

  Complex a_, b_, c_;
  Hyp2f1Options opts_;
  bool polynomial_ = false;
  bool one_minus_ok_ = false;
  bool inversion_ok_ = false;
  Complex om1_ = 0.0, om2_ = 0.0;  // 1-z connection coefficients
  Complex in1_ = 0.0, in2_ = 0.0;  // 1/z connection coefficients
};

EvalResult hyp2f1(Complex a, Complex b, Complex c, Complex z, double tol = 1e-15,
                  const Hyp2f1Options& opts = {});

// Generalized hypergeometric pFq by direct summation, |z| < 1.
EvalResult hyp_pfq(const std::vector<Complex>& num, const std::vector<Complex>& den, Complex z,
                   double tol = 1e-15);

// Appell F1 on the unit bidisk.
EvalResult appell_f1(Complex a, Complex b1, Complex b2, Complex c, Complex x, Complex y,
                     double tol = 1e-14, const SeriesOptions& opts = {});
// Appell F1 for |x| < 1 and y off [1, inf), as sum_i c_i x^i 2F1(a+i, b2; c+i; y).
EvalResult appell_f1_continued(Complex a, Complex b1, Complex b2, Complex c, Complex x, Complex y,
                               double tol = 1e-14);
// Appell F2 for |x| + |y| < 1.
EvalResult appell_f2(Complex a, Complex b1, Complex b2, Complex c1, Complex c2, Complex x,
                     Complex y, double tol = 1e-14, const SeriesOptions& opts = {});
// Appell F3 on the unit bidisk.
EvalResult appell_f3(Complex a1, Complex a2, Complex b1, Complex b2, Complex c, Complex x,
                     Complex y, double tol = 1e-14, const SeriesOptions& opts = {});

struct H2Params {
  Complex a, b, c, d, e;
};

struct FPParams {
  Complex a, b1, b2, c1, c2;
};

// Horn H2 double series on Omega1.
EvalResult h2_series(const H2Params& p, Complex x, Complex y, double tol = 1e-14,
                     const SeriesOptions& opts = {});
// Same function summed as sum_j coef_j 2F1(a-j, b; e; x).
EvalResult h2_single_sum(const H2Params& p, Complex x, Complex y, double tol = 1e-14,
                         const SeriesOptions& opts = {});

enum class FPForm {
  double_x_1my,    // double series in x and 1-y
  single_1my,      // outer sum in x, inner 2F1 at 1-y
  single_ym1_y,    // outer sum in x/y, inner 2F1 at (y-1)/y
  double_xy_ym1y,  // double series in x/y and (y-1)/y, times y^-a
  single_3f2,      // outer sum in 1-y, inner 3F2 at x
};

std::string_view fp_form_name(FPForm f);

// Convergence rates of the two F_P double series (below 1 inside).
double fp_rate_x_1my(Complex x, Complex y);
double fp_rate_xy_ym1y(Complex x, Complex y);

// F_P by whichever double series converges; both when both do.
EvalResult fp_series(const FPParams& p, Complex x, Complex y, double tol = 1e-14,
                     const SeriesOptions& opts = {});
EvalResult fp_series_form(FPForm form, const FPParams& p, Complex x, Complex y, double tol = 1e-14,
                          const SeriesOptions& opts = {});

enum class Region {
  Omega1,
  Omega2Real,
  FP41,
  FP44,
  Thm41Domain,
  Case1,
  Case2,
  Case3,
  Case4,
};

std::string_view region_name(Region r);
std::optional<Region> parse_region(std::string_view name);
bool region_contains(Region r, Complex x, Complex y);

// Continuation region of the single integral over 2F1(-y(1-xu)):
// x off [1, inf) and y(xu-1) off [1, inf) for u in [0, 1].
bool in_h2_single_region(Complex x, Complex y);
// Continuation region of the transformed single integral:
// x off [1, inf) and y(x-1)/(1-xu) off [1, inf) for u in [0, 1].
bool in_h2_transformed_region(Complex x, Complex y);

}  // namespace hypint
