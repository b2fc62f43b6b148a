#pragma once

#include <optional>
#include <string_view>

#include "hypint/numerics.hpp"
#include "hypint/series.hpp"

namespace hypint {

// Classical integral representations, tagged by the formula they realize.
enum class Rep {
  E2_2,     // 2F1, t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a}
  E2_3,     // 2F1 after the Euler transformation
  E2_4,     // 2F1 with a and b swapped
  E2_5,     // 2F1, swapped and Euler-transformed
  E2_10,    // 2F1 after t -> t/(p+(1-p)t)
  E2_13,    // 2F1 after t -> (1-t)/(1-(1-p)t)
  H3_3,     // H2 as a single integral over 2F1(-y(1-xu))
  H3_5,     // H2 as a double integral
  H3_7,     // H2 single integral in transformed variables
  H3_8,     // H2 double integral in transformed variables
  FP4_6,    // F_P double integral
  FP_eq32,  // F_P single integral over 2F1
  FP4_7,    // F_P single integral over Appell F1
  FP4_7a,   // F_P as a series of 2F1 products
  C4_8,     // F_P left side of the rewritten double integral, unit square
  C4_8a,    // same over 0 < v < 1/u - 1
  C4_8b,    // same over the triangle 0 < v < 1 - u
};

std::string_view rep_name(Rep r);
std::optional<Rep> parse_rep(std::string_view name);

// Margin used for the strict parameter inequalities.
inline constexpr double kConstraintMargin = 1e-9;

EvalResult hyp2f1_euler(Rep variant, Complex a, Complex b, Complex c, Complex z, double tol = 1e-12);

enum class MoebiusKind { phi, psi };

struct MoebiusResult {
  EvalResult integral;
  // Appell F1 reduction; empty when its arguments leave the unit bidisk.
  std::optional<EvalResult> reduction;
};

MoebiusResult hyp2f1_moebius(MoebiusKind kind, double p, Complex a, Complex b, Complex c, Complex z,
                             double tol = 1e-12);

EvalResult h2_integral(Rep form, const H2Params& p, Complex x, Complex y, double tol = 1e-10);
EvalResult fp_integral(Rep form, const FPParams& p, Complex x, Complex y, double tol = 1e-10);

// The double integral of the rewritten F_P representation in one of its
// three coordinate systems. Parameters are named as for H2.
EvalResult h2_rewrite(Rep form, const H2Params& p, Complex x, Complex y, double tol = 1e-9);

// Closed side of the rewrite: Gamma ratio times (-y)^{-c} F_P(a+c, b, c, e, c-d+1; x, -1/y).
EvalResult h2_rewrite_fp_side(const H2Params& p, Complex x, Complex y, double tol = 1e-12);

// F_P by series where a double series converges, else by the single sum
// over 2F1(1-y), which needs |x| < 1.
EvalResult fp_value(const FPParams& p, Complex x, Complex y, double tol = 1e-13);

}  // namespace hypint
