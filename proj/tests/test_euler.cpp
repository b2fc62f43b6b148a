#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypint/errors.hpp"
#include "hypint/euler.hpp"

using namespace hypint;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// |a - b| within k times the combined estimate, or a relative floor.
::testing::AssertionResult agree(const EvalResult& a, const EvalResult& b, double k = 10.0, double floor = 1e-9) {
  double diff = std::abs(a.value - b.value);
  double bound = std::max(k * (a.err_estimate + b.err_estimate), floor * std::abs(b.value));
  if (diff <= bound) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.value << " vs " << b.value << " diff " << diff << " bound " << bound;
}

const H2Params kH2{0.2, 0.5, 0.3, 0.4, 1.5};
const FPParams kFP{0.9, 0.4, 0.3, 1.2, 0.8};

}  // namespace

TEST(RepNames, RoundTrip) {
  for (Rep r : {Rep::E2_2, Rep::E2_3, Rep::E2_4, Rep::E2_5, Rep::E2_10, Rep::E2_13, Rep::H3_3, Rep::H3_5, Rep::H3_7,
                Rep::H3_8, Rep::FP4_6, Rep::FP_eq32, Rep::FP4_7, Rep::FP4_7a, Rep::C4_8, Rep::C4_8a, Rep::C4_8b})
    EXPECT_EQ(parse_rep(rep_name(r)), r);
  EXPECT_FALSE(parse_rep("E2.6").has_value());
}

TEST(Hyp2f1Euler, Examples) {
  EvalResult r = hyp2f1_euler(Rep::E2_2, 0.4, 0.6, 1.3, -0.5);
  EXPECT_LT(rel(r.value, hyp2f1(0.4, 0.6, 1.3, -0.5).value), 1e-11);
  EXPECT_LT(rel(hyp2f1_euler(Rep::E2_2, 0.4, 0.6, 1.3, 0.0).value, 1.0), 1e-12);
  EXPECT_LT(rel(hyp2f1_euler(Rep::E2_3, 0.4, 0.6, 1.3, 0.3).value, hyp2f1_euler(Rep::E2_2, 0.4, 0.6, 1.3, 0.3).value),
            1e-11);
}

TEST(Hyp2f1Euler, AllVariantsMatchSeries) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    Complex a(0.1 + 1.2 * u(rng), 0.3 * s(rng)), b(0.1 + 1.2 * u(rng), 0.3 * s(rng));
    Complex c = std::max(a.real(), b.real()) + 0.2 + u(rng) + Complex(0.0, 0.3 * s(rng));
    Complex z = std::polar(0.2 + 3.0 * u(rng), kPi * s(rng));
    EvalResult ref = hyp2f1(a, b, c, z);
    for (Rep v : {Rep::E2_2, Rep::E2_3, Rep::E2_4, Rep::E2_5})
      EXPECT_TRUE(agree(hyp2f1_euler(v, a, b, c, z, 1e-11), ref)) << rep_name(v) << " z=" << z;
  }
}

TEST(Hyp2f1Euler, Errors) {
  EXPECT_THROW(hyp2f1_euler(Rep::E2_2, 0.4, -0.2, 1.3, 0.1), ConstraintError);
  EXPECT_THROW(hyp2f1_euler(Rep::E2_4, 1.4, 0.2, 1.3, 0.1), ConstraintError);
  EXPECT_THROW(hyp2f1_euler(Rep::E2_2, 0.4, 0.6, 1.3, 2.0), DomainError);
  EXPECT_THROW(hyp2f1_euler(Rep::H3_3, 0.4, 0.6, 1.3, 0.1), ConstraintError);
}

TEST(Moebius, IdentityAndSpecialCases) {
  MoebiusResult id = hyp2f1_moebius(MoebiusKind::phi, 1.0, 0.3, 0.5, 1.4, -0.2);
  EXPECT_LT(rel(id.integral.value, hyp2f1_euler(Rep::E2_2, 0.3, 0.5, 1.4, -0.2).value), 1e-12);
  MoebiusResult two = hyp2f1_moebius(MoebiusKind::phi, 2.0, 0.3, 0.5, 1.4, -0.2);
  Complex ref = hyp2f1(0.3, 0.5, 1.4, -0.2).value;
  EXPECT_LT(rel(two.integral.value, ref), 1e-11);
  ASSERT_TRUE(two.reduction.has_value());
  EXPECT_LT(rel(two.reduction->value, ref), 1e-12);
  // p = 1 of the reflected map is the Pfaff transformation
  Complex z(-0.7, 0.4);
  MoebiusResult pf = hyp2f1_moebius(MoebiusKind::psi, 1.0, 0.3, 0.5, 1.4, z);
  Complex pfaff = principal_pow(1.0 - z, -0.3) * hyp2f1(0.3, 1.4 - 0.5, 1.4, z / (z - 1.0)).value;
  EXPECT_LT(rel(pf.integral.value, pfaff), 1e-11);
  ASSERT_TRUE(pf.reduction.has_value());
  EXPECT_LT(rel(pf.reduction->value, pfaff), 1e-12);
}

TEST(Moebius, RandomDraws) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Complex a(1.5 * s(rng), 0.3 * s(rng)), b(0.1 + u(rng), 0.3 * s(rng));
    Complex c = b + 0.2 + u(rng);
    Complex z = std::polar(0.8 * u(rng), kPi * s(rng));
    double p = 0.6 + 2.0 * u(rng);
    EvalResult ref = hyp2f1(a, b, c, z);
    for (MoebiusKind kind : {MoebiusKind::phi, MoebiusKind::psi}) {
      MoebiusResult m = hyp2f1_moebius(kind, p, a, b, c, z, 1e-11);
      EXPECT_TRUE(agree(m.integral, ref));
      if (m.reduction) EXPECT_TRUE(agree(*m.reduction, ref));
    }
  }
  EXPECT_FALSE(hyp2f1_moebius(MoebiusKind::phi, 0.2, 0.3, 0.5, 1.4, -0.2).reduction.has_value());
  EXPECT_THROW(hyp2f1_moebius(MoebiusKind::psi, -1.0, 0.3, 0.5, 1.4, -0.2), ConstraintError);
}

TEST(H2Integral, SeriesPointAndOrigin) {
  // mpmath double series
  const Complex ref(0.96593135711812810162, 0.0);
  for (Rep f : {Rep::H3_3, Rep::H3_5, Rep::H3_7, Rep::H3_8}) {
    EvalResult r = h2_integral(f, kH2, 0.3, 0.5, 1e-11);
    EXPECT_LT(rel(r.value, ref), 1e-9) << rep_name(f);
    EXPECT_LT(rel(h2_integral(f, kH2, 0.0, 0.0).value, 1.0), 1e-9) << rep_name(f);
  }
}

TEST(H2Integral, ContinuationOutsideSeriesRegion) {
  // mpmath quadrature of the single-integral form at (-2, 0.4)
  const Complex ref(0.84895996692478456285, 0.0);
  EvalResult r3 = h2_integral(Rep::H3_3, kH2, -2.0, 0.4);
  EvalResult r5 = h2_integral(Rep::H3_5, kH2, -2.0, 0.4);
  EvalResult r7 = h2_integral(Rep::H3_7, kH2, -2.0, 0.4);
  EvalResult r8 = h2_integral(Rep::H3_8, kH2, -2.0, 0.4);
  EXPECT_LT(rel(r3.value, ref), 1e-10);
  EXPECT_TRUE(agree(r3, r5));
  EXPECT_TRUE(agree(r3, r7));
  EXPECT_TRUE(agree(r3, r8));
}

TEST(H2Integral, MatchesSeriesOnRandomPoints) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
  for (int k = 0; k < 15; ++k) {
    H2Params p{Complex(-0.6 + 0.6 * u(rng), 0.2 * s(rng)), Complex(0.2 + 0.8 * u(rng), 0.2 * s(rng)),
               Complex(0.1 + 0.3 * u(rng), 0.2 * s(rng)), Complex(1.5 * s(rng), 0.2 * s(rng)), 0.0};
    p.e = p.b + 0.3 + u(rng) + Complex(0.0, 0.2 * s(rng));
    double rx = 0.8 * u(rng);
    Complex x = std::polar(rx, kPi * s(rng));
    Complex y = std::polar(0.7 * u(rng) / (1.0 + rx), kPi * s(rng));
    if (!in_h2_single_region(x, y) || !in_h2_transformed_region(x, y)) continue;
    EvalResult ref = h2_series(p, x, y);
    for (Rep f : {Rep::H3_3, Rep::H3_5, Rep::H3_7, Rep::H3_8})
      EXPECT_TRUE(agree(h2_integral(f, p, x, y, 1e-10), ref, 10.0, 1e-7)) << rep_name(f) << x << y;
  }
}

TEST(H2Integral, TransformationAndSymmetry) {
  H2Params p{Complex(0.2, 0.1), 0.5, 0.3, Complex(0.4, -0.2), 1.5};
  Complex x(-0.7, 0.3), y(0.35, 0.1);
  H2Params q = p;
  q.b = p.e - p.b;
  Complex xt = x / (x - 1.0), yt = y * (1.0 - x);
  for (Rep f : {Rep::H3_3, Rep::H3_5}) {
    EvalResult lhs = h2_integral(f, p, x, y);
    EvalResult rhs = h2_integral(f, q, xt, yt);
    Complex pre = principal_pow(1.0 - x, -p.a);
    EXPECT_LT(std::abs(lhs.value - pre * rhs.value),
              10.0 * (lhs.err_estimate + std::abs(pre) * rhs.err_estimate) + 1e-10);
    H2Params sw = p;
    std::swap(sw.c, sw.d);
    if (f == Rep::H3_3) EXPECT_TRUE(agree(h2_integral(f, sw, x, y), lhs));
  }
}

TEST(H2Integral, Errors) {
  EXPECT_THROW(h2_integral(Rep::H3_3, {0.2, 1.6, 0.3, 0.4, 1.5}, 0.1, 0.1), ConstraintError);
  EXPECT_THROW(h2_integral(Rep::H3_5, {0.9, 0.5, 0.3, 0.4, 1.5}, 0.1, 0.1), ConstraintError);
  EXPECT_THROW(h2_integral(Rep::H3_3, kH2, 1.5, 0.1), DomainError);
  EXPECT_THROW(h2_integral(Rep::H3_3, kH2, 0.5, -3.0), DomainError);
}

TEST(FPIntegral, SeriesPointAndOrigin) {
  const Complex ref(1.0333493308432896181, 0.0);
  for (Rep f : {Rep::FP4_6, Rep::FP_eq32, Rep::FP4_7, Rep::FP4_7a}) {
    EvalResult r = fp_integral(f, kFP, 0.2, 1.1);
    EXPECT_LT(rel(r.value, ref), 1e-8) << rep_name(f);
    EXPECT_LT(rel(fp_integral(f, kFP, 0.0, 1.0).value, 1.0), 1e-8) << rep_name(f);
  }
}

TEST(FPIntegral, SpecializationWithC1EqualA) {
  FPParams p{0.9, 0.4, 0.3, 0.9, 0.8};
  Complex y = 2.0;
  Complex closed = principal_pow(y, 1.0 - p.c2) *
                   hyp2f1(p.b2 - p.c2 + 1.0, p.a - p.c2 + 1.0, p.a + p.b2 - p.c2 + 1.0, 1.0 - y).value;
  EXPECT_LT(rel(fp_integral(Rep::FP_eq32, p, 0.0, y).value, closed), 1e-9);
}

TEST(FPIntegral, ContinuationAgreesAcrossForms) {
  // |1 - y| > 1 and outside the second series region: single-sum oracle
  FPParams p{Complex(0.9, 0.1), 0.4, 0.3, 1.2, Complex(0.8, -0.1)};
  Complex x(0.5, 0.2), y(2.6, 1.5);
  EvalResult ref = fp_value(p, x, y);
  for (Rep f : {Rep::FP4_6, Rep::FP_eq32, Rep::FP4_7, Rep::FP4_7a})
    EXPECT_TRUE(agree(fp_integral(f, p, x, y), ref, 10.0, 1e-8)) << rep_name(f);
}

TEST(FPIntegral, Errors) {
  EXPECT_THROW(fp_integral(Rep::FP4_6, {0.2, 0.4, 0.3, 1.2, 0.8}, 0.2, 1.1), ConstraintError);
  EXPECT_THROW(fp_integral(Rep::FP4_6, kFP, 0.2, -1.0), DomainError);
  EXPECT_THROW(fp_integral(Rep::FP4_6, kFP, 1.2, 1.0), DomainError);
  EXPECT_THROW(fp_integral(Rep::FP4_7a, kFP, 0.2, 0.4), NoConvergence);
  EXPECT_THROW(fp_integral(Rep::H3_3, kFP, 0.2, 1.1), ConstraintError);
}

TEST(Rewrite, FormsAgreeAndMatchFPSide) {
  const H2Params p{0.8, 0.3, 0.4, 0.5, 2.0};
  // mpmath: Gamma ratio times (-y)^{-c} F_P(...; x, -1/y) from the second double series
  const Complex ref(0.86168526797636528531, 0.0);
  EvalResult fp = h2_rewrite_fp_side(p, 0.2, -0.5);
  EXPECT_LT(rel(fp.value, ref), 1e-12);
  for (Rep f : {Rep::C4_8, Rep::C4_8a, Rep::C4_8b}) {
    EvalResult r = h2_rewrite(f, p, 0.2, -0.5);
    EXPECT_LT(rel(r.value, ref), 1e-7) << rep_name(f);
    // the H2 series at the same point is different: 1.90576204389701674113
    EXPECT_GT(std::abs(r.value - 1.90576204389701674113), 10.0 * r.err_estimate);
  }
}

TEST(Rewrite, NegativeCAndComplexPoint) {
  const H2Params p{Complex(0.8, 0.1), 0.3, -0.3, 0.5, Complex(2.0, -0.2)};
  Complex x(-0.4, 0.3), y(-1.5, 0.4);
  EvalResult fp = h2_rewrite_fp_side(p, x, y);
  EvalResult r8 = h2_rewrite(Rep::C4_8, p, x, y);
  EvalResult r8b = h2_rewrite(Rep::C4_8b, p, x, y);
  EXPECT_TRUE(agree(r8, fp, 10.0, 1e-7));
  EXPECT_TRUE(agree(r8b, r8, 10.0, 1e-8));
}

TEST(Rewrite, Errors) {
  EXPECT_THROW(h2_rewrite(Rep::C4_8, {0.8, 0.3, 0.4, 0.5, 2.0}, 0.2, 0.5), DomainError);
  EXPECT_THROW(h2_rewrite(Rep::C4_8, {0.8, 0.3, 0.4, 1.5, 2.0}, 0.2, -0.5), ConstraintError);
}
