#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hypint/contour.hpp"
#include "hypint/errors.hpp"
#include "hypint/euler.hpp"
#include "hypint/series.hpp"

using namespace hypint;

namespace {

double rel(Complex got, Complex want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

Complex beta_fn(Complex a, Complex b) { return gamma(a) * gamma(b) * rgamma(a + b); }

// Elements [first, last) of the positive inner pass: after the first
// return along the bridge, up to the next bridge segment.
std::pair<std::size_t, std::size_t> inner_pass(const ContourPath& p, std::size_t from) {
  std::size_t first = from;
  while (!(p.elements[first].kind == PathElement::Kind::segment && p.elements[first].z1 == p.bridge_start)) ++first;
  ++first;
  std::size_t last = first;
  while (last < p.elements.size() &&
         !(p.elements[last].kind == PathElement::Kind::segment && p.elements[last].z0 == p.bridge_start &&
           p.elements[last].z1.imag() == 0.0 && p.elements[last].z1.real() > p.bridge_start))
    ++last;
  return {first, last};
}

const FPParams kOlsson{1.1, 0.4, 0.3, 1.7, 0.6};

}  // namespace

TEST(DoubleLoop, PlainLoopHasTwelveClosedElements) {
  for (double base : {0.25, 0.5}) {
    LoopSpec spec;
    spec.base = base;
    ContourPath p = build_double_loop(spec);
    ASSERT_EQ(p.elements.size(), 12u);
    EXPECT_NEAR(std::abs(p.elements.front().start() - base), 0.0, 1e-15);
    EXPECT_LT(std::abs(p.elements.back().end() - p.elements.front().start()), 1e-12);
    for (std::size_t k = 1; k < p.elements.size(); ++k)
      EXPECT_LT(std::abs(p.elements[k].start() - p.elements[k - 1].end()), 1e-12);
    EXPECT_NEAR(winding_number(p.elements, 0.0), 0.0, 1e-9);
    EXPECT_NEAR(winding_number(p.elements, 1.0), 0.0, 1e-9);
  }
}

TEST(DoubleLoop, GroupedPointSharesTheInnerLoopWithZero) {
  LoopSpec spec;
  spec.grouped = -0.4;
  ContourPath p = build_double_loop(spec);
  auto [first, last] = inner_pass(p, 0);
  std::vector<PathElement> pass(p.elements.begin() + first, p.elements.begin() + last);
  EXPECT_NEAR(winding_number(pass, -0.4), 1.0, 1e-9);
  EXPECT_NEAR(winding_number(pass, 0.0), 1.0, 1e-9);
  EXPECT_NEAR(winding_number(pass, 1.0), 0.0, 1e-9);
  EXPECT_NEAR(winding_number(p.elements, -0.4), 0.0, 1e-9);
  EXPECT_LT(std::abs(p.elements.back().end() - p.elements.front().start()), 1e-12);
}

TEST(DoubleLoop, GroupedComplexPointOnTheRight) {
  LoopSpec spec;
  spec.grouped = Complex(0.3, 0.35);
  spec.epsilon = 0.15;
  ContourPath p = build_double_loop(spec);
  auto [first, last] = inner_pass(p, 0);
  std::vector<PathElement> pass(p.elements.begin() + first, p.elements.begin() + last);
  EXPECT_NEAR(winding_number(pass, Complex(0.3, 0.35)), 1.0, 1e-9);
  EXPECT_NEAR(winding_number(pass, 0.0), 1.0, 1e-9);
  EXPECT_LT(std::abs(p.elements.back().end() - p.elements.front().start()), 1e-12);
}

TEST(DoubleLoop, GeometryErrors) {
  LoopSpec far;
  far.excluded = {2.0};
  EXPECT_NO_THROW(build_double_loop(far));
  LoopSpec near;
  near.excluded = {1.2};
  EXPECT_THROW(build_double_loop(near), GeometryError);
  near.shrink_to_fit = true;
  ContourPath fitted = build_double_loop(near);
  EXPECT_LT(fitted.epsilon, 0.25);
  LoopSpec wide;
  wide.epsilon = 0.6;
  EXPECT_THROW(build_double_loop(wide), GeometryError);
  LoopSpec crowded;
  crowded.grouped = 0.6;
  EXPECT_THROW(build_double_loop(crowded), GeometryError);
  LoopSpec off_bridge;
  off_bridge.base = 0.9;
  EXPECT_THROW(build_double_loop(off_bridge), GeometryError);
}

TEST(DoubleLoop, TrackedArgumentsReturnAfterTheLoop) {
  for (auto g : {std::optional<Complex>{}, std::optional<Complex>{Complex(-0.7, 0.2)},
                 std::optional<Complex>{Complex(0.3, 0.0)}}) {
    LoopSpec spec;
    spec.grouped = g;
    spec.epsilon = 0.2;
    auto trace = trace_loop(build_double_loop(spec), 8);
    EXPECT_NEAR(trace.front().arg_u, 0.0, 1e-15);
    EXPECT_NEAR(trace.back().arg_u, 0.0, 1e-8);
    EXPECT_NEAR(trace.back().arg_1mu, 0.0, 1e-8);
  }
}

TEST(DoubleLoop, CsvDumpSchema) {
  std::ostringstream out;
  write_loop_csv(out, build_double_loop({}), 4);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "element,s,re_u,im_u,arg_u,arg_1mu");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 12 * 5);
}

TEST(BetaLoop, KnownValues) {
  EXPECT_LT(rel(beta_double_loop(0.5, 0.5).value, kPi), 1e-13);
  EXPECT_LT(std::abs(beta_double_loop(-0.5, 0.5).value), 1e-13);
  EXPECT_LT(rel(beta_double_loop(0.3, 0.9).value, 3.48179625049913872024), 1e-13);
  Complex a(-1.3, 0.2), b(0.4, -0.1);
  EXPECT_LT(rel(beta_double_loop(a, b).value, beta_fn(a, b)), 1e-11);
}

TEST(BetaLoop, IntegerGuard) {
  EXPECT_THROW(beta_double_loop(2.0, 0.5), DegenerateError);
  EXPECT_THROW(beta_double_loop(0.5, -1.0 + 1e-8), DegenerateError);
}

TEST(BetaLoop, PrefactorStaysBoundedNearIntegers) {
  for (double d : {1e-2, 1e-3}) {
    Complex a = 1.0 + d, b = 0.7;
    EXPECT_LT(rel(beta_double_loop(a, b).value, beta_fn(a, b)), 1e-9) << d;
  }
}

TEST(BetaLoop, RadiusAndBasePointInvariance) {
  Complex a(-1.3, 0.2), b(2.4, -0.1);
  EvalResult ref = beta_double_loop(a, b);
  for (double eps : {0.15, 0.25, 0.35}) {
    LoopSpec spec;
    spec.epsilon = eps;
    EvalResult r = beta_double_loop(a, b, spec);
    EXPECT_LE(std::abs(r.value - ref.value), r.err_estimate + ref.err_estimate) << eps;
  }
  for (double base : {0.3, 0.5, 0.7}) {
    LoopSpec spec;
    spec.base = base;
    EvalResult r = beta_double_loop(a, b, spec);
    EXPECT_LE(std::abs(r.value - ref.value), r.err_estimate + ref.err_estimate) << base;
  }
}

TEST(Hyp2f1Loop, OutsideMatchesSeries) {
  EvalResult r = hyp2f1_loop(LoopMode::outside, 0.4, 0.6, 1.3, -0.5);
  EXPECT_LT(rel(r.value, 0.924915010644128418212), 1e-13);
  Complex a(0.7, 0.2), b(-1.4, 0.1), c(0.6, -0.3), z(0.3, -0.5);
  EXPECT_LT(rel(hyp2f1_loop(LoopMode::outside, a, b, c, z).value, hyp2f1(a, b, c, z).value), 1e-11);
}

TEST(Hyp2f1Loop, InsideMatchesConnectionTerm) {
  EvalResult r = hyp2f1_loop(LoopMode::inside, 0.4, 0.6, 1.3, -3.0);
  EXPECT_LT(rel(r.value, 1.64386115080736510827), 1e-13);
  Complex a(0.3, 0.1), b(1.7, -0.2), c(2.6, 0.1), z(-1.2, 2.0);
  EXPECT_LT(rel(hyp2f1_loop(LoopMode::inside, a, b, c, z).value, hyp2f1_connection_term(a, b, c, z).value), 1e-11);
}

TEST(Hyp2f1Loop, ShrunkFormClosesTheThreeTermRelation) {
  for (double z : {-1.6, -3.0, -12.0}) {
    EvalResult loop = hyp2f1_loop(LoopMode::inside, 0.4, 0.6, 1.3, z);
    EvalResult shrunk = hyp2f1_shrunk(0.4, 0.6, 1.3, z);
    EXPECT_LT(rel(shrunk.value, loop.value), 1e-11) << z;
    Complex two_term = hyp2f1(0.4, 0.6, 1.3, z).value - gamma(Complex(1.3)) * gamma(Complex(-0.2)) * rgamma(0.4) * rgamma(0.7) *
                                                            std::pow(-z, -0.6) *
                                                            hyp2f1(0.6, 0.3, 1.2, 1.0 / z).value;
    EXPECT_LT(rel(two_term, loop.value), 1e-12) << z;
  }
  EXPECT_THROW(hyp2f1_shrunk(1.2, 0.6, 1.3, -2.0), ConstraintError);
}

TEST(Hyp2f1Loop, GuardsAndDomains) {
  EXPECT_THROW(hyp2f1_loop(LoopMode::outside, 0.4, 1.0, 1.3, -0.5), DegenerateError);
  EXPECT_THROW(hyp2f1_loop(LoopMode::inside, 0.4, 1.4, 1.3, -3.0), DegenerateError);
  EXPECT_THROW(hyp2f1_loop(LoopMode::inside, 0.4, 0.6, 1.3, 2.0), DomainError);
  EXPECT_THROW(hyp2f1_loop(LoopMode::outside, 0.4, 0.6, 1.3, 1.6), GeometryError);
}

TEST(Hyp2f1Loop, RadiusInvariance) {
  EvalResult ref = hyp2f1_loop(LoopMode::outside, 0.4, -0.6, 1.3, Complex(-0.5, 0.4));
  for (double eps : {0.15, 0.35}) {
    LoopSpec spec;
    spec.epsilon = eps;
    EvalResult r = hyp2f1_loop(LoopMode::outside, 0.4, -0.6, 1.3, Complex(-0.5, 0.4), spec);
    EXPECT_LE(std::abs(r.value - ref.value), r.err_estimate + ref.err_estimate);
  }
}

TEST(KitaLoop, MatchesSeriesOnOmega1) {
  const H2Params p{0.7, 0.4, 0.3, 0.5, 1.6};
  EXPECT_LT(rel(kita_h2_loop(p, 0.2, 0.1).value, 0.992683511554693175208), 1e-12);
  EXPECT_LT(rel(kita_h2_loop(p, 0.0, 0.0).value, 1.0), 1e-12);
  const H2Params q{Complex(-1.4, 0.2), Complex(0.6, -0.1), 0.8, Complex(0.9, 0.1), 2.7};
  for (auto [x, y] : {std::pair<Complex, Complex>{0.5, -0.6}, {-0.6, 0.5}, {Complex(0.2, 0.3), -0.3}}) {
    EXPECT_LT(rel(kita_h2_loop(q, x, y).value, h2_series(q, x, y).value), 1e-10) << x << y;
  }
}

TEST(KitaLoop, InnerQuadratureAgrees) {
  const H2Params p{0.7, 0.4, 0.3, 0.5, 1.6};
  EvalResult a = kita_h2_loop(p, 0.3, -0.4);
  EvalResult b = kita_h2_loop(p, 0.3, -0.4, {}, 1e-11, {true});
  EXPECT_LE(std::abs(a.value - b.value), a.err_estimate + b.err_estimate);
  EXPECT_LT(rel(a.value, b.value), 1e-10);
}

TEST(KitaLoop, RadiusInvariance) {
  const H2Params p{-0.6, 0.4, 0.3, 0.5, 1.6};
  EvalResult ref = kita_h2_loop(p, -0.4, 0.3);
  for (double eps : {0.15, 0.35}) {
    LoopSpec spec;
    spec.epsilon = eps;
    EvalResult r = kita_h2_loop(p, -0.4, 0.3, spec);
    EXPECT_LE(std::abs(r.value - ref.value), r.err_estimate + ref.err_estimate) << eps;
  }
}

TEST(KitaLoop, ContinuesOutsideOmega1) {
  const H2Params p{0.7, 0.4, 0.3, 0.5, 1.6};
  for (auto [x, y] : {std::pair<double, double>{0.4, -0.85}, {0.3, 0.95}, {-1.5, -0.3}}) {
    ASSERT_FALSE(region_contains(Region::Omega1, x, y));
    LoopSpec spec;
    spec.shrink_to_fit = true;
    EvalResult r = kita_h2_loop(p, x, y, spec);
    EvalResult s = h2_integral(Rep::H3_3, p, x, y);
    EXPECT_LT(rel(r.value, s.value), 1e-9) << x << " " << y;
  }
}

TEST(KitaLoop, Errors) {
  EXPECT_THROW(kita_h2_loop({1.0, 0.4, 0.3, 0.5, 1.6}, 0.2, 0.1), DegenerateError);
  EXPECT_THROW(kita_h2_loop({0.7, 0.4, 0.3, -0.5, 1.6}, 0.2, 0.1), ConstraintError);
  EXPECT_THROW(kita_h2_loop({0.7, 0.4, 0.3, 0.5, 1.6}, 0.9, 0.1), GeometryError);
}

TEST(OlssonLoop, AllFourHoleRoutings) {
  struct Case {
    double x, y;
    Complex want;
    int id;
  };
  const Case cases[] = {
      {-0.5, 2.0, 1.68736221826504612517, 1},
      {0.3, 1.5, 2.42880227134201176608, 2},
      {-0.3, -4.0, Complex(0.285665452267761034736, -0.39318476380456728898), 3},
      {0.4, -3.0, Complex(0.349023271154952003632, -0.480389320241383985853), 4},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(olsson_case(c.x, c.y), c.id);
    EXPECT_LT(rel(olsson_I(kOlsson, c.x, c.y).value, c.want), 1e-12) << c.id;
  }
  EXPECT_THROW(olsson_I(kOlsson, 0.5, 0.3), DomainError);
}

TEST(OlssonLoop, VanishingB2GivesGaussFunction) {
  FPParams p = kOlsson;
  p.b2 = 0.0;
  EXPECT_LT(rel(olsson_I(p, -0.5, 2.0).value, hyp2f1(p.a, p.b1, p.c1, -0.5).value), 1e-12);
}

TEST(OlssonLoop, InnerFunctionCollapsesWhenC1EqualsA) {
  FPParams p = kOlsson;
  p.c1 = p.a;
  for (double y : {2.0, 3.5}) {
    Complex want = std::pow(y, -0.3) * hyp2f1(p.b2, p.b2 - p.c2 + 1.0, 1.0 - p.a + p.b2, 1.0 / y).value;
    EXPECT_LT(rel(olsson_I(p, 0.0, y).value, want), 1e-12) << y;
  }
}

TEST(OlssonLoop, CaseOneCheckpointsFollowTheArgumentTable) {
  const double x = -0.5, y = 2.0;
  ContourPath path = olsson_contour(x, y);
  auto trace = trace_loop(path, 16);
  const double g = 1.0 / (1.0 - y);
  auto w = [&](Complex u) { return (1.0 - 1.0 / u) / y; };

  // Bridge passes: elements 0, 3, then after the positive inner pass.
  auto [k1, k2] = inner_pass(path, 0);
  auto [k3, k4] = inner_pass(path, k2);
  struct Expect {
    std::size_t element;
    double arg_u, arg_1mu;
  };
  const Expect bridge[] = {{0, 0.0, 0.0}, {3, 0.0, kTwoPi}, {k2, kTwoPi, kTwoPi}, {k3 - 1, kTwoPi, 0.0}};
  for (const auto& e : bridge) {
    int seen = 0;
    for (const auto& s : trace) {
      if (s.element != e.element) continue;
      ++seen;
      EXPECT_EQ(s.u.imag(), 0.0);
      EXPECT_NEAR(s.arg_u, e.arg_u, 1e-8);
      EXPECT_NEAR(s.arg_1mu, e.arg_1mu, 1e-8);
      EXPECT_LT(w(s.u).real(), 0.0);
    }
    EXPECT_GT(seen, 0);
  }
  // Far end of each inner pass, on the real axis left of (1-y)^{-1}.
  const std::pair<std::size_t, std::size_t> passes[] = {{k1, k2}, {k3, k4}};
  const double far_arg_1mu[] = {kTwoPi, 0.0};
  for (int k = 0; k < 2; ++k) {
    const LoopSample* far = nullptr;
    for (const auto& s : trace)
      if (s.element >= passes[k].first && s.element < passes[k].second && (!far || s.u.real() < far->u.real()))
        far = &s;
    ASSERT_NE(far, nullptr);
    EXPECT_NEAR(far->u.real(), g - path.epsilon, 1e-12);
    EXPECT_NEAR(far->arg_u, kPi, 1e-8);
    EXPECT_NEAR(far->arg_1mu, far_arg_1mu[k], 1e-8);
    // Middle third of the straight sides: w in (1, inf) + i0 above, - i0 below.
    for (const auto& s : trace) {
      if (s.element < passes[k].first || s.element >= passes[k].second) continue;
      if (!(s.u.real() > 2.0 * g / 3.0 && s.u.real() < g / 3.0)) continue;
      const Complex ws = w(s.u);
      EXPECT_GT(ws.real(), 1.0);
      EXPECT_EQ(ws.imag() > 0.0, s.u.imag() > 0.0);
    }
  }
}

TEST(ShrinkCase1, PartsMatchClosedFormsAndTheLoop) {
  const double x = -0.5, y = 2.0;
  ShrinkParts s = shrink_case1(kOlsson, x, y);
  EXPECT_LT(rel(s.i1.value, 0.620647879402385806148), 1e-12);
  EXPECT_LT(rel(s.i1_closed.value, 0.620647879402385806148), 1e-12);
  EXPECT_LT(rel(s.i2.value, 1.06671433886266031902), 1e-12);
  EXPECT_LT(rel(s.i2_closed.value, 1.06671433886266031902), 1e-12);
  EvalResult loop = olsson_I(kOlsson, x, y);
  EXPECT_LT(rel(s.i1_closed.value + s.i2_closed.value, loop.value), 1e-11);
}

TEST(ShrinkCase1, SpecializationGivesThreeGaussTerms) {
  FPParams p{0.9, 0.5, Complex(0.35, 0.1), 0.9, 0.45};
  const double y = 2.7;
  const Complex a = p.a, b2 = p.b2, c2 = p.c2;
  Complex whole = std::pow(Complex(y), -b2) * hyp2f1(b2, b2 - c2 + 1.0, 1.0 - a + b2, 1.0 / y).value;
  Complex t1 = gamma(a) * gamma(a - c2 + 1.0) * rgamma(a + b2 - c2 + 1.0) * rgamma(a - b2) *
               std::pow(Complex(y), 1.0 - c2) * hyp2f1(b2 - c2 + 1.0, a - c2 + 1.0, a + b2 - c2 + 1.0, 1.0 - y).value;
  Complex t2 = gamma(b2 - a + 1.0) * gamma(a) * gamma(a - c2 + 1.0) * rgamma(b2) * rgamma(a - b2 + 1.0) *
               rgamma(b2 - c2 + 1.0) * std::pow(Complex(y - 1.0), -a) *
               std::pow(Complex(y / (y - 1.0)), 1.0 - c2) *
               hyp2f1(1.0 - b2, a - c2 + 1.0, a - b2 + 1.0, -1.0 / (y - 1.0)).value;
  EXPECT_LT(rel(t1 + t2, whole), 1e-12);
  ShrinkParts s = shrink_case1(p, 0.0, y);
  EXPECT_LT(rel(s.i1.value, t1), 1e-11);
  EXPECT_LT(rel(s.i2.value, t2), 1e-11);
  EXPECT_LT(rel(olsson_I(p, 0.0, y).value, whole), 1e-11);
}

TEST(ShrinkCase1, Errors) {
  EXPECT_THROW(shrink_case1(kOlsson, 0.3, 2.0), DomainError);
  EXPECT_THROW(shrink_case1(kOlsson, -0.5, 1.2), DomainError);
  FPParams bad = kOlsson;
  bad.c2 = 2.5;
  EXPECT_THROW(shrink_case1(bad, -0.5, 2.0), ConstraintError);
}
