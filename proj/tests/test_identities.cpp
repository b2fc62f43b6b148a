#include <gtest/gtest.h>

#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hypint/contour.hpp"
#include "hypint/errors.hpp"
#include "hypint/identities.hpp"
#include "hypint/series.hpp"

using namespace hypint;

TEST(Registry, IdsAreUniqueAndFindable) {
  const auto& reg = identity_registry();
  EXPECT_EQ(reg.size(), 19u);
  std::set<std::string> ids;
  for (const auto& s : reg) {
    EXPECT_TRUE(ids.insert(s.id).second) << s.id;
    EXPECT_EQ(find_identity(s.id), &s);
    EXPECT_GT(s.arity, 0u);
  }
  EXPECT_EQ(find_identity("no-such-identity"), nullptr);
  EXPECT_THROW(check_identity("no-such-identity", {}), DomainError);
}

TEST(CheckIdentity, GaussAtCEqualsA) {
  ResidualRecord r = check_identity("gauss-at-c-equals-a", {{1.0, 2.0}, 0.5, 0.0});
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_NEAR(r.rhs.real(), 4.0, 1e-14);
  EXPECT_TRUE(r.pass);
}

TEST(CheckIdentity, EulerTransformAtFixedPoint) {
  ResidualRecord r = check_identity("euler-transform", {{0.3, 0.5, 1.4}, -0.7, 0.0});
  EXPECT_TRUE(r.pass) << r.residual << " " << r.threshold;
  EXPECT_LT(r.residual, 1e-13);
}

TEST(CheckIdentity, OlssonThreeTermAtCaseOnePoint) {
  ResidualRecord r = check_identity("olsson-three-term", {{1.1, 0.4, 0.3, 1.7, 0.6}, -0.5, 2.0});
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.residual, 1e-6);
  EXPECT_NEAR(r.lhs.real(), olsson_I({1.1, 0.4, 0.3, 1.7, 0.6}, -0.5, 2.0).value.real(), 1e-12);
}

TEST(CheckIdentity, ThresholdFollowsPolicy) {
  const IdentitySpec& spec = *find_identity("f2-double-integral");
  ResidualRecord r = check_identity(spec, {{0.4, 0.7, 0.6, 1.9, 1.5}, 0.3, 0.4});
  EXPECT_DOUBLE_EQ(r.threshold, std::max(10.0 * r.combined, spec.floor));
  EXPECT_EQ(r.pass, r.residual < r.threshold);
  EXPECT_TRUE(r.pass);
}

TEST(CheckIdentity, ObstructedPointsAreSkipped) {
  // b - a integer trips the loop prefactor guard; Re a > 1 breaks the
  // interval integrals; a wrong arity cannot be evaluated at all.
  IdentityPoint degenerate{{0.4, 1.4, 2.3}, -3.0, 0.0};
  IdentityPoint constraint{{1.2, 0.6, 1.3}, -2.0, 0.0};
  EXPECT_THROW(check_identity("gauss-loop-shrink", degenerate), SkippedError);
  EXPECT_THROW(check_identity("gauss-loop-shrink", constraint), SkippedError);
  EXPECT_THROW(check_identity("gauss-loop-shrink", {{0.4, 0.6}, -2.0, 0.0}), SkippedError);

  IdentityReport rep = run_points(*find_identity("gauss-loop-shrink"), {degenerate, constraint}, 1e-10);
  EXPECT_EQ(rep.status, Status::skipped);
  EXPECT_EQ(rep.skipped, 2);
  EXPECT_EQ(rep.samples, 0);
  EXPECT_TRUE(rep.failures.empty());
}

TEST(CheckIdentity, DomainErrorsAreFailures) {
  // z on the cut of 2F1 is outside every sampler's domain.
  IdentityReport rep = run_points(*find_identity("euler-transform"), {{{0.3, 0.5, 1.4}, 2.0, 0.0}}, 1e-10);
  EXPECT_EQ(rep.status, Status::fail);
  ASSERT_EQ(rep.failures.size(), 1u);
  EXPECT_TRUE(std::isinf(rep.failures[0].second));
}

TEST(Samplers, FPDrawsSatisfyTheIntegralConstraints) {
  for (const char* id : {"fp-f1-integral", "fp-gauss-product-series"}) {
    const IdentitySpec& spec = *find_identity(id);
    Sampler s(7);
    for (int k = 0; k < 300; ++k) {
      auto pt = spec.sample(s);
      if (!pt) continue;
      FPParams p{pt->params[0], pt->params[1], pt->params[2], pt->params[3], pt->params[4]};
      for (Complex v : {p.a, p.a - p.b2, p.b2 + p.c1 - p.a, p.b2 - p.c2 + 1.0, p.c1 + p.c2 - p.a - 1.0})
        EXPECT_GT(v.real(), 0.05);
      for (Complex v : pt->params) EXPECT_LT(std::abs(v.imag()), 1.0);
      EXPECT_LT(std::abs(pt->x), 0.7);
      EXPECT_GT(pt->y.real(), 0.3);
    }
  }
}

TEST(Samplers, OlssonDrawsAreCaseOneWithShrinkConstraints) {
  const IdentitySpec& spec = *find_identity("olsson-three-term");
  Sampler s(11);
  for (int k = 0; k < 300; ++k) {
    auto pt = spec.sample(s);
    if (!pt) continue;
    EXPECT_EQ(olsson_case(pt->x, pt->y), 1);
    Complex a = pt->params[0], b2 = pt->params[2], c1 = pt->params[3], c2 = pt->params[4];
    for (Complex v : {b2 + c1 - a, a, a - c2 + 1.0, c1 + c2 - a - b2}) EXPECT_GT(v.real(), 0.05);
  }
}

TEST(Samplers, TransformDrawsKeepBothPointsInOmega1) {
  const IdentitySpec& spec = *find_identity("h2-transform");
  Sampler s(3);
  for (int k = 0; k < 300; ++k) {
    auto pt = spec.sample(s);
    if (!pt) continue;
    EXPECT_TRUE(region_contains(Region::Omega1, pt->x, pt->y));
    EXPECT_TRUE(region_contains(Region::Omega1, pt->x / (pt->x - 1.0), pt->y * (1.0 - pt->x)));
  }
}

TEST(Samplers, RejectNearIntegerDegeneracies) {
  const IdentitySpec& spec = *find_identity("gauss-loop-shrink");
  Sampler s(5);
  for (int k = 0; k < 500; ++k) {
    auto pt = spec.sample(s);
    if (!pt) continue;
    EXPECT_GE(integer_distance(pt->params[1] - pt->params[0]), 1e-3);
    EXPECT_GE(integer_distance(pt->params[2] - pt->params[1]), 1e-3);
  }
}

TEST(Suite, FastSuitePassesAndIsDeterministic) {
  auto first = run_suite(Suite::fast, 42);
  auto second = run_suite(Suite::fast, 42);
  ASSERT_EQ(first.size(), identity_registry().size() + 1);
  for (const auto& r : first) {
    EXPECT_EQ(r.status, Status::pass) << r.id << " " << r.max_rel_residual;
    EXPECT_EQ(r.samples, 10) << r.id;
    EXPECT_EQ(r.status == Status::pass, r.failures.empty());
  }
  EXPECT_EQ(format_reports(first, ReportFormat::machine), format_reports(second, ReportFormat::machine));
  EXPECT_NE(format_reports(first, ReportFormat::machine),
            format_reports(run_suite(Suite::fast, 43), ReportFormat::machine));
}

TEST(Suite, SameSeedSamePoints) {
  const IdentitySpec& spec = *find_identity("riemann-liouville-lemma");
  Sampler s1(99), s2(99);
  for (int k = 0; k < 20; ++k) {
    auto p1 = spec.sample(s1), p2 = spec.sample(s2);
    ASSERT_EQ(p1.has_value(), p2.has_value());
    if (!p1) continue;
    EXPECT_EQ(p1->params, p2->params);
    EXPECT_EQ(p1->x, p2->x);
  }
}

TEST(Reports, TextAndMachineFormats) {
  IdentityReport r;
  r.id = "euler-transform";
  r.samples = 10;
  r.max_rel_residual = 1.234567e-14;
  r.status = Status::pass;
  IdentityReport f = r;
  f.id = "pfaff-transform";
  f.status = Status::fail;
  f.max_rel_residual = std::numeric_limits<double>::infinity();

  std::string text = format_reports({r}, ReportFormat::text);
  EXPECT_EQ(text, "id=euler-transform samples=10 max_rel_residual=1.23457e-14 status=pass\n");

  std::istringstream machine(format_reports({r, f}, ReportFormat::machine));
  std::string line;
  std::getline(machine, line);
  auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j.size(), 4u);
  EXPECT_EQ(j["id"], "euler-transform");
  EXPECT_EQ(j["samples"], 10);
  EXPECT_NEAR(j["max_rel_residual"].get<double>(), 1.23457e-14, 1e-20);
  EXPECT_EQ(j["status"], "pass");
  std::getline(machine, line);
  EXPECT_TRUE(std::regex_search(line, std::regex("\"max_rel_residual\": inf")));
}

TEST(Discrepancy, ClassicalIntegralIsFPNotH2) {
  auto samples = discrepancy_check(10, 42);
  ASSERT_EQ(samples.size(), 10u);
  for (const auto& d : samples) {
    double x = d.point.x.real(), y = d.point.y.real();
    EXPECT_TRUE(x > -0.9 && x < 0.9);
    EXPECT_TRUE(y > -0.95 && y < -0.1);
    EXPECT_LT(d.classical_vs_fp, 1e-6);
    EXPECT_GT(d.classical_vs_loop, 10.0 * d.loop_estimate);
    EXPECT_TRUE(d.pass);
  }
  EXPECT_EQ(discrepancy_report(10, 42).status, Status::pass);
}
