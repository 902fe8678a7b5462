#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cknlab/errors.hpp"
#include "cknlab/inequality_lab.hpp"
#include "oracles.hpp"

using namespace ckn;

namespace {

ReciprocalExponent S(double s) { return ReciprocalExponent(s); }

CknTuple tuple(int n, double sp, double sr = 0.0, double a = 0.0, double c = 0.0,
               double lambda = 0.0, double theta = 1.0) {
  CknTuple t;
  t.n = n;
  t.s_p = S(sp);
  t.s_r = S(sr);
  t.a = a;
  t.c = c;
  t.lambda = lambda;
  t.theta = theta;
  return t;
}

struct Instance {
  InequalityKind kind;
  CknTuple given;
  LabConfig cfg;
};

std::vector<Instance> one_per_kind() {
  std::vector<Instance> out;
  LabConfig base;
  out.push_back({InequalityKind::ClassicalHardy, tuple(3, 0.5), base});
  out.push_back({InequalityKind::LocalizedHardy, tuple(3, 0.5, 0.0, 0.5), base});
  LabConfig semi = base;
  semi.holder_part = HolderPart::SeminormOnly;
  out.push_back({InequalityKind::GeneralizedSobolev, tuple(3, 0.25), semi});
  out.push_back({InequalityKind::Interpolation, tuple(3, 0.5, -1.0 / 6.0, 0.2, -0.1, 0.5), base});
  CknTuple hs = tuple(3, 0.5);
  hs.s_q = S(1.0 / 3.0);
  out.push_back({InequalityKind::HardySobolev, hs, base});
  out.push_back({InequalityKind::GeneralizedCKN, tuple(3, 0.5, 0.25, 0.2, 0.1, 0.3, 0.6), base});
  out.push_back({InequalityKind::EndpointLog, tuple(3, 1.0 / 3.0, 0.0, 0.3), base});
  out.push_back({InequalityKind::EndpointCKN, tuple(3, 1.0 / 3.0, 0.25, 0.1, 0.0, 0.5, 0.5), base});
  out.push_back({InequalityKind::TrudingerMoser, tuple(3, 1.0 / 3.0), base});
  out.push_back({InequalityKind::KMethod, tuple(3, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5), base});
  return out;
}

}  // namespace

TEST_CASE("tuple derivation anchors") {
  SUBCASE("Hardy reduction of the generalized CKN tuple") {
    const auto t = derive_tuple(InequalityKind::GeneralizedCKN, tuple(3, 0.5, 0.25, 0.0, 0.7, 0.0, 1.0));
    CHECK(t.s_q.value() == t.s_p.value());
    CHECK(t.b == 1.0);
  }
  SUBCASE("Hardy-Sobolev: Sobolev, Hardy and Morrey anchors at a = 0") {
    for (int n : {2, 3, 4}) {
      for (double p : {1.5, 2.0, 2.5}) {
        if (p >= n) continue;
        CknTuple g = tuple(n, 1.0 / p);
        g.s_q = sobolev_conjugate(S(1.0 / p), n);
        CHECK(derive_tuple(InequalityKind::HardySobolev, g).b == doctest::Approx(0.0));
        g.s_q = S(1.0 / p);
        CHECK(derive_tuple(InequalityKind::HardySobolev, g).b == doctest::Approx(1.0));
      }
      for (double p : {n + 0.5, 2.0 * n, 10.0 * n}) {
        CknTuple g = tuple(n, 1.0 / p);
        g.s_q = S(0.0);
        CHECK(derive_tuple(InequalityKind::HardySobolev, g).b == doctest::Approx(1.0 - n / p));
      }
    }
  }
  SUBCASE("Sobolev target") {
    const auto t = derive_tuple(InequalityKind::GeneralizedSobolev, tuple(2, 0.25, 0.0, 0.4));
    CHECK(t.s_q.value() == doctest::Approx(-0.25));
    CHECK(t.b == 0.0);
    CHECK(t.a == 0.0);
  }
  SUBCASE("endpoint CKN at theta = 1 lands on the Sobolev-Hardy edge") {
    const auto t = derive_tuple(InequalityKind::EndpointCKN, tuple(2, 0.5, 0.25, 0.3, 0.0, 0.4, 1.0));
    CHECK(t.s_q.value() == doctest::Approx(0.4 / 2.0));
    CHECK(t.b == doctest::Approx(0.3 + 0.4));
    CHECK(compatibility_residual(derive_tuple(InequalityKind::GeneralizedCKN,
                                              tuple(2, 0.3, 0.6, 0.1, 0.2, 0.5, 0.5))) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("localized Hardy bound") {
  CHECK(localized_hardy_bound(make_domain(2, 1.0, 3.0), 0.0, 2.0) == doctest::Approx(2.0));
  CHECK(localized_hardy_bound(make_domain(2, 2.0, 3.0), 0.0, 1.0) == doctest::Approx(0.5));
  CHECK(localized_hardy_bound(make_domain(2, 1.0, 2.0), 1.0, 2.0) == doctest::Approx(2.0));
  CHECK(localized_hardy_bound(make_domain(2, 1.0, 2.0), -1.0, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(localized_hardy_bound(make_domain(2, 1.0, 2.0), 0.0, 0.5), DomainError);
}

TEST_CASE("interpolation at lambda = 0 has ratio exactly 1") {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto u = make_radial_bump(d, 1.0);
  const auto t = derive_tuple(InequalityKind::Interpolation, tuple(2, 0.5, 0.25, 0.3, 0.7, 0.0));
  const auto r = evaluate_instance(InequalityKind::Interpolation, t, u, d, LabConfig{});
  CHECK(r.empirical_ratio == 1.0);
  CHECK(r.verdict == Verdict::Bounded);
  CHECK(r.rhs_factors.size() == 1);
}

TEST_CASE("localized Hardy on [1,2]: lhs below the unweighted L2 norm") {
  const auto d = make_domain(2, 1.0, 2.0);
  const auto u = make_radial_bump(d, 1.0);
  const auto t = derive_tuple(InequalityKind::LocalizedHardy, tuple(2, 0.5));
  const auto r = evaluate_instance(InequalityKind::LocalizedHardy, t, u, d, LabConfig{});
  const double l2 = oracle::radial_lp(2, 1.0, 2.0, 0.0, 2.0, [](double s) { return oracle::bump(s, 1.0, 2.0, 1.0); });
  CHECK(r.lhs <= l2);
  CHECK(r.analytic_upper_bound.has_value());
  CHECK(*r.analytic_upper_bound == doctest::Approx(1.0));
  CHECK(r.empirical_ratio <= *r.analytic_upper_bound);
  CHECK(r.verdict == Verdict::Bounded);
}

TEST_CASE("generalized CKN at (theta 1, lambda 0, a 0) reproduces classical Hardy") {
  for (int n : {3, 4}) {
    const auto d = make_domain(n, 1.0, 5.0);
    for (const auto& u : {make_radial_bump(d, 1.0), make_power_bump(d, -0.7, 0.2),
                          make_angular(make_radial_bump(d, 2.0), 1)}) {
      const auto tc = derive_tuple(InequalityKind::GeneralizedCKN, tuple(n, 0.5, 0.3, 0.0, 0.4, 0.0, 1.0));
      const auto th = derive_tuple(InequalityKind::ClassicalHardy, tuple(n, 0.5));
      const auto rc = evaluate_instance(InequalityKind::GeneralizedCKN, tc, u, d, LabConfig{});
      const auto rh = evaluate_instance(InequalityKind::ClassicalHardy, th, u, d, LabConfig{});
      CHECK(rc.empirical_ratio == doctest::Approx(rh.empirical_ratio).epsilon(1e-10));
      CHECK(rc.lhs == doctest::Approx(rh.lhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: every ratio is invariant under u -> c u") {
  const auto d = make_domain(3, 1.0, 3.0);
  for (const auto& inst : one_per_kind()) {
    const auto t = derive_tuple(inst.kind, inst.given);
    for (const auto& u : {make_radial_bump(d, 1.5), make_power_bump(d, -0.4, 0.25)}) {
      const auto r0 = evaluate_instance(inst.kind, t, u, d, inst.cfg);
      CAPTURE(to_string(inst.kind));
      REQUIRE(r0.empirical_ratio > 0.0);
      for (double c : {2.5, -0.3, 1e3}) {
        const auto rc = evaluate_instance(inst.kind, t, scaled(u, c), d, inst.cfg);
        CHECK(rc.empirical_ratio == doctest::Approx(r0.empirical_ratio).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("property: L-L interpolation is Hölder's inequality") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const int n = 2 + i % 3;
    const auto d = make_domain(n, 0.5 + U(rng), 3.0 + 3.0 * U(rng));
    const auto u = (i % 2) ? make_radial_bump(d, 0.3 + 5.0 * U(rng))
                           : make_power_bump(d, -1.5 + 2.0 * U(rng), 0.05 + 0.4 * U(rng));
    const auto t = derive_tuple(InequalityKind::Interpolation,
                                tuple(n, 0.05 + 0.95 * U(rng), 0.05 + 0.95 * U(rng), -2.0 + 4.0 * U(rng),
                                      -2.0 + 4.0 * U(rng), U(rng)));
    const auto r = evaluate_instance(InequalityKind::Interpolation, t, u, d, LabConfig{});
    CHECK(r.empirical_ratio <= 1.0 + 5.0 * r.ratio_err);
    CHECK(r.verdict == Verdict::Bounded);
  }
}

TEST_CASE("inadmissible tuples are refused with the violated constraint") {
  const auto d = make_domain(3, 1.0, 2.0);
  const auto u = make_radial_bump(d, 1.0);
  const auto t = derive_tuple(InequalityKind::GeneralizedCKN, tuple(3, 1.0 / 3.0, 0.5, 0.0, 0.0, 0.5, 0.5));
  try {
    evaluate_instance(InequalityKind::GeneralizedCKN, t, u, d, LabConfig{});
    FAIL("expected AdmissibilityError");
  } catch (const AdmissibilityError& e) {
    REQUIRE_FALSE(e.violations().empty());
    CHECK(e.violations().front().constraint == "1/p = 1/n excluded");
  }
  // support outside the evaluation domain
  const auto wide = make_radial_bump(make_domain(3, 0.5, 2.0), 1.0);
  CHECK_THROWS_AS(evaluate_instance(InequalityKind::ClassicalHardy,
                                    derive_tuple(InequalityKind::ClassicalHardy, tuple(3, 0.5)), wide, d,
                                    LabConfig{}),
                  DomainError);
}

TEST_CASE("zero function is inconclusive, never violated") {
  const auto d = make_domain(3, 1.0, 2.0);
  const auto z = make_zero(d);
  for (const auto& inst : one_per_kind()) {
    const auto r = evaluate_instance(inst.kind, derive_tuple(inst.kind, inst.given), z, d, inst.cfg);
    CAPTURE(to_string(inst.kind));
    CHECK(r.verdict == Verdict::Inconclusive);
  }
}

TEST_CASE("claimed constants below the truth are reported as violations") {
  const auto d = make_domain(3, 1.0, 1e3);
  const auto u = make_power_bump(d, -0.5, 0.2);
  const auto t = derive_tuple(InequalityKind::ClassicalHardy, tuple(3, 0.5));
  LabConfig cfg;
  const auto honest = evaluate_instance(InequalityKind::ClassicalHardy, t, u, d, cfg);
  CHECK(honest.verdict == Verdict::Bounded);
  CHECK(*honest.analytic_upper_bound == 2.0);
  cfg.claimed_constant = 0.1;
  const auto r = evaluate_instance(InequalityKind::ClassicalHardy, t, u, d, cfg);
  CHECK(r.verdict == Verdict::Violated);
  CHECK(*r.analytic_upper_bound == 0.1);
}

TEST_CASE("Trudinger-Moser check") {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto v = make_radial_bump(d, 1.0);
  const auto tm = trudinger_moser_check(v, d, {0.0, 0.5, 1.0, 2.0, 4.0}, LabConfig{});
  CHECK(tm.integrals.front() == doctest::Approx(d.volume()).epsilon(1e-10));
  CHECK(d.volume() == doctest::Approx(8.0 * std::numbers::pi));
  CHECK(tm.monotone);
  CHECK(tm.finite);
  for (std::size_t i = 1; i < tm.integrals.size(); ++i) CHECK(tm.integrals[i] > tm.integrals[i - 1]);
  CHECK(tm.slope < 0.0);
  CHECK(tm.r_squared >= 0.9);
  CHECK(tm.fit_points >= 4);
  // level sets shrink as the level rises
  for (std::size_t i = 1; i < tm.measures.size(); ++i) CHECK(tm.measures[i] <= tm.measures[i - 1]);
}

TEST_CASE("level_set_measure against the radial root oracle") {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto v = make_radial_bump(d, 1.0);
  for (double t : {0.05, 0.2, 0.3}) {
    // {bump > t} is the band |s| < sqrt(1 - 1/(1 - log t)) in the affine coordinate
    const double h = std::sqrt(1.0 - 1.0 / (-std::log(t)));
    const double r0 = 2.0 - h, r1 = 2.0 + h;
    const double exact = std::numbers::pi * (r1 * r1 - r0 * r0);
    CHECK(level_set_measure(v, d, t, QuadratureSpec{}) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("endpoint log check") {
  const auto d = make_domain(2, 1.0, 3.0);
  const LabConfig cfg;
  SUBCASE("scale invariance") {
    const auto u = make_radial_bump(d, 2.0);
    const auto r = endpoint_log_check(u, d, 0.0, 1.0, cfg);
    for (double c : {3.0, -0.01}) {
      CHECK(endpoint_log_check(scaled(u, c), d, 0.0, 1.0, cfg).empirical_ratio ==
            doctest::Approx(r.empirical_ratio).epsilon(1e-9));
    }
  }
  SUBCASE("bounded over the sharpness sweep") {
    double lo = 1e300, hi = 0.0;
    for (double s = 0.5; s <= 8.0; s *= 1.25) {
      const auto r = endpoint_log_check(make_radial_bump(d, s), d, 0.0, 1.0, cfg);
      REQUIRE(std::isfinite(r.empirical_ratio));
      lo = std::min(lo, r.empirical_ratio);
      hi = std::max(hi, r.empirical_ratio);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 10.0);
  }
  CHECK_THROWS_AS(endpoint_log_check(make_radial_bump(d, 1.0), d, 0.0, 0.5, cfg), DomainError);
}

TEST_CASE("endpoint CKN at theta = 1 is the log check composed with a volume bound") {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto u = make_radial_bump(d, 1.5);
  const double a = 0.2, lambda = 0.5;
  const auto t = derive_tuple(InequalityKind::EndpointCKN, tuple(2, 0.5, 0.25, a, 0.0, lambda, 1.0));
  const LabConfig cfg;
  const auto r = evaluate_instance(InequalityKind::EndpointCKN, t, u, d, cfg);
  const auto log_check = endpoint_log_check(u, d, a, cfg.c2, cfg);
  CHECK(r.rhs == doctest::Approx(log_check.rhs).epsilon(1e-12));
  // |x|^-b u in L^{n/lambda} against |Omega|^{lambda/n} sup |x|^-b u
  const double sup_b = sup_norm(u, t.b, d, cfg.quad).value;
  CHECK(r.lhs <= std::pow(d.volume(), lambda / 2.0) * sup_b * (1.0 + 1e-8));
}

TEST_CASE("estimate_constant") {
  const auto d = make_domain(3, 1.0, 4.0);
  const auto t = derive_tuple(InequalityKind::ClassicalHardy, tuple(3, 0.5));
  LabConfig cfg;

  SUBCASE("singleton family returns the member ratio") {
    FamilyDescriptor fam;
    fam.family = "radial_bump";
    fam.domain = d;
    fam.fixed = {{"sharpness", 2.0}};
    const auto est = estimate_constant(InequalityKind::ClassicalHardy, t, fam, cfg, OptimizerConfig{});
    const auto r = evaluate_instance(InequalityKind::ClassicalHardy, t, make_radial_bump(d, 2.0), d, cfg);
    CHECK(est.sup_ratio == r.empirical_ratio);
  }

  SUBCASE("deterministic and bounded by the sharp constant") {
    FamilyDescriptor fam;
    fam.family = "power_bump";
    fam.domain = d;
    fam.free = {{"beta", -1.5, 0.5, false}, {"cut_fraction", 0.05, 0.45, false}, {"rho_out", 4.0, 1e4, true}};
    OptimizerConfig opt;
    opt.seed = 7;
    opt.scan_points = 16;
    opt.refine_starts = 1;
    opt.max_evaluations = 40;
    const auto e1 = estimate_constant(InequalityKind::ClassicalHardy, t, fam, cfg, opt);
    const auto e2 = estimate_constant(InequalityKind::ClassicalHardy, t, fam, cfg, opt);
    CHECK(e1.sup_ratio == e2.sup_ratio);
    CHECK(e1.argmax == e2.argmax);
    CHECK(e1.sup_ratio <= 2.0 * (1.0 + 1e-3));
    CHECK(e1.sup_ratio > 1.0);
    CHECK(e1.n_evaluations >= opt.scan_points);
    for (std::size_t i = 1; i < e1.trace.size(); ++i) CHECK(e1.trace[i] >= e1.trace[i - 1]);
  }
}

TEST_CASE("family_member moves the domain with rho keys") {
  FamilyDescriptor fam;
  fam.family = "radial_bump";
  fam.domain = make_domain(2, 1.0, 2.0);
  AnnularDomain dom;
  const auto u = family_member(fam, {{"sharpness", 1.0}, {"rho_out", 5.0}}, dom);
  CHECK(dom.rho_out == 5.0);
  CHECK(u.support().rho_out == 5.0);
  CHECK_THROWS_AS(family_member(fam, {{"bogus", 1.0}}, dom), DomainError);
}
