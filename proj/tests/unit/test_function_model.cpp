#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cknlab/errors.hpp"
#include "cknlab/function_model.hpp"
#include "cknlab/norm_engine.hpp"
#include "oracles.hpp"

using namespace ckn;

namespace {

Point on_sphere(int n, double r, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Point x(n);
  double s = 0.0;
  for (auto& v : x) {
    v = N(rng);
    s += v * v;
  }
  for (auto& v : x) v *= r / std::sqrt(s);
  return x;
}

double max_abs(const Point& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("annular domain invariants") {
  const auto d = make_domain(3, 1.0, 4.0);
  CHECK(d.dist_to_origin() == 1.0);
  CHECK(d.diameter() == 8.0);
  CHECK_THROWS_AS(make_domain(3, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_domain(3, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_domain(1, 1.0, 2.0), DomainError);
  const Point in{0.0, 2.0, 0.0};
  const Point out{0.0, 0.5, 0.0};
  CHECK(d.contains(in));
  CHECK_FALSE(d.contains(out));
}

TEST_CASE("radial bump peak and support") {
  const auto d = make_domain(2, 1.0, 2.0);
  const auto u = make_radial_bump(d, 1.0);
  const Point mid{1.5, 0.0};
  CHECK(u(mid) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const Point in{1.0, 0.0}, out{0.0, 2.0};
  CHECK(u(in) == 0.0);
  CHECK(u(out) == 0.0);
  CHECK(u.is_radial());
}

TEST_CASE("radial bump integral matches 1-D oracle") {
  const auto d = make_domain(2, 1.0, 2.0);
  const auto u = make_radial_bump(d, 1.0);
  QuadratureSpec q;
  q.target_rel_err = 1e-11;
  const auto res = lebesgue_norm(u, 0.0, ReciprocalExponent(1.0), d, q);
  const double exact = 2.0 * std::numbers::pi *
                       oracle::integrate([](double r) { return oracle::bump(r, 1.0, 2.0, 1.0) * r; }, 1.0, 2.0);
  CHECK(res.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("power bump plateau and gradient") {
  const auto d = make_domain(3, 1.0, 4.0);
  const auto u = make_power_bump(d, 0.0, 0.1);
  // log band is [log4 * 0.1, log4 * 0.9] around log r
  const double lo = std::exp(0.1 * std::log(4.0)), hi = std::exp(0.9 * std::log(4.0));
  for (double r : {lo * 1.001, 2.0, hi * 0.999}) {
    const Point x{0.0, r, 0.0};
    CHECK(u(x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(max_abs(u.gradient(x)) == 0.0);
  }
  const auto v = make_power_bump(d, -0.5, 0.1);
  const Point x{2.0, 0.0, 0.0};
  const auto g = v.gradient(x);
  CHECK(g[0] == doctest::Approx(-0.5 * std::pow(2.0, -1.5)).epsilon(1e-14));
}

TEST_CASE("power bump scaling covariance on the band") {
  const auto d = make_domain(2, 1.0, 10.0);
  const double beta = -0.7;
  const auto u = make_power_bump(d, beta, 0.2);
  const double lo = std::exp(0.2 * std::log(10.0)), hi = std::exp(0.8 * std::log(10.0));
  for (double r : {lo * 1.01, 2.5, 3.0}) {
    for (double s : {1.1, 1.5}) {
      if (s * r >= hi) continue;
      const Point x{r, 0.0}, sx{s * r, 0.0};
      CHECK(u(sx) == doctest::Approx(std::pow(s, beta) * u(x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("power bump Hardy quotient on [1,4] against the quadrature oracle") {
  // The quotient is far below the sharp constant on a short annulus; the
  // oracle value is the reference, and the sharp constant the ceiling.
  const auto d = make_domain(3, 1.0, 4.0);
  const double beta = -0.5, cut = 0.05;
  const auto u = make_power_bump(d, beta, cut);
  QuadratureSpec q;
  q.target_rel_err = 1e-10;
  const double lhs = lebesgue_norm(u, 1.0, ReciprocalExponent(0.5), d, q).value;
  const double rhs = weighted_gradient_xnorm(u, SpaceSpec{1, ReciprocalExponent(0.5), 0.0}, d, q).value;

  auto f = [&](double r) { return oracle::power_bump(r, 1.0, 4.0, beta, cut); };
  auto df = [&](double r) {
    return oracle::derivative([&](auto x) { return oracle::power_bump(x, 1.0, 4.0, beta, cut); }, r);
  };
  const double L = std::log(4.0);
  const std::vector<double> br{std::exp(cut * L), std::exp((1 - cut) * L)};
  const double lhs_o = oracle::radial_lp(3, 1.0, 4.0, 1.0, 2.0, f, br);
  const double rhs_o = oracle::radial_lp(3, 1.0, 4.0, 0.0, 2.0, df, br);
  CHECK(lhs == doctest::Approx(lhs_o).epsilon(1e-7));
  CHECK(rhs == doctest::Approx(rhs_o).epsilon(1e-6));
  CHECK(lhs / rhs < 2.0);
}

TEST_CASE("angular modulation") {
  const auto d = make_domain(3, 1.0, 2.0);
  const auto base = make_radial_bump(d, 2.0);
  const auto same = make_angular(base, 0);
  const auto u = make_angular(base, 1);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto x = on_sphere(3, 1.2 + 0.03 * i, rng);
    CHECK(same(x) == base(x));
    const Point axis{1.2 + 0.03 * i, 0.0, 0.0};
    CHECK(u(axis) == doctest::Approx(base(axis)).epsilon(1e-15));
  }
  CHECK_FALSE(u.is_radial());

  QuadratureSpec q;
  q.target_rel_err = 1e-10;
  const Sampler s{3, [&](std::span<const double> x) { return u(x); }, false};
  const double total = integrate_annulus(s, d, q, 1e-10).value;
  // |u| <= base, so the base integral bounds the absolute mass
  const double mass = lebesgue_norm(base, 0.0, ReciprocalExponent(1.0), d, q).value;
  CHECK(std::abs(total) <= 1e-8 * mass);
}

TEST_CASE("gradient_check on every registered family") {
  for (int n : {2, 3}) {
    const auto d = make_domain(n, 1.0, 3.0);
    const auto probes = interior_probes(d, 100, 11);
    REQUIRE(probes.size() == 100);
    for (const auto& fam : registered_families()) {
      for (double mode : {0.0, 1.0, 2.0}) {
        auto params = family_defaults(fam);
        params["mode"] = mode;
        const auto u = make_family_member(fam, d, params);
        CAPTURE(fam);
        CAPTURE(mode);
        CAPTURE(n);
        CHECK(gradient_check(u, probes, 1e-5) <= 1e-6);
      }
    }
    CHECK(gradient_check(make_power_bump(d, 2.0, 0.1), probes, 1e-5) <= 1e-6);
    CHECK(gradient_check(make_radial_bump(d, 8.0), probes, 1e-5) <= 1e-6);
    CHECK(gradient_check(make_zero(d), probes, 1e-5) == 0.0);
  }
}

TEST_CASE("gradient_check rejects bad probes") {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto u = make_radial_bump(d, 1.0);
  const std::vector<Point> bad{{0.5, 0.0}};
  CHECK_THROWS_AS(gradient_check(u, bad, 1e-5), DomainError);
  const std::vector<Point> ok{{2.0, 0.0}};
  CHECK_THROWS_AS(gradient_check(u, ok, 0.0), DomainError);
}

TEST_CASE("compact support: value and gradient vanish on both spheres") {
  std::mt19937_64 rng(17);
  for (int n : {2, 3, 4}) {
    const auto d = make_domain(n, 1.0, 2.5);
    for (const auto& fam : registered_families()) {
      for (double mode : {0.0, 1.0}) {
        auto params = family_defaults(fam);
        params["mode"] = mode;
        const auto u = make_family_member(fam, d, params);
        for (int i = 0; i < 1000; ++i) {
          const double r = (i % 2 == 0) ? d.rho_in : d.rho_out;
          const auto x = on_sphere(n, r, rng);
          REQUIRE(u(x) == 0.0);
          REQUIRE(max_abs(u.gradient(x)) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("radial cutoffs split a function") {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto u = make_radial_bump(d, 1.0);
  const auto in = with_radial_cutoff(u, 2.0, 0.5, true);
  const auto out = with_radial_cutoff(u, 2.0, 0.5, false);
  const auto probes = interior_probes(d, 50, 3);
  for (const auto& x : probes) {
    CHECK(in(x) + out(x) == doctest::Approx(u(x)).epsilon(1e-14));
  }
  CHECK(gradient_check(in, probes, 1e-5) <= 1e-6);
  CHECK(gradient_check(out, probes, 1e-5) <= 1e-6);
}

TEST_CASE("scaled multiplies value and gradient") {
  const auto d = make_domain(2, 1.0, 3.0);
  const auto u = make_radial_bump(d, 1.0);
  const auto v = scaled(u, -3.0);
  const Point x{1.7, 0.4};
  CHECK(v(x) == doctest::Approx(-3.0 * u(x)));
  CHECK(v.gradient(x)[1] == doctest::Approx(-3.0 * u.gradient(x)[1]));
}

TEST_CASE("registry rejects unknown names and parameters") {
  const auto d = make_domain(2, 1.0, 2.0);
  CHECK_THROWS_AS(make_family_member("gaussian", d, {}), DomainError);
  CHECK_THROWS_AS(make_family_member("radial_bump", d, {{"beta", 1.0}}), DomainError);
  CHECK_THROWS_AS(make_family_member("radial_bump", d, {{"mode", 0.5}}), DomainError);
  CHECK_THROWS_AS(make_radial_bump(d, -1.0), DomainError);
}
