#pragma once

// Reference values computed without touching the library's quadrature or
// test-function code. Radial profiles are re-derived here from their closed
// forms and integrated with Boost's adaptive Gauss-Kronrod / tanh-sinh rules.

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n);
}

/// int_{r0}^{r1} f(r) dr, splitting at the given interior breakpoints.
inline double integrate(const std::function<double(double)>& f, double r0, double r1,
                        std::vector<double> breaks = {}) {
  breaks.push_back(r0);
  breaks.push_back(r1);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(r0, breaks[i]);
    const double hi = std::min(r1, breaks[i + 1]);
    if (!(hi > lo)) continue;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12,
                                                                           &err);
  }
  return total;
}

/// (|S^{n-1}| int |r^{-a} f(r)|^p r^{n-1} dr)^{1/p} for a radial profile f.
inline double radial_lp(int n, double r0, double r1, double a, double p,
                        const std::function<double(double)>& f, std::vector<double> breaks = {}) {
  const double I = integrate(
      [&](double r) { return std::pow(std::abs(std::pow(r, -a) * f(r)), p) * std::pow(r, n - 1); },
      r0, r1, std::move(breaks));
  return std::pow(sphere_area(n) * I, 1.0 / p);
}

/// exp(-sigma / (1 - t^2)), t the affine image of r in [-1, 1].
template <class T>
T bump(T r, double r0, double r1, double sigma) {
  using std::exp;
  const T t = (2.0 * r - r0 - r1) / (r1 - r0);
  if (!(t * t < 1.0)) return T(0.0);
  return exp(-sigma / (1.0 - t * t));
}

template <class T>
T step(T x) {
  using std::exp;
  if (x <= 0.0) return T(0.0);
  if (x >= 1.0) return T(1.0);
  const T f = exp(-1.0 / x);
  const T g = exp(-1.0 / (1.0 - x));
  return f / (f + g);
}

/// r^beta times a plateau in log r whose ramps each take cut * log(r1/r0).
template <class T>
T power_bump(T r, double r0, double r1, double beta, double cut) {
  using std::log;
  using std::pow;
  const double L = std::log(r1 / r0);
  const T tau = log(r / r0);
  if (!(tau > 0.0 && tau < L)) return T(0.0);
  const double w = cut * L;
  return pow(r, beta) * step(tau / w) * step((L - tau) / w);
}

/// d/dr of a profile written generically in r, by forward-mode autodiff.
template <class F>
double derivative(F&& f, double r) {
  auto x = boost::math::differentiation::make_fvar<double, 1>(r);
  return static_cast<double>(f(x).derivative(1));
}

inline double bump_dr(double r, double r0, double r1, double sigma) {
  return derivative([&](auto x) { return bump(x, r0, r1, sigma); }, r);
}

/// Max of f over a uniform grid of `points` radii in [r0, r1].
inline double dense_max(const std::function<double(double)>& f, double r0, double r1,
                        int points = 200001) {
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double r = r0 + (r1 - r0) * i / (points - 1);
    best = std::max(best, std::abs(f(r)));
  }
  return best;
}

}  // namespace oracle
