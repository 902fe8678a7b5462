#pragma once

// Closed-form test functions on punctured annuli.
//
// A TestFunction is an immutable handle to a scalar field with an analytic
// gradient. The registered families are compactly supported inside their
// annulus and vanish there together with their gradient; the finite
// difference check below is the cross-validation of every analytic gradient.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ckn {

using ParamMap = std::map<std::string, double>;
using Point = std::vector<double>;

/// {rho_in < |x| < rho_out} in R^n.
struct AnnularDomain {
  int n = 2;
  double rho_in = 1.0;
  double rho_out = 2.0;

  /// Throws DomainError unless n >= 2 and 0 < rho_in < rho_out < inf.
  void validate() const;

  double dist_to_origin() const noexcept { return rho_in; }
  double diameter() const noexcept { return 2.0 * rho_out; }
  double volume() const;
  bool contains(std::span<const double> x) const;
};

AnnularDomain make_domain(int n, double rho_in, double rho_out);

enum class Smoothness { C1, CInfinity };

/// Scalar field on R^n with analytic gradient.
class Field {
 public:
  virtual ~Field() = default;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  /// True when value(x) depends on |x| only.
  virtual bool radial() const { return false; }
};

class TestFunction {
 public:
  TestFunction(std::shared_ptr<const Field> field, AnnularDomain support, std::string family,
               ParamMap params, Smoothness smoothness = Smoothness::CInfinity);

  double operator()(std::span<const double> x) const { return field_->value(x); }
  double evaluate(std::span<const double> x) const { return field_->value(x); }
  void gradient(std::span<const double> x, std::span<double> out) const {
    field_->gradient(x, out);
  }
  Point gradient(std::span<const double> x) const;

  const AnnularDomain& support() const noexcept { return support_; }
  int dimension() const noexcept { return support_.n; }
  const std::string& family() const noexcept { return family_; }
  const ParamMap& params() const noexcept { return params_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  bool is_radial() const { return field_->radial(); }
  const std::shared_ptr<const Field>& field() const noexcept { return field_; }

 private:
  std::shared_ptr<const Field> field_;
  AnnularDomain support_;
  std::string family_;
  ParamMap params_;
  Smoothness smoothness_;
};

/// C^inf transition from 0 (tau <= 0) to 1 (tau >= 1), flat to all orders
/// at both ends: S = psi(tau) / (psi(tau) + psi(1-tau)), psi(t) = exp(-1/t).
double smooth_step(double tau);
double smooth_step_derivative(double tau);

/// u(x) = exp(-sharpness / (1 - t^2)) with t the affine map of |x| onto
/// [-1, 1]; peak exp(-sharpness) at the mid-radius.
TestFunction make_radial_bump(const AnnularDomain& domain, double sharpness);

/// u(x) = |x|^beta chi(|x|). chi = 1 on the middle (1 - 2 cut_fraction)
/// portion of [rho_in, rho_out] measured in log-radius and falls to zero
/// through smooth steps at both ends.
TestFunction make_power_bump(const AnnularDomain& domain, double beta, double cut_fraction);

/// base(x) * Re[(x1 + i x2)^mode] / |x|^mode. mode = 0 returns base.
TestFunction make_angular(const TestFunction& base, int mode);

/// c * u.
TestFunction scaled(const TestFunction& u, double c);

TestFunction make_zero(const AnnularDomain& domain);

/// The coordinate function x_axis. Not compactly supported; used to probe
/// seminorm estimators on a known answer.
TestFunction make_coordinate(const AnnularDomain& domain, int axis);

/// chi u with chi a smooth radial cutoff of centre radius rho and transition
/// width delta. keep_inner selects chi = 1 inside (else chi = 1 outside).
TestFunction with_radial_cutoff(const TestFunction& u, double rho, double delta, bool keep_inner);

/// Max over probes and coordinates of |five-point central difference - analytic| /
/// (|analytic| + floor), floor = 1e-6 * max |analytic| over all probes.
/// Throws DomainError if a probe lies outside the open annulus or h <= 0.
double gradient_check(const TestFunction& f, std::span<const Point> probes, double h);

/// `count` deterministic interior probes, radii within the middle 90% of the
/// annulus, directions spread over the sphere.
std::vector<Point> interior_probes(const AnnularDomain& domain, int count, unsigned seed);

/// Registry: builds a family member from its name and a parameter map.
/// Recognised names: radial_bump (sharpness), power_bump (beta,
/// cut_fraction), zero. Every family accepts `mode` for angular modulation.
/// Unknown names or parameters throw DomainError.
TestFunction make_family_member(std::string_view family, const AnnularDomain& domain,
                                const ParamMap& params);

std::vector<std::string> registered_families();

/// Default parameters of a registered family.
ParamMap family_defaults(std::string_view family);

}  // namespace ckn
