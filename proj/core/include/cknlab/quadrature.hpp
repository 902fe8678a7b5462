#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ckn {

/// Resolution knobs shared by every norm evaluation.
///
/// Integrals use a tensor product of composite Gauss-Legendre in the radius
/// (panels graded uniformly in log r) and a product rule on the sphere.
/// Sup and Hölder quantities are sampled on nested grids of the same nominal
/// size. Level l of the refinement doubles both counts l times.
struct QuadratureSpec {
  int radial_nodes = 64;       // total radial nodes = panels * radial_order
  int radial_order = 16;       // Gauss-Legendre points per panel
  int sphere_points = 32;      // minimum directions on S^{n-1}
  int refinement_levels = 4;   // maximum number of doublings
  double target_rel_err = 1e-8;
  bool exploit_radial_symmetry = true;
  int holder_pair_budget = 1200;  // max sample points entering the O(N^2) sweep

  /// Throws DomainError when an invariant is broken.
  void validate(int n) const;

  /// Copy with every count doubled.
  QuadratureSpec doubled() const;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (Newton on the three-term recurrence).
GaussRule gauss_legendre(int order);

struct RadialRule {
  std::vector<double> r;
  std::vector<double> w;  // dr weights, no Jacobian
};

/// Composite rule on [r0, r1] with `panels` log-uniform panels.
RadialRule radial_rule(double r0, double r1, int panels, int order);

/// Quadrature on the unit sphere S^{n-1} stored row-major (size() x n).
///
/// The first two coordinates carry a uniform circle; each further coordinate
/// adds a polar angle integrated with Gauss-Legendre against sin^k. The rule
/// is symmetric under x -> -x.
class SphereRule {
 public:
  SphereRule(int n, int min_points);

  int dimension() const noexcept { return n_; }
  std::size_t size() const noexcept { return w_.size(); }
  std::span<const double> direction(std::size_t i) const {
    return {dirs_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  double weight(std::size_t i) const { return w_[i]; }

 private:
  int n_;
  std::vector<double> dirs_;
  std::vector<double> w_;
};

/// Uniform-angle direction set (no weights) used for sampled sup/Hölder
/// estimates. Level l+1 contains level l.
std::vector<double> nested_directions(int n, int min_points, int level);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

/// Volume of {rho_in < |x| < rho_out} in R^n.
double annulus_volume(int n, double rho_in, double rho_out);

}  // namespace ckn
