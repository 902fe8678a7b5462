#include "cknlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cknlab/errors.hpp"

namespace ckn {

void QuadratureSpec::validate(int n) const {
  if (radial_nodes < 8) throw DomainError("radial_nodes must be >= 8");
  if (radial_order < 2) throw DomainError("radial_order must be >= 2");
  if (sphere_points < 2 * n) throw DomainError("sphere_points must be >= 2n");
  if (refinement_levels < 1) throw DomainError("refinement_levels must be >= 1");
  if (!(target_rel_err > 0.0)) throw DomainError("target_rel_err must be positive");
  if (holder_pair_budget < 16) throw DomainError("holder_pair_budget must be >= 16");
}

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec q = *this;
  q.radial_nodes *= 2;
  q.sphere_points *= 2;
  q.holder_pair_budget *= 2;
  return q;
}

GaussRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("Gauss-Legendre order must be positive");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = order * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

RadialRule radial_rule(double r0, double r1, int panels, int order) {
  if (!(r0 > 0.0 && r1 > r0)) throw DomainError("radial_rule needs 0 < r0 < r1");
  if (panels < 1) throw DomainError("radial_rule needs at least one panel");
  const GaussRule g = gauss_legendre(order);
  RadialRule out;
  out.r.reserve(static_cast<std::size_t>(panels) * order);
  out.w.reserve(out.r.capacity());
  const double log_ratio = std::log(r1 / r0);
  double left = r0;
  for (int k = 0; k < panels; ++k) {
    const double right = (k + 1 == panels) ? r1 : r0 * std::exp(log_ratio * (k + 1) / panels);
    const double mid = 0.5 * (left + right);
    const double half = 0.5 * (right - left);
    for (int i = 0; i < order; ++i) {
      out.r.push_back(mid + half * g.nodes[i]);
      out.w.push_back(half * g.weights[i]);
    }
    left = right;
  }
  return out;
}

namespace {

int polar_order_for(int n, int min_points) {
  // circle gets 2m points, each of the n-2 polar angles m points
  const int d = n - 2;
  int m = 3;
  while (2.0 * std::pow(m, d + 1) < min_points) ++m;
  return m;
}

}  // namespace

SphereRule::SphereRule(int n, int min_points) : n_(n) {
  if (n < 2) throw DomainError("sphere rules need n >= 2");
  const int m = (n == 2) ? 0 : polar_order_for(n, min_points);
  const int circle = (n == 2) ? std::max(min_points, 4) : 2 * m;

  // start on S^1 in (x1, x2)
  std::vector<double> pts;
  std::vector<double> wts;
  for (int j = 0; j < circle; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / circle;
    pts.push_back(std::cos(phi));
    pts.push_back(std::sin(phi));
    wts.push_back(2.0 * std::numbers::pi / circle);
  }
  // Adding a coordinate t = cos(theta) to S^{dim-1} costs the weight
  // (1 - t^2)^{(dim-2)/2}. Integer powers use Gauss-Legendre times the
  // polynomial factor, half-integer powers Chebyshev of the second kind;
  // both are exact for polynomials of degree 2m - 1 in t.
  for (int dim = 2; dim < n; ++dim) {
    const int k = (dim - 2) / 2;
    const int mm = m + k;
    std::vector<double> tn, tw;
    if (dim % 2 == 0) {
      const GaussRule g = gauss_legendre(mm);
      for (int i = 0; i < mm; ++i) {
        tn.push_back(g.nodes[i]);
        tw.push_back(g.weights[i] * std::pow(1.0 - g.nodes[i] * g.nodes[i], k));
      }
    } else {
      for (int i = mm; i >= 1; --i) {
        const double a = std::numbers::pi * i / (mm + 1);
        const double t = std::cos(a);
        tn.push_back(t);
        tw.push_back(std::numbers::pi / (mm + 1) * std::sin(a) * std::sin(a) *
                     std::pow(1.0 - t * t, k));
      }
    }
    std::vector<double> next_pts;
    std::vector<double> next_w;
    next_pts.reserve(wts.size() * tn.size() * (dim + 1));
    for (std::size_t i = 0; i < tn.size(); ++i) {
      const double st = std::sqrt(std::max(0.0, 1.0 - tn[i] * tn[i]));
      for (std::size_t j = 0; j < wts.size(); ++j) {
        for (int c = 0; c < dim; ++c) next_pts.push_back(st * pts[j * dim + c]);
        next_pts.push_back(tn[i]);
        next_w.push_back(wts[j] * tw[i]);
      }
    }
    pts.swap(next_pts);
    wts.swap(next_w);
  }
  dirs_ = std::move(pts);
  w_ = std::move(wts);
}

std::vector<double> nested_directions(int n, int min_points, int level) {
  if (n < 2) throw DomainError("directions need n >= 2");
  const int scale = 1 << level;
  std::vector<double> pts;
  if (n == 2) {
    const int circle = std::max(min_points, 4) * scale;
    for (int j = 0; j < circle; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / circle;
      pts.push_back(std::cos(phi));
      pts.push_back(std::sin(phi));
    }
    return pts;
  }
  const int m = polar_order_for(n, min_points) * scale;
  const int circle = 2 * m;
  for (int j = 0; j < circle; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / circle;
    pts.push_back(std::cos(phi));
    pts.push_back(std::sin(phi));
  }
  int dim = 2;
  while (dim < n) {
    std::vector<double> next;
    const std::size_t count = pts.size() / dim;
    for (int i = 0; i <= m; ++i) {
      const double th = std::numbers::pi * i / m;
      const double st = std::sin(th);
      const double ct = std::cos(th);
      for (std::size_t k = 0; k < count; ++k) {
        for (int c = 0; c < dim; ++c) next.push_back(st * pts[k * dim + c]);
        next.push_back(ct);
      }
    }
    pts.swap(next);
    ++dim;
  }
  return pts;
}

double unit_sphere_area(int n) {
  if (n < 1) throw DomainError("unit_sphere_area needs n >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double annulus_volume(int n, double rho_in, double rho_out) {
  return unit_sphere_area(n) / n * (std::pow(rho_out, n) - std::pow(rho_in, n));
}

}  // namespace ckn
