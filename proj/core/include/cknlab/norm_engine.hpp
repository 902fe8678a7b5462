#pragma once

// Weighted norms on the unified scale X^p over an annulus.
//
// Integrals: adaptive Gauss-Legendre in tau = log r (panel halving) times a
// product rule on the sphere, the sphere rule doubled per level until two
// levels agree. Radial integrands skip the sphere rule.
// Sup and Hölder quantities: sampled on nested grids then polished locally;
// the results are lower bounds and the reported value is the running max
// over levels.

#include <cstddef>
#include <functional>
#include <span>

#include "cknlab/function_model.hpp"
#include "cknlab/param_algebra.hpp"
#include "cknlab/quadrature.hpp"

namespace ckn {

struct NormResult {
  double value = 0.0;
  double err_estimate = 0.0;
  Regime regime = Regime::Lebesgue;
  bool is_lower_bound = false;
  double sup_part = 0.0;       // Hölder regime only
  double seminorm_part = 0.0;  // Hölder regime only
  int levels = 0;
};

enum class HolderPart { Full, SeminormOnly };

/// A scalar function on R^n as seen by the engine.
struct Sampler {
  int n = 2;
  std::function<double(std::span<const double>)> f;
  bool radial = false;
};

struct IntegralResult {
  double value = 0.0;
  double err = 0.0;
  int levels = 0;
  std::size_t evaluations = 0;
};

/// Integral of g over the annulus to relative accuracy rel_target.
/// Throws AccuracyError when the sphere levels do not settle.
IntegralResult integrate_annulus(const Sampler& g, const AnnularDomain& dom,
                                 const QuadratureSpec& q, double rel_target);

/// (int |g|^p)^{1/p}. p >= 1.
NormResult lp_norm(const Sampler& g, double p, const AnnularDomain& dom, const QuadratureSpec& q);

/// Sampled sup |g| with golden-section refinement along the radius.
NormResult sampled_sup(const Sampler& g, const AnnularDomain& dom, const QuadratureSpec& q);

/// Sampled sup |g| + [g]_alpha.
NormResult sampled_holder(const Sampler& g, double alpha, const AnnularDomain& dom,
                          const QuadratureSpec& q, HolderPart part = HolderPart::Full);

/// ||x|^{-a} u|_{L^p}, p = 1/s, s in (0, 1].
NormResult lebesgue_norm(const TestFunction& u, double a, ReciprocalExponent s,
                         const AnnularDomain& dom, const QuadratureSpec& q);

/// sup |x|^{-a}|u|.
NormResult sup_norm(const TestFunction& u, double a, const AnnularDomain& dom,
                    const QuadratureSpec& q);

/// sup ||x|^{-b}u| + [|x|^{-b}u]_{C^{0,alpha}}, alpha in (0, 1].
NormResult holder_norm(const TestFunction& u, double b, double alpha, const AnnularDomain& dom,
                       const QuadratureSpec& q, HolderPart part = HolderPart::Full);

/// ||x|^{-spec.a} u|_{X^p}, 1/p = spec.s in (-1/n, 1].
NormResult x_norm(const TestFunction& u, const SpaceSpec& spec, const AnnularDomain& dom,
                  const QuadratureSpec& q, HolderPart part = HolderPart::Full);

/// ||x|^{-spec.a} Du|_{X^p}. Lebesgue and sup regimes use |grad u|; the
/// Hölder regime sums the norms of the partial derivatives.
NormResult weighted_gradient_xnorm(const TestFunction& u, const SpaceSpec& spec,
                                   const AnnularDomain& dom, const QuadratureSpec& q,
                                   HolderPart part = HolderPart::Full);

/// Dispatch on spec.k: 0 -> x_norm, 1 -> weighted_gradient_xnorm.
NormResult space_norm(const TestFunction& u, const SpaceSpec& spec, const AnnularDomain& dom,
                      const QuadratureSpec& q, HolderPart part = HolderPart::Full);

/// |x|^{-a} u and |x|^{-a} |grad u| as samplers.
Sampler weighted_sampler(const TestFunction& u, double a);
Sampler weighted_gradient_sampler(const TestFunction& u, double a);

}  // namespace ckn
