#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ckn {

struct NelderMeadOptions {
  int max_evaluations = 400;
  double ftol = 1e-12;  // relative spread of simplex values
  double xtol = 1e-10;  // simplex diameter
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f from x0 with an axis-aligned initial simplex of the given
/// per-coordinate steps. Deterministic: ties keep the earlier vertex.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> steps,
                             const NelderMeadOptions& opts = {});

}  // namespace ckn
