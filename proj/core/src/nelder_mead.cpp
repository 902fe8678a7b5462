#include "cknlab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cknlab/errors.hpp"

namespace ckn {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> steps,
                             const NelderMeadOptions& opts) {
  const std::size_t d = x0.size();
  if (d == 0 || steps.size() != d) throw DomainError("nelder_mead: dimension mismatch");

  std::vector<std::vector<double>> simplex(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += steps[i];
  std::vector<double> fv(d + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d);
  std::vector<double> trial(d);
  std::vector<double> trial2(d);
  bool converged = false;

  auto point_along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < d; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  while (evals < opts.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[d - 1];

    double diam = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      double dist = 0.0;
      for (std::size_t j = 0; j < d; ++j) dist = std::max(dist, std::abs(simplex[i][j] - simplex[best][j]));
      diam = std::max(diam, dist);
    }
    const double spread = std::abs(fv[worst] - fv[best]);
    if (spread <= opts.ftol * (std::abs(fv[best]) + 1e-300) || diam <= opts.xtol) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    point_along(-opts.reflection, trial, simplex[worst]);
    const double fr = eval(trial);
    if (fr < fv[best]) {
      point_along(-opts.reflection * opts.expansion, trial2, simplex[worst]);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    point_along(outside ? -opts.reflection * opts.contraction : opts.contraction, trial2,
                simplex[worst]);
    const double fc = eval(trial2);
    if (fc < std::min(fr, fv[worst])) {
      simplex[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < d; ++j) {
        simplex[i][j] = simplex[best][j] + opts.shrink * (simplex[i][j] - simplex[best][j]);
      }
      fv[i] = eval(simplex[i]);
    }
  }

  const auto it = std::min_element(fv.begin(), fv.end());
  const auto idx = static_cast<std::size_t>(it - fv.begin());
  return {simplex[idx], fv[idx], evals, converged};
}

}  // namespace ckn
