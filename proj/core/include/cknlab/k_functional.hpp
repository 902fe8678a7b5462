#pragma once

// Upper bounds on the Peetre K-functional
//   K(t, u; X, Y) = inf_{u = v + w} |v|_X + t |w|_Y
// over a fixed family of splittings. Each splitting j contributes the line
// A_j + t B_j and K is bounded by the lower envelope of the lines, so every
// profile is nondecreasing and concave in t by construction.

#include <string>
#include <vector>

#include "cknlab/function_model.hpp"
#include "cknlab/norm_engine.hpp"
#include "cknlab/param_algebra.hpp"
#include "cknlab/report.hpp"

namespace ckn {

struct KConfig {
  QuadratureSpec quad;
  HolderPart holder_part = HolderPart::Full;
  bool use_cutoffs = true;
  int rho_points = 8;                                  // cutoff centres inside the annulus
  std::vector<double> delta_fractions{0.1, 0.25, 0.5};  // transition widths / (rho_out - rho_in)
  int golden_iterations = 6;                            // per refined t
  int refine_stride = 8;                                // refine every k-th grid point
};

/// One splitting u = v + w with its endpoint norms.
struct SplittingLine {
  std::string id;
  double a = 0.0;  // |v|_X
  double b = 0.0;  // |w|_Y
  double a_err = 0.0;
  double b_err = 0.0;
};

struct KProfile {
  std::vector<double> t_grid;
  std::vector<double> k_values;
  std::vector<std::string> splitting_ids;
  std::vector<double> err;  // per t: a_err + t b_err of the chosen line
  double norm_x = 0.0;
  double norm_y = 0.0;
  double norm_x_err = 0.0;
  double norm_y_err = 0.0;
  std::size_t line_count = 0;
};

/// 65 log-spaced points over [1e-4, 1e4] * ratio.
std::vector<double> default_t_grid(double ratio, int points = 65, double decades = 4.0);

/// Builds the splitting lines and the profile on t_grid. An empty grid
/// selects default_t_grid(|u|_X / |u|_Y).
KProfile k_profile(const TestFunction& u, const SpaceSpec& x, const SpaceSpec& y,
                   const AnnularDomain& dom, const KConfig& cfg, std::vector<double> t_grid = {});

/// Best value of A_j + t B_j over the family at a single t.
double k_upper(const TestFunction& u, const SpaceSpec& x, const SpaceSpec& y, double t,
               const AnnularDomain& dom, const KConfig& cfg);

/// max_t t^{-theta} K(t). Throws DomainError on an empty grid.
double interp_norm(const TestFunction& u, const SpaceSpec& x, const SpaceSpec& y, double theta,
                   const std::vector<double>& t_grid, const AnnularDomain& dom,
                   const KConfig& cfg);

/// Same from an existing profile.
double interp_norm(const KProfile& profile, double theta);

/// interp_norm <= C |u|_X^{1-theta} |u|_Y^theta with analytic C = 1.
InequalityReport verify_k_inequality(const TestFunction& u, const SpaceSpec& x,
                                     const SpaceSpec& y, double theta, const AnnularDomain& dom,
                                     const KConfig& cfg);

}  // namespace ckn
