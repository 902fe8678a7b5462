#include "cknlab/k_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "cknlab/errors.hpp"

namespace ckn {

namespace {

struct Cutoff {
  double rho = 0.0;
  double delta = 0.0;
  bool inner = true;
};

std::string cutoff_id(const Cutoff& c) {
  std::ostringstream os;
  os.precision(6);
  os << "cutoff(rho=" << c.rho << ",delta=" << c.delta << ",v=" << (c.inner ? "inner" : "outer")
     << ")";
  return os.str();
}

class LineSet {
 public:
  LineSet(const TestFunction& u, const SpaceSpec& x, const SpaceSpec& y, const AnnularDomain& dom,
          const KConfig& cfg)
      : u_(u), x_(x), y_(y), dom_(dom), cfg_(cfg) {
    if (u.dimension() != dom.n) throw DomainError("function and domain dimensions differ");
    nx_ = space_norm(u, x, dom, cfg.quad, cfg.holder_part);
    ny_ = space_norm(u, y, dom, cfg.quad, cfg.holder_part);
    if (!std::isfinite(nx_.value) || !std::isfinite(ny_.value)) {
      throw DomainError("endpoint norm is not finite");
    }
    lines_.push_back({"scalar(v=u)", nx_.value, 0.0, nx_.err_estimate, 0.0});
    cutoffs_.push_back(std::nullopt);
    lines_.push_back({"scalar(w=u)", 0.0, ny_.value, 0.0, ny_.err_estimate});
    cutoffs_.push_back(std::nullopt);
  }

  void add_cutoff_grid() {
    const double width = dom_.rho_out - dom_.rho_in;
    for (int k = 0; k < cfg_.rho_points; ++k) {
      const double rho = dom_.rho_in + width * (k + 1) / (cfg_.rho_points + 1);
      for (double f : cfg_.delta_fractions) {
        for (bool inner : {true, false}) add({rho, f * width, inner});
      }
    }
  }

  // golden-section search in rho around the best cutoff line at t
  void refine_at(double t) {
    std::size_t best = lines_.size();
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lines_.size(); ++j) {
      if (!cutoffs_[j]) continue;
      const double v = lines_[j].a + t * lines_[j].b;
      if (v < best_v) {
        best_v = v;
        best = j;
      }
    }
    if (best == lines_.size()) return;
    const Cutoff c0 = *cutoffs_[best];
    const double h = (dom_.rho_out - dom_.rho_in) / (cfg_.rho_points + 1);
    double lo = std::max(dom_.rho_in, c0.rho - h);
    double hi = std::min(dom_.rho_out, c0.rho + h);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    auto value = [&](double rho) {
      const auto j = add({rho, c0.delta, c0.inner});
      return j ? lines_[*j].a + t * lines_[*j].b : std::numeric_limits<double>::infinity();
    };
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    double fc = value(c);
    double fd = value(d);
    for (int it = 2; it < cfg_.golden_iterations; ++it) {
      if (fc <= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = value(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = value(d);
      }
    }
  }

  std::size_t best_line(double t) const {
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lines_.size(); ++j) {
      const double v = lines_[j].a + t * lines_[j].b;
      if (v < best_v) {
        best_v = v;
        best = j;
      }
    }
    return best;
  }

  const std::vector<SplittingLine>& lines() const { return lines_; }
  const NormResult& nx() const { return nx_; }
  const NormResult& ny() const { return ny_; }

 private:
  std::optional<std::size_t> add(const Cutoff& c) {
    try {
      const TestFunction v = with_radial_cutoff(u_, c.rho, c.delta, c.inner);
      const TestFunction w = with_radial_cutoff(u_, c.rho, c.delta, !c.inner);
      const NormResult a = space_norm(v, x_, dom_, cfg_.quad, cfg_.holder_part);
      const NormResult b = space_norm(w, y_, dom_, cfg_.quad, cfg_.holder_part);
      if (!std::isfinite(a.value) || !std::isfinite(b.value)) return std::nullopt;
      lines_.push_back({cutoff_id(c), a.value, b.value, a.err_estimate, b.err_estimate});
      cutoffs_.push_back(c);
      return lines_.size() - 1;
    } catch (const AccuracyError&) {
      // an unresolved splitting only loses a candidate upper bound
      return std::nullopt;
    }
  }

  const TestFunction& u_;
  SpaceSpec x_;
  SpaceSpec y_;
  AnnularDomain dom_;
  const KConfig& cfg_;
  NormResult nx_;
  NormResult ny_;
  std::vector<SplittingLine> lines_;
  std::vector<std::optional<Cutoff>> cutoffs_;
};

}  // namespace

std::vector<double> default_t_grid(double ratio, int points, double decades) {
  if (points < 2) throw DomainError("t grid needs at least two points");
  if (!(ratio > 0.0) || !std::isfinite(ratio)) ratio = 1.0;
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i) {
    const double e = -decades + 2.0 * decades * i / (points - 1);
    t[i] = ratio * std::pow(10.0, e);
  }
  return t;
}

KProfile k_profile(const TestFunction& u, const SpaceSpec& x, const SpaceSpec& y,
                   const AnnularDomain& dom, const KConfig& cfg, std::vector<double> t_grid) {
  LineSet set(u, x, y, dom, cfg);
  if (t_grid.empty()) {
    const double ratio = set.ny().value > 0.0 ? set.nx().value / set.ny().value : 1.0;
    t_grid = default_t_grid(ratio);
  }
  for (double t : t_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t grid must be positive and finite");
  }
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw DomainError("t grid must be ascending");
  if (cfg.use_cutoffs) {
    set.add_cutoff_grid();
    const std::size_t stride = static_cast<std::size_t>(std::max(1, cfg.refine_stride));
    for (std::size_t i = 0; i < t_grid.size(); i += stride) set.refine_at(t_grid[i]);
  }

  KProfile out;
  out.t_grid = t_grid;
  out.norm_x = set.nx().value;
  out.norm_y = set.ny().value;
  out.norm_x_err = set.nx().err_estimate;
  out.norm_y_err = set.ny().err_estimate;
  out.line_count = set.lines().size();
  for (double t : t_grid) {
    const SplittingLine& l = set.lines()[set.best_line(t)];
    out.k_values.push_back(l.a + t * l.b);
    out.splitting_ids.push_back(l.id);
    out.err.push_back(l.a_err + t * l.b_err);
  }
  return out;
}

double k_upper(const TestFunction& u, const SpaceSpec& x, const SpaceSpec& y, double t,
               const AnnularDomain& dom, const KConfig& cfg) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("k_upper needs t > 0");
  KConfig one = cfg;
  one.refine_stride = 1;
  return k_profile(u, x, y, dom, one, {t}).k_values.front();
}

double interp_norm(const KProfile& profile, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  if (profile.t_grid.empty()) throw DomainError("interp_norm needs a nonempty t grid");
  double best = 0.0;
  for (std::size_t i = 0; i < profile.t_grid.size(); ++i) {
    best = std::max(best, std::pow(profile.t_grid[i], -theta) * profile.k_values[i]);
  }
  return best;
}

double interp_norm(const TestFunction& u, const SpaceSpec& x, const SpaceSpec& y, double theta,
                   const std::vector<double>& t_grid, const AnnularDomain& dom,
                   const KConfig& cfg) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  if (t_grid.empty()) throw DomainError("interp_norm needs a nonempty t grid");
  return interp_norm(k_profile(u, x, y, dom, cfg, t_grid), theta);
}

InequalityReport verify_k_inequality(const TestFunction& u, const SpaceSpec& x,
                                     const SpaceSpec& y, double theta, const AnnularDomain& dom,
                                     const KConfig& cfg) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  const KProfile prof = k_profile(u, x, y, dom, cfg);

  InequalityReport rep;
  rep.kind = InequalityKind::KMethod;
  rep.tuple.n = dom.n;
  rep.tuple.s_p = x.s;
  rep.tuple.s_r = y.s;
  rep.tuple.a = x.a;
  rep.tuple.c = y.a;
  rep.tuple.theta = theta;
  rep.domain = dom;
  rep.family = u.family();
  rep.member = u.params();
  rep.lhs_name = "sup_t t^-theta K(t)";
  std::size_t arg = 0;
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    const double v = std::pow(prof.t_grid[i], -theta) * prof.k_values[i];
    if (v > rep.lhs) {
      rep.lhs = v;
      arg = i;
    }
  }
  rep.lhs_err = prof.t_grid.empty() ? 0.0 : std::pow(prof.t_grid[arg], -theta) * prof.err[arg];
  rep.rhs_factors = {{"|u|_X", prof.norm_x, 1.0 - theta, prof.norm_x_err},
                     {"|u|_Y", prof.norm_y, theta, prof.norm_y_err}};
  rep.rhs = std::pow(prof.norm_x, 1.0 - theta) * std::pow(prof.norm_y, theta);
  rep.analytic_upper_bound = 1.0;
  if (rep.rhs == 0.0) {
    rep.empirical_ratio = 0.0;
    rep.verdict = Verdict::Inconclusive;
    rep.note = "zero function: ratio set to 0";
    return rep;
  }
  rep.empirical_ratio = rep.lhs / rep.rhs;
  double rel = rep.lhs > 0.0 ? rep.lhs_err / rep.lhs : 0.0;
  if (prof.norm_x > 0.0) rel += (1.0 - theta) * prof.norm_x_err / prof.norm_x;
  if (prof.norm_y > 0.0) rel += theta * prof.norm_y_err / prof.norm_y;
  rep.ratio_err = rep.empirical_ratio * rel;
  rep.verdict = rep.empirical_ratio > 1.0 + 1e-9 + 5.0 * rep.ratio_err ? Verdict::Violated
                                                                         : Verdict::Bounded;
  if (arg == 0 || arg + 1 == prof.t_grid.size()) {
    rep.note = "sup of t^-theta K attained at the t-grid edge; grid may be too short";
  }
  return rep;
}

}  // namespace ckn
