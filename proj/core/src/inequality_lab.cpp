#include "cknlab/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cknlab/errors.hpp"
#include "cknlab/nelder_mead.hpp"

namespace ckn {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded:
      return "bounded";
    case Verdict::Violated:
      return "violated";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

constexpr double kRelErrFloor = 1e-13;

double dual_exponent(int n) { return static_cast<double>(n) / (n - 1); }

struct Evaluator {
  const TestFunction& u;
  const AnnularDomain& dom;
  const LabConfig& cfg;

  NormResult fn(ReciprocalExponent s, double weight) const {
    return x_norm(u, {0, s, weight}, dom, cfg.quad, cfg.holder_part);
  }
  NormResult grad(ReciprocalExponent s, double weight) const {
    return weighted_gradient_xnorm(u, {1, s, weight}, dom, cfg.quad, cfg.holder_part);
  }
};

NamedValue factor(std::string name, const NormResult& r, double exponent) {
  return {std::move(name), r.value, exponent, r.err_estimate};
}

void finish(InequalityReport& rep, const LabConfig& cfg) {
  double rhs = 1.0;
  double rel = (rep.lhs > 0.0 ? rep.lhs_err / rep.lhs : 0.0) + kRelErrFloor;
  bool zero = false;
  for (const NamedValue& f : rep.rhs_factors) {
    if (f.exponent == 0.0) continue;
    if (f.value == 0.0) zero = true;
    rhs *= std::pow(f.value, f.exponent);
    if (f.value > 0.0) rel += std::abs(f.exponent) * f.err / f.value;
  }
  rep.rhs = rhs;
  if (cfg.claimed_constant) {
    rep.analytic_upper_bound = cfg.claimed_constant;
    rep.note = "tested against the claimed constant";
  }
  if (!std::isfinite(rep.lhs) || !std::isfinite(rhs)) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "non-finite norm";
    return;
  }
  if (zero || rhs == 0.0) {
    rep.empirical_ratio = 0.0;
    rep.verdict = Verdict::Inconclusive;
    rep.note = rep.lhs == 0.0 ? "0/0: zero function" : "vanishing right-hand side";
    return;
  }
  rep.empirical_ratio = rep.lhs / rhs;
  rep.ratio_err = rep.empirical_ratio * rel;
  if (rep.analytic_upper_bound) {
    const double limit = *rep.analytic_upper_bound * (1.0 + cfg.bound_tolerance) + 5.0 * rep.ratio_err;
    rep.verdict = rep.empirical_ratio > limit ? Verdict::Violated : Verdict::Bounded;
  } else {
    rep.verdict = Verdict::Bounded;
  }
}

void check_support(const TestFunction& u, const AnnularDomain& dom) {
  dom.validate();
  if (u.dimension() != dom.n) throw DomainError("function and domain dimensions differ");
  const AnnularDomain& s = u.support();
  const double tol = 1e-12 * dom.rho_out;
  if (s.rho_in < dom.rho_in - tol || s.rho_out > dom.rho_out + tol) {
    throw DomainError("test function support is not inside the domain");
  }
}

// values in [0,1]^d mapped onto the free parameter box
ParamMap decode(const FamilyDescriptor& fam, std::span<const double> z) {
  ParamMap out = fam.fixed;
  for (std::size_t i = 0; i < fam.free.size(); ++i) {
    const FamilyParam& p = fam.free[i];
    const double t = std::clamp(z[i], 0.0, 1.0);
    out[p.name] = p.log_scale ? std::exp(std::log(p.lo) + t * (std::log(p.hi) - std::log(p.lo)))
                              : p.lo + t * (p.hi - p.lo);
  }
  return out;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

CknTuple derive_tuple(InequalityKind kind, const CknTuple& given) {
  CknTuple t = given;
  const int n = t.n;
  if (n < 1) throw DomainError("dimension must be positive");
  const ReciprocalExponent inv_n(1.0 / n);
  switch (kind) {
    case InequalityKind::ClassicalHardy:
    case InequalityKind::LocalizedHardy:
      t.s_q = t.s_p;
      t.b = t.a + 1.0;
      break;
    case InequalityKind::GeneralizedSobolev:
      t.a = 0.0;
      t.b = 0.0;
      t.s_q = sobolev_conjugate(t.s_p, n);
      break;
    case InequalityKind::Interpolation: {
      const auto e = interpolate_pair(t.s_p, t.s_r, t.a, t.c, t.lambda);
      t.s_q = e.s;
      t.b = e.weight;
      break;
    }
    case InequalityKind::HardySobolev:
      t.b = n * (t.s_q.value() - t.s_p.value()) + 1.0 + t.a;
      break;
    case InequalityKind::GeneralizedCKN: {
      const auto e = ckn_targets(t.s_p, t.s_r, t.a, t.c, t.lambda, t.theta, n);
      t.s_q = e.s;
      t.b = e.weight;
      break;
    }
    case InequalityKind::EndpointLog:
      t.s_p = inv_n;
      t.s_q = ReciprocalExponent(0.0);
      t.b = t.a;
      break;
    case InequalityKind::EndpointCKN: {
      t.s_p = inv_n;
      const auto edge = edge_params(t.s_p, t.a, t.lambda, n);
      if (!(t.theta >= 0.0 && t.theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
      const auto e = interpolate_pair(edge.s, t.s_r, edge.weight, t.c, 1.0 - t.theta);
      t.s_q = e.s;
      t.b = e.weight;
      break;
    }
    case InequalityKind::TrudingerMoser:
      t.s_p = inv_n;
      break;
    case InequalityKind::KMethod: {
      if (!(t.theta >= 0.0 && t.theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
      const auto e = interpolate_pair(t.s_p, t.s_r, t.a, t.c, t.theta);
      t.s_q = e.s;
      t.b = e.weight;
      break;
    }
  }
  return t;
}

double localized_hardy_bound(const AnnularDomain& dom, double a, double p) {
  dom.validate();
  if (!(p >= 1.0)) throw DomainError("localized Hardy bound needs p >= 1");
  const double w_in = std::pow(dom.rho_in, -a);
  const double w_out = std::pow(dom.rho_out, -a);
  const double big = std::max(w_in, w_out);
  const double small = std::min(w_in, w_out);
  return big / small * (dom.rho_out - dom.rho_in) / dom.rho_in;
}

InequalityReport endpoint_log_check(const TestFunction& u, const AnnularDomain& dom, double a,
                                    double c2, const LabConfig& cfg) {
  if (!(c2 >= 1.0)) throw DomainError("C2 must be >= 1");
  check_support(u, dom);
  const int n = dom.n;
  const Evaluator ev{u, dom, cfg};
  const ReciprocalExponent sn(1.0 / n);
  const NormResult sup = ev.fn(ReciprocalExponent(0.0), a);
  const NormResult g = ev.grad(sn, a);
  const NormResult h = ev.fn(sn, a + 1.0);

  InequalityReport rep;
  rep.kind = InequalityKind::EndpointLog;
  rep.tuple.n = n;
  rep.tuple.s_p = sn;
  rep.tuple.s_q = ReciprocalExponent(0.0);
  rep.tuple.a = a;
  rep.tuple.b = a;
  rep.domain = dom;
  rep.family = u.family();
  rep.member = u.params();
  rep.lhs_name = "sup |x|^-a u";
  rep.lhs = sup.value;
  rep.lhs_err = sup.err_estimate;
  if (h.value == 0.0) {
    rep.rhs_factors = {factor("|x|^-a Du|_n", g, 1.0)};
    rep.verdict = Verdict::Inconclusive;
    rep.note = "0/0: zero function";
    return rep;
  }
  const double gamma = c2 + g.value / h.value;
  const double logf = std::pow(1.0 + std::log(gamma), 1.0 / dual_exponent(n));
  // d logf / logf from the errors of g and h through Gamma
  const double dgamma = (g.value / h.value) * (g.err_estimate / g.value + h.err_estimate / h.value);
  const double dlog = logf * dgamma / (gamma * (1.0 + std::log(gamma)) * dual_exponent(n));
  rep.rhs_factors = {factor("|x|^-a Du|_n", g, 1.0),
                     {"(1+log Gamma)^(1/n')", logf, 1.0, dlog}};
  finish(rep, cfg);
  return rep;
}

double level_set_measure(const TestFunction& v, const AnnularDomain& dom, double t,
                         const QuadratureSpec& q) {
  dom.validate();
  const int n = dom.n;
  std::vector<double> dirs;
  std::vector<double> weights;
  if (v.is_radial() && q.exploit_radial_symmetry) {
    dirs.assign(n, 0.0);
    dirs[0] = 1.0;
    weights.push_back(unit_sphere_area(n));
  } else {
    const SphereRule rule(n, q.sphere_points);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto d = rule.direction(i);
      dirs.insert(dirs.end(), d.begin(), d.end());
      weights.push_back(rule.weight(i));
    }
  }
  const int count = 16 * q.radial_nodes + 1;
  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i) {
    radii[i] = dom.rho_in + (dom.rho_out - dom.rho_in) * i / (count - 1);
  }
  Point x(n);
  double total = 0.0;
  for (std::size_t d = 0; d < weights.size(); ++d) {
    auto h = [&](double r) {
      for (int c = 0; c < n; ++c) x[c] = r * dirs[d * n + c];
      return std::abs(v(x)) - t;
    };
    auto crossing = [&](double lo, double hi, double hlo) {
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        if ((hm > 0.0) == (hlo > 0.0)) {
          lo = mid;
          hlo = hm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    };
    double inside = 0.0;
    double prev = h(radii[0]);
    double start = prev > 0.0 ? radii[0] : 0.0;
    for (int i = 1; i < count; ++i) {
      const double cur = h(radii[i]);
      if ((cur > 0.0) != (prev > 0.0)) {
        const double r = crossing(radii[i - 1], radii[i], prev);
        if (cur > 0.0) {
          start = r;
        } else {
          inside += (std::pow(r, n) - std::pow(start, n)) / n;
        }
      }
      prev = cur;
    }
    if (prev > 0.0) inside += (std::pow(radii.back(), n) - std::pow(start, n)) / n;
    total += weights[d] * inside;
  }
  return total;
}

TmReport trudinger_moser_check(const TestFunction& v, const AnnularDomain& dom,
                               const std::vector<double>& alpha_grid, const LabConfig& cfg,
                               int level_count) {
  check_support(v, dom);
  if (level_count < 4) throw DomainError("Trudinger-Moser check needs at least 4 levels");
  const int n = dom.n;
  const double np = dual_exponent(n);
  TmReport rep;
  rep.alpha_grid = alpha_grid;
  rep.grad_norm = lp_norm(weighted_gradient_sampler(v, 0.0), n, dom, cfg.quad).value;
  if (!(rep.grad_norm > 0.0)) throw DomainError("Trudinger-Moser check needs a nonzero gradient");
  const double scale = std::pow(rep.grad_norm, np);

  rep.finite = true;
  for (double alpha : alpha_grid) {
    const Sampler s{n,
                    [&](std::span<const double> x) {
                      return std::exp(alpha * std::pow(std::abs(v(x)), np) / scale);
                    },
                    v.is_radial()};
    const IntegralResult r = integrate_annulus(s, dom, cfg.quad, cfg.quad.target_rel_err);
    rep.integrals.push_back(r.value);
    rep.integral_errs.push_back(r.err);
    rep.finite = rep.finite && std::isfinite(r.value);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.integrals.size(); ++i) {
    if (alpha_grid[i] > alpha_grid[i - 1] && !(rep.integrals[i] > rep.integrals[i - 1])) {
      rep.monotone = false;
    }
  }

  rep.sup = sup_norm(v, 0.0, dom, cfg.quad).value;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 1; k < level_count; ++k) {
    const double t = rep.sup * k / level_count;
    const double mu = level_set_measure(v, dom, t, cfg.quad);
    rep.levels.push_back(t);
    rep.measures.push_back(mu);
    if (2 * k >= level_count && mu > 0.0) {
      xs.push_back(std::pow(t, np));
      ys.push_back(std::log(mu));
    }
  }
  rep.fit_points = static_cast<int>(xs.size());
  if (xs.size() >= 2) {
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    rep.slope = sxy / sxx;
    rep.intercept = my - rep.slope * mx;
    rep.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  }
  return rep;
}

InequalityReport evaluate_instance(InequalityKind kind, const CknTuple& tuple,
                                   const TestFunction& u, const AnnularDomain& dom,
                                   const LabConfig& cfg) {
  const auto violations = validate_admissible(kind, tuple);
  if (!violations.empty()) {
    std::string msg = std::string(to_string(kind)) + " tuple not admissible:";
    for (const auto& v : violations) msg += " [" + v.constraint + ": " + v.detail + "]";
    throw AdmissibilityError(msg, violations);
  }
  check_support(u, dom);
  const Evaluator ev{u, dom, cfg};
  const CknTuple& t = tuple;

  InequalityReport rep;
  rep.kind = kind;
  rep.tuple = t;
  rep.domain = dom;
  rep.family = u.family();
  rep.member = u.params();

  auto set_lhs = [&](const NormResult& r, std::string name) {
    rep.lhs = r.value;
    rep.lhs_err = r.err_estimate;
    rep.lhs_name = std::move(name);
  };

  switch (kind) {
    case InequalityKind::ClassicalHardy:
    case InequalityKind::LocalizedHardy: {
      set_lhs(ev.fn(t.s_q, t.b), "|x|^-b u|_q");
      rep.rhs_factors = {factor("|x|^-a Du|_p", ev.grad(t.s_p, t.a), 1.0)};
      if (kind == InequalityKind::ClassicalHardy) {
        if (t.a == 0.0) rep.analytic_upper_bound = hardy_constant(t.n, t.s_p.exponent());
      } else {
        rep.analytic_upper_bound = localized_hardy_bound(dom, t.a, t.s_p.exponent());
      }
      break;
    }
    case InequalityKind::GeneralizedSobolev:
      set_lhs(ev.fn(t.s_q, 0.0), cfg.holder_part == HolderPart::SeminormOnly && t.s_q.value() < 0.0
                                     ? "[u]_q"
                                     : "|u|_q");
      rep.rhs_factors = {factor("|Du|_p", ev.grad(t.s_p, 0.0), 1.0)};
      break;
    case InequalityKind::Interpolation:
      set_lhs(ev.fn(t.s_q, t.b), "|x|^-b u|_q");
      rep.rhs_factors.push_back(factor("|x|^-a u|_p", ev.fn(t.s_p, t.a), 1.0 - t.lambda));
      if (t.lambda != 0.0) {
        rep.rhs_factors.push_back(factor("|x|^-c u|_r", ev.fn(t.s_r, t.c), t.lambda));
      }
      if (t.s_p.value() > 0.0 && t.s_r.value() > 0.0) rep.analytic_upper_bound = 1.0;
      break;
    case InequalityKind::HardySobolev:
      set_lhs(ev.fn(t.s_q, t.b), "|x|^-b u|_q");
      rep.rhs_factors = {factor("|x|^-a Du|_p", ev.grad(t.s_p, t.a), 1.0)};
      break;
    case InequalityKind::GeneralizedCKN:
      set_lhs(ev.fn(t.s_q, t.b), "|x|^-b u|_q");
      if (t.theta != 0.0) {
        rep.rhs_factors.push_back(factor("|x|^-a Du|_p", ev.grad(t.s_p, t.a), t.theta));
      }
      if (t.theta != 1.0) {
        rep.rhs_factors.push_back(factor("|x|^-c u|_r", ev.fn(t.s_r, t.c), 1.0 - t.theta));
      }
      break;
    case InequalityKind::EndpointLog: {
      InequalityReport r = endpoint_log_check(u, dom, t.a, cfg.c2, cfg);
      r.tuple = t;
      return r;
    }
    case InequalityKind::EndpointCKN: {
      set_lhs(ev.fn(t.s_q, t.b), "|x|^-b u|_q");
      const ReciprocalExponent sn(1.0 / t.n);
      if (t.theta != 0.0) {
        const NormResult g = ev.grad(sn, t.a);
        const NormResult h = ev.fn(sn, t.a + 1.0);
        rep.rhs_factors.push_back(factor("|x|^-a Du|_n", g, t.theta));
        if (h.value > 0.0) {
          const double gamma = cfg.c2 + g.value / h.value;
          rep.rhs_factors.push_back(
              {"(1+log Gamma)^(1/n')", std::pow(1.0 + std::log(gamma), 1.0 / dual_exponent(t.n)),
               t.theta, 0.0});
        }
      }
      if (t.theta != 1.0) {
        rep.rhs_factors.push_back(factor("|x|^-c u|_r", ev.fn(t.s_r, t.c), 1.0 - t.theta));
      }
      break;
    }
    case InequalityKind::TrudingerMoser: {
      rep.lhs_name = "int exp(alpha |u|^n' / |Du|_n^n')";
      const NormResult g = lp_norm(weighted_gradient_sampler(u, 0.0), t.n, dom, cfg.quad);
      if (g.value == 0.0) {
        rep.verdict = Verdict::Inconclusive;
        rep.note = "zero gradient";
        return rep;
      }
      const TmReport tm = trudinger_moser_check(u, dom, {cfg.tm_alpha}, cfg, kTmLevels);
      rep.lhs = tm.integrals.front();
      rep.lhs_err = tm.integral_errs.front();
      rep.rhs_factors = {{"|Omega|", dom.volume(), 1.0, 0.0}};
      break;
    }
    case InequalityKind::KMethod: {
      KConfig k = cfg.kcfg;
      k.quad = cfg.quad;
      k.holder_part = cfg.holder_part;
      InequalityReport r = verify_k_inequality(u, {0, t.s_p, t.a}, {0, t.s_r, t.c}, t.theta, dom, k);
      r.tuple = t;
      if (cfg.claimed_constant && r.verdict != Verdict::Inconclusive) finish(r, cfg);
      return r;
    }
  }
  finish(rep, cfg);
  return rep;
}

TestFunction family_member(const FamilyDescriptor& fam, const ParamMap& values,
                           AnnularDomain& dom_out) {
  ParamMap params = values;
  AnnularDomain dom = fam.domain;
  if (auto it = params.find("rho_in"); it != params.end()) {
    dom.rho_in = it->second;
    params.erase(it);
  }
  if (auto it = params.find("rho_out"); it != params.end()) {
    dom.rho_out = it->second;
    params.erase(it);
  }
  dom.validate();
  dom_out = dom;
  return make_family_member(fam.family, dom, params);
}

ConstantEstimate estimate_constant(InequalityKind kind, const CknTuple& tuple,
                                   const FamilyDescriptor& fam, const LabConfig& cfg,
                                   const OptimizerConfig& opt) {
  if (opt.scan_points < 1) throw DomainError("optimizer needs at least one scan point");
  for (const FamilyParam& p : fam.free) {
    if (!(p.hi >= p.lo) || (p.log_scale && !(p.lo > 0.0))) {
      throw DomainError("bad range for family parameter " + p.name);
    }
  }
  const auto violations = validate_admissible(kind, tuple);
  if (!violations.empty()) {
    std::string msg = std::string(to_string(kind)) + " tuple not admissible:";
    for (const auto& v : violations) msg += " [" + v.constraint + ": " + v.detail + "]";
    throw AdmissibilityError(msg, violations);
  }

  ConstantEstimate est;
  est.kind = kind;
  bool any = false;
  auto evaluate = [&](std::span<const double> z) -> double {
    ++est.n_evaluations;
    const ParamMap values = decode(fam, z);
    try {
      AnnularDomain dom;
      const TestFunction u = family_member(fam, values, dom);
      InequalityReport rep = evaluate_instance(kind, tuple, u, dom, cfg);
      if (rep.verdict == Verdict::Inconclusive || !std::isfinite(rep.empirical_ratio)) {
        ++est.n_inconclusive;
        return -1.0;
      }
      const double ratio = rep.empirical_ratio;
      if (opt.record_reports) est.evaluated.push_back(rep);
      if (!any || ratio > est.sup_ratio) {
        est.sup_ratio = ratio;
        est.argmax = values;
        est.best = std::move(rep);
      }
      any = true;
      return ratio;
    } catch (const AccuracyError&) {
      ++est.n_inconclusive;
      return -1.0;
    } catch (const AdmissibilityError&) {
      throw;
    } catch (const DomainError&) {
      ++est.n_inconclusive;
      return -1.0;
    }
  };

  const std::size_t d = fam.free.size();
  if (d == 0) {
    evaluate({});
    if (!any) throw DomainError("every family evaluation was inconclusive");
    est.trace.push_back(est.sup_ratio);
    return est;
  }

  // Latin hypercube: one stratum per point and dimension
  std::mt19937_64 rng(opt.seed);
  const int m = opt.scan_points;
  std::vector<std::vector<double>> points(m, std::vector<double>(d));
  std::vector<int> perm(m);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = m - 1; i > 0; --i) {
      const int k = static_cast<int>(std::min<double>(i, std::floor(unit_uniform(rng) * (i + 1))));
      std::swap(perm[i], perm[k]);
    }
    for (int i = 0; i < m; ++i) points[i][j] = (perm[i] + unit_uniform(rng)) / m;
  }
  std::vector<double> scores(m);
  for (int i = 0; i < m; ++i) scores[i] = evaluate(points[i]);
  if (!any) throw DomainError("every family evaluation was inconclusive");
  est.trace.push_back(est.sup_ratio);

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  const int starts = std::min(opt.refine_starts, m);
  const std::vector<double> steps(d, 0.1);
  NelderMeadOptions nm;
  nm.max_evaluations = opt.max_evaluations;
  nm.ftol = 1e-10;
  nm.xtol = 1e-8;
  for (int s = 0; s < starts; ++s) {
    if (scores[order[s]] < 0.0) break;
    std::vector<double> x0 = points[order[s]];
    // step inward so the simplex starts inside the box
    std::vector<double> st(steps);
    for (std::size_t j = 0; j < d; ++j) {
      if (x0[j] + st[j] > 1.0) st[j] = -st[j];
    }
    nelder_mead(
        [&](std::span<const double> z) {
          std::vector<double> c(z.begin(), z.end());
          for (double& v : c) v = std::clamp(v, 0.0, 1.0);
          return -evaluate(c);
        },
        x0, st, nm);
    est.trace.push_back(est.sup_ratio);
  }
  return est;
}

}  // namespace ckn
