#include "cknlab/norm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cknlab/errors.hpp"
#include "cknlab/nelder_mead.hpp"

namespace ckn {

namespace {

constexpr int kMaxDepth = 40;
constexpr long kMaxPanels = 4096;  // halvings per adaptive run
constexpr double kEps = 2.220446049250313e-16;
constexpr double kRoundingFloor = 1e-14;
constexpr int kRefinePairs = 4;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dist(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// radius of x pulled into [ri, ro]
void clamp_into(std::span<double> x, double ri, double ro) {
  const double r = norm2(x);
  if (r == 0.0) {
    x[0] = ri;
    return;
  }
  const double target = std::clamp(r, ri, ro);
  if (target == r) return;
  for (double& v : x) v *= target / r;
}

std::vector<double> geometric_grid(double r0, double r1, int count) {
  std::vector<double> out(count);
  const double lr = std::log(r1 / r0);
  for (int i = 0; i < count; ++i) out[i] = r0 * std::exp(lr * i / (count - 1));
  out.front() = r0;
  out.back() = r1;
  return out;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t count) {
  return std::min(count - 1, static_cast<std::size_t>(unit_uniform(rng) * count));
}

// Integrand in tau = log r for a fixed sphere rule (or the radial shortcut).
class TauIntegrand {
 public:
  TauIntegrand(const Sampler& g, const SphereRule* sphere)
      : g_(g), sphere_(sphere), omega_(unit_sphere_area(g.n)), x_(g.n, 0.0) {}

  // Signed value; the integral of |g| over the same sphere lands in last_abs.
  double operator()(double tau) {
    const double r = std::exp(tau);
    const double jac = std::pow(r, g_.n);  // r^{n-1} dr/dtau
    double s = 0.0;
    double a = 0.0;
    if (sphere_ == nullptr) {
      std::fill(x_.begin(), x_.end(), 0.0);
      x_[0] = r;
      s = omega_ * g_.f(x_);
      a = std::abs(s);
      ++evals;
    } else {
      for (std::size_t i = 0; i < sphere_->size(); ++i) {
        const auto d = sphere_->direction(i);
        for (int c = 0; c < g_.n; ++c) x_[c] = r * d[c];
        const double v = sphere_->weight(i) * g_.f(x_);
        s += v;
        a += std::abs(v);
      }
      evals += sphere_->size();
    }
    last_abs = jac * a;
    return jac * s;
  }

  std::size_t evals = 0;
  double last_abs = 0.0;

 private:
  const Sampler& g_;
  const SphereRule* sphere_;
  double omega_;
  Point x_;
};

struct Adaptive {
  double value = 0.0;
  double err = 0.0;
  double mag = 0.0;  // integral of |g|
};

class AdaptiveRadial {
 public:
  AdaptiveRadial(TauIntegrand& f, const GaussRule& gl, double t0, double t1)
      : f_(f), gl_(gl), span_(t1 - t0) {}

  // Panel halving until |L + R - P| <= tol * width / span, with tol measured
  // against the integral of |g| so that cancelling integrands still stop.
  // Hitting the panel cap leaves converged() false.
  Adaptive run(double t0, double t1, int panels, double rel_tol) {
    std::vector<double> edges(panels + 1);
    for (int k = 0; k <= panels; ++k) edges[k] = t0 + (t1 - t0) * k / panels;
    edges.back() = t1;
    std::vector<double> vals(panels);
    double ref = 0.0;
    for (int k = 0; k < panels; ++k) {
      double mag = 0.0;
      vals[k] = panel(edges[k], edges[k + 1], mag);
      ref += mag;
    }
    tol_ = rel_tol * ref;
    out_ = {};
    budget_ = kMaxPanels;
    converged_ = true;
    for (int k = 0; k < panels; ++k) refine(edges[k], edges[k + 1], vals[k], 0);
    return out_;
  }

  bool converged() const noexcept { return converged_; }

 private:
  double panel(double a, double b, double& mag) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    mag = 0.0;
    for (std::size_t i = 0; i < gl_.nodes.size(); ++i) {
      s += gl_.weights[i] * f_(mid + half * gl_.nodes[i]);
      mag += gl_.weights[i] * f_.last_abs;
    }
    mag *= half;
    return half * s;
  }

  void refine(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    double ml = 0.0;
    double mr = 0.0;
    const double left = panel(a, m, ml);
    const double right = panel(m, b, mr);
    const double diff = std::abs(left + right - whole);
    const bool ok = diff <= tol_ * (b - a) / span_ || diff <= 64.0 * kEps * (ml + mr);
    --budget_;
    if (ok || depth >= kMaxDepth || budget_ <= 0) {
      if (!ok) converged_ = false;
      out_.value += left + right;
      out_.err += diff;
      out_.mag += ml + mr;
      return;
    }
    refine(a, m, left, depth + 1);
    refine(m, b, right, depth + 1);
  }

  TauIntegrand& f_;
  const GaussRule& gl_;
  double span_;
  double tol_ = 0.0;
  long budget_ = 0;
  bool converged_ = true;
  Adaptive out_;
};

std::vector<double> directions_for(const Sampler& g, const QuadratureSpec& q, int level) {
  if (g.radial && q.exploit_radial_symmetry) {
    std::vector<double> e(g.n, 0.0);
    e[0] = 1.0;
    return e;
  }
  return nested_directions(g.n, q.sphere_points, level);
}

void check_inputs(const Sampler& g, const AnnularDomain& dom, const QuadratureSpec& q) {
  dom.validate();
  q.validate(dom.n);
  if (g.n != dom.n) throw DomainError("sampler dimension does not match the domain");
  if (!g.f) throw DomainError("empty sampler");
}

double golden_max(const std::function<double(double)>& h, double a, double b, double& arg) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = h(c);
  double fd = h(d);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = h(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = h(d);
    }
  }
  if (fc >= fd) {
    arg = c;
    return fc;
  }
  arg = d;
  return fd;
}

// One level of the sampled sup: grid max plus local polish.
double sup_level(const Sampler& g, const AnnularDomain& dom, const QuadratureSpec& q, int level) {
  const int n = g.n;
  const std::vector<double> radii =
      geometric_grid(dom.rho_in, dom.rho_out, q.radial_nodes * (1 << level) + 1);
  const std::vector<double> dirs = directions_for(g, q, level);
  const std::size_t nd = dirs.size() / n;
  Point x(n);
  double best = -1.0;
  std::size_t bi = 0;
  std::size_t bd = 0;
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
      for (int c = 0; c < n; ++c) x[c] = radii[i] * dirs[d * n + c];
      const double v = std::abs(g.f(x));
      if (v > best) {
        best = v;
        bi = i;
        bd = d;
      }
    }
  }
  const std::span<const double> dir(dirs.data() + bd * n, n);
  auto along = [&](double r) {
    for (int c = 0; c < n; ++c) x[c] = r * dir[c];
    return std::abs(g.f(x));
  };
  const double lo = radii[bi == 0 ? 0 : bi - 1];
  const double hi = radii[std::min(bi + 1, radii.size() - 1)];
  double r_star = radii[bi];
  best = std::max(best, golden_max(along, lo, hi, r_star));

  if (!(g.radial && q.exploit_radial_symmetry) && best > 0.0) {
    Point x0(n);
    for (int c = 0; c < n; ++c) x0[c] = r_star * dir[c];
    const double step = 0.5 * (hi - lo) + r_star * std::numbers::pi / static_cast<double>(nd);
    std::vector<double> steps(n, step);
    Point y(n);
    auto neg = [&](std::span<const double> z) {
      std::copy(z.begin(), z.end(), y.begin());
      clamp_into(y, dom.rho_in, dom.rho_out);
      return -std::abs(g.f(y));
    };
    NelderMeadOptions opts;
    opts.max_evaluations = 200 * n;
    const auto res = nelder_mead(neg, x0, steps, opts);
    best = std::max(best, -res.value);
  }
  return best;
}

struct SamplePoint {
  Point x;
  double g;
};

// Sample set for the pair sweep at one level, at most `budget` points.
std::vector<SamplePoint> holder_pool(const Sampler& g, const AnnularDomain& dom,
                                     const QuadratureSpec& q, int level) {
  const int n = g.n;
  const std::size_t budget = static_cast<std::size_t>(q.holder_pair_budget);
  std::vector<SamplePoint> pool;
  if (g.radial && q.exploit_radial_symmetry) {
    const int count = std::min<int>(q.radial_nodes * (1 << level) + 1, static_cast<int>(budget));
    for (double r : geometric_grid(dom.rho_in, dom.rho_out, std::max(count, 2))) {
      Point x(n, 0.0);
      x[0] = r;
      const double v = g.f(x);
      pool.push_back({std::move(x), v});
    }
    return pool;
  }
  const std::vector<double> radii = geometric_grid(
      dom.rho_in, dom.rho_out, std::max(2, q.radial_nodes / 8) * (1 << level) + 1);
  const std::vector<double> dirs = nested_directions(n, q.sphere_points, level);
  const std::size_t nd = dirs.size() / n;
  const std::size_t total = radii.size() * nd;
  std::vector<std::size_t> chosen;
  const std::size_t candidates = std::min(total, 16 * budget);
  if (candidates == total) {
    chosen.resize(total);
    for (std::size_t k = 0; k < total; ++k) chosen[k] = k;
  } else {
    std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(level));
    chosen.resize(candidates);
    for (auto& k : chosen) k = uniform_index(rng, total);
  }
  std::vector<SamplePoint> cand;
  cand.reserve(chosen.size());
  for (std::size_t k : chosen) {
    const std::size_t i = k / nd;
    const std::size_t d = k % nd;
    Point x(n);
    for (int c = 0; c < n; ++c) x[c] = radii[i] * dirs[d * n + c];
    const double v = g.f(x);
    cand.push_back({std::move(x), v});
  }
  if (cand.size() <= budget) return cand;

  // keep the extremes, fill the rest by a seeded shuffle
  std::size_t imax = 0;
  std::size_t imin = 0;
  for (std::size_t k = 1; k < cand.size(); ++k) {
    if (cand[k].g > cand[imax].g) imax = k;
    if (cand[k].g < cand[imin].g) imin = k;
  }
  std::swap(cand[0], cand[imax]);
  if (imin == 0) imin = imax;
  std::swap(cand[1], cand[imin]);
  std::mt19937_64 rng(0xfeedULL + static_cast<unsigned>(level));
  for (std::size_t k = 2; k < budget; ++k) {
    const std::size_t j = k + uniform_index(rng, cand.size() - k);
    std::swap(cand[k], cand[j]);
  }
  cand.resize(budget);
  return cand;
}

double seminorm_level(const Sampler& g, double alpha, const AnnularDomain& dom,
                      const QuadratureSpec& q, int level) {
  const int n = g.n;
  const bool ray = g.radial && q.exploit_radial_symmetry;
  const std::vector<SamplePoint> pool = holder_pool(g, dom, q, level);
  const double min_sep = 1e-9 * dom.diameter();

  // best partner per row
  std::vector<double> row_q(pool.size(), 0.0);
  std::vector<std::size_t> row_j(pool.size(), 0);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const double dg = std::abs(pool[i].g - pool[j].g);
      if (dg == 0.0) continue;
      const double d = dist(pool[i].x, pool[j].x);
      if (d < min_sep) continue;
      const double qv = dg / std::pow(d, alpha);
      if (qv > row_q[i]) {
        row_q[i] = qv;
        row_j[i] = j;
      }
    }
  }
  std::vector<std::size_t> rows(pool.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const std::size_t k = std::min<std::size_t>(kRefinePairs, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + k, rows.end(), [&](std::size_t a, std::size_t b) {
    return row_q[a] > row_q[b] || (row_q[a] == row_q[b] && a < b);
  });
  double best = row_q.empty() ? 0.0 : row_q[rows[0]];
  if (best <= 0.0) return 0.0;

  Point x(n);
  Point y(n);
  auto quotient = [&](std::span<const double> z) {
    if (ray) {
      std::fill(x.begin(), x.end(), 0.0);
      std::fill(y.begin(), y.end(), 0.0);
      x[0] = std::clamp(z[0], dom.rho_in, dom.rho_out);
      y[0] = std::clamp(z[1], dom.rho_in, dom.rho_out);
    } else {
      std::copy(z.begin(), z.begin() + n, x.begin());
      std::copy(z.begin() + n, z.end(), y.begin());
      clamp_into(x, dom.rho_in, dom.rho_out);
      clamp_into(y, dom.rho_in, dom.rho_out);
    }
    const double d = dist(x, y);
    if (d < min_sep) return 0.0;
    return std::abs(g.f(x) - g.f(y)) / std::pow(d, alpha);
  };
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t i = rows[r];
    if (row_q[i] <= 0.0) break;
    const SamplePoint& a = pool[i];
    const SamplePoint& b = pool[row_j[i]];
    std::vector<double> z0;
    if (ray) {
      z0 = {a.x[0], b.x[0]};
    } else {
      z0 = a.x;
      z0.insert(z0.end(), b.x.begin(), b.x.end());
    }
    const double sep = dist(a.x, b.x);
    std::vector<double> steps(z0.size(), std::max(0.25 * sep, 1e-6 * dom.diameter()));
    NelderMeadOptions opts;
    opts.max_evaluations = 150 * static_cast<int>(z0.size());
    const auto res = nelder_mead([&](std::span<const double> z) { return -quotient(z); }, z0,
                                 steps, opts);
    best = std::max(best, -res.value);
  }
  return best;
}

}  // namespace

IntegralResult integrate_annulus(const Sampler& g, const AnnularDomain& dom,
                                 const QuadratureSpec& q, double rel_target) {
  check_inputs(g, dom, q);
  const double t0 = std::log(dom.rho_in);
  const double t1 = std::log(dom.rho_out);
  const int panels = std::max(1, q.radial_nodes / q.radial_order);
  const GaussRule gl = gauss_legendre(q.radial_order);
  const double radial_tol = 0.25 * rel_target;

  if (g.radial && q.exploit_radial_symmetry) {
    TauIntegrand f(g, nullptr);
    AdaptiveRadial ad(f, gl, t0, t1);
    const Adaptive res = ad.run(t0, t1, panels, radial_tol);
    if (!ad.converged()) {
      throw AccuracyError("radial quadrature hit its panel cap before relative error " +
                              num(rel_target),
                          res.value, res.err);
    }
    return {res.value, res.err + kRoundingFloor * std::abs(res.value), 1, f.evals};
  }

  IntegralResult prev;
  std::size_t evals = 0;
  for (int level = 0; level <= q.refinement_levels; ++level) {
    const SphereRule sphere(g.n, q.sphere_points << level);
    TauIntegrand f(g, &sphere);
    AdaptiveRadial ad(f, gl, t0, t1);
    const Adaptive res = ad.run(t0, t1, panels, radial_tol);
    evals += f.evals;
    IntegralResult cur{res.value, res.err, level + 1, evals};
    if (level > 0 && ad.converged()) {
      cur.err = std::abs(cur.value - prev.value) + res.err + kRoundingFloor * std::abs(cur.value);
      if (cur.err <= rel_target * res.mag || res.mag == 0.0) {
        return cur;
      }
    }
    prev = cur;
  }
  throw AccuracyError("integral did not reach relative error " + num(rel_target) +
                          " after " + std::to_string(q.refinement_levels) + " refinements",
                      prev.value, prev.err);
}

NormResult lp_norm(const Sampler& g, double p, const AnnularDomain& dom, const QuadratureSpec& q) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm needs 1 <= p < inf");
  check_inputs(g, dom, q);

  // scale by a sampled max so that |g/M|^p stays representable for large p
  double m = 0.0;
  {
    const std::vector<double> radii = geometric_grid(dom.rho_in, dom.rho_out, q.radial_nodes + 1);
    const std::vector<double> dirs = directions_for(g, q, 0);
    Point x(g.n);
    for (std::size_t d = 0; d < dirs.size() / g.n; ++d) {
      for (double r : radii) {
        for (int c = 0; c < g.n; ++c) x[c] = r * dirs[d * g.n + c];
        m = std::max(m, std::abs(g.f(x)));
      }
    }
    if (!(m > 0.0) || !std::isfinite(m)) m = 1.0;
  }
  Sampler h{g.n, [&](std::span<const double> x) { return std::pow(std::abs(g.f(x)) / m, p); },
            g.radial};

  NormResult out;
  out.regime = Regime::Lebesgue;
  IntegralResult integral;
  try {
    integral = integrate_annulus(h, dom, q, p * q.target_rel_err);
  } catch (const AccuracyError& e) {
    const double best = m * std::pow(std::max(e.best_estimate(), 0.0), 1.0 / p);
    const double rel = e.best_estimate() > 0.0 ? e.err_estimate() / (p * e.best_estimate()) : 0.0;
    throw AccuracyError(e.what(), best, best * rel);
  }
  const double integral_value = std::max(integral.value, 0.0);
  out.value = m * std::pow(integral_value, 1.0 / p);
  out.err_estimate =
      (integral_value > 0.0 ? out.value * integral.err / (p * integral_value) : 0.0) +
      kRoundingFloor * out.value;
  out.levels = integral.levels;
  return out;
}

NormResult sampled_sup(const Sampler& g, const AnnularDomain& dom, const QuadratureSpec& q) {
  check_inputs(g, dom, q);
  NormResult out;
  out.regime = Regime::Infinity;
  out.is_lower_bound = true;
  double prev = 0.0;
  double cur = 0.0;
  for (int level = 0; level <= q.refinement_levels; ++level) {
    prev = cur;
    cur = std::max(cur, sup_level(g, dom, q, level));
    out.levels = level + 1;
    if (level > 0 && cur - prev <= q.target_rel_err * cur) break;
  }
  out.value = cur;
  out.err_estimate = (cur - prev) + kRoundingFloor * cur;
  return out;
}

NormResult sampled_holder(const Sampler& g, double alpha, const AnnularDomain& dom,
                          const QuadratureSpec& q, HolderPart part) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("Hölder exponent must lie in (0, 1], got " + num(alpha));
  }
  check_inputs(g, dom, q);
  NormResult out;
  out.regime = Regime::Holder;
  out.is_lower_bound = true;
  if (part == HolderPart::Full) {
    const NormResult s = sampled_sup(g, dom, q);
    out.sup_part = s.value;
    out.err_estimate += s.err_estimate;
  }
  double prev = 0.0;
  double cur = 0.0;
  for (int level = 0; level <= q.refinement_levels; ++level) {
    prev = cur;
    cur = std::max(cur, seminorm_level(g, alpha, dom, q, level));
    out.levels = std::max(out.levels, level + 1);
    if (level > 0 && cur - prev <= q.target_rel_err * cur) break;
  }
  out.seminorm_part = cur;
  out.err_estimate += (cur - prev) + kRoundingFloor * cur;
  out.value = out.sup_part + out.seminorm_part;
  return out;
}

Sampler weighted_sampler(const TestFunction& u, double a) {
  if (a == 0.0) return {u.dimension(), [u](std::span<const double> x) { return u(x); }, u.is_radial()};
  return {u.dimension(),
          [u, a](std::span<const double> x) { return std::pow(norm2(x), -a) * u(x); },
          u.is_radial()};
}

Sampler weighted_gradient_sampler(const TestFunction& u, double a) {
  return {u.dimension(),
          [u, a](std::span<const double> x) {
            thread_local Point grad;
            grad.resize(x.size());
            u.gradient(x, grad);
            const double w = (a == 0.0) ? 1.0 : std::pow(norm2(x), -a);
            return w * norm2(grad);
          },
          u.is_radial()};
}

NormResult lebesgue_norm(const TestFunction& u, double a, ReciprocalExponent s,
                         const AnnularDomain& dom, const QuadratureSpec& q) {
  if (!(s.value() > 0.0 && s.value() <= 1.0)) {
    throw DomainError("lebesgue_norm needs 1/p in (0, 1], got " + num(s.value()));
  }
  return lp_norm(weighted_sampler(u, a), s.exponent(), dom, q);
}

NormResult sup_norm(const TestFunction& u, double a, const AnnularDomain& dom,
                    const QuadratureSpec& q) {
  return sampled_sup(weighted_sampler(u, a), dom, q);
}

NormResult holder_norm(const TestFunction& u, double b, double alpha, const AnnularDomain& dom,
                       const QuadratureSpec& q, HolderPart part) {
  return sampled_holder(weighted_sampler(u, b), alpha, dom, q, part);
}

namespace {

double admissible_alpha(const SpaceSpec& spec, int n) {
  const double s = spec.s.value();
  if (!(s > -1.0 / n + 1e-12 && s <= 1.0 + 1e-12)) {
    throw DomainError("1/p = " + num(s) + " outside (-1/n, 1] for n = " +
                      std::to_string(n));
  }
  if (s >= 0.0) return 0.0;
  const HolderIndex h = holder_index(spec.s, n);
  if (h.k1 != 0) throw DomainError("Hölder index with (p)_1 != 0 is out of range");
  return h.alpha;
}

}  // namespace

NormResult x_norm(const TestFunction& u, const SpaceSpec& spec, const AnnularDomain& dom,
                  const QuadratureSpec& q, HolderPart part) {
  const double alpha = admissible_alpha(spec, dom.n);
  switch (classify_regime(spec.s)) {
    case Regime::Lebesgue:
      return lebesgue_norm(u, spec.a, ReciprocalExponent(std::min(spec.s.value(), 1.0)), dom, q);
    case Regime::Infinity:
      return sup_norm(u, spec.a, dom, q);
    case Regime::Holder:
      return holder_norm(u, spec.a, alpha, dom, q, part);
  }
  throw DomainError("unreachable regime");
}

NormResult weighted_gradient_xnorm(const TestFunction& u, const SpaceSpec& spec,
                                   const AnnularDomain& dom, const QuadratureSpec& q,
                                   HolderPart part) {
  const double alpha = admissible_alpha(spec, dom.n);
  switch (classify_regime(spec.s)) {
    case Regime::Lebesgue:
      return lp_norm(weighted_gradient_sampler(u, spec.a), spec.s.exponent(), dom, q);
    case Regime::Infinity:
      return sampled_sup(weighted_gradient_sampler(u, spec.a), dom, q);
    case Regime::Holder: {
      NormResult total;
      total.regime = Regime::Holder;
      total.is_lower_bound = true;
      const double a = spec.a;
      for (int i = 0; i < dom.n; ++i) {
        Sampler gi{dom.n,
                   [u, a, i](std::span<const double> x) {
                     thread_local Point grad;
                     grad.resize(x.size());
                     u.gradient(x, grad);
                     const double w = (a == 0.0) ? 1.0 : std::pow(norm2(x), -a);
                     return w * grad[i];
                   },
                   false};
        const NormResult r = sampled_holder(gi, alpha, dom, q, part);
        total.value += r.value;
        total.err_estimate += r.err_estimate;
        total.sup_part += r.sup_part;
        total.seminorm_part += r.seminorm_part;
        total.levels = std::max(total.levels, r.levels);
      }
      return total;
    }
  }
  throw DomainError("unreachable regime");
}

NormResult space_norm(const TestFunction& u, const SpaceSpec& spec, const AnnularDomain& dom,
                      const QuadratureSpec& q, HolderPart part) {
  if (spec.k == 0) return x_norm(u, spec, dom, q, part);
  if (spec.k == 1) return weighted_gradient_xnorm(u, spec, dom, q, part);
  throw DomainError("derivative order " + std::to_string(spec.k) + " not supported");
}

}  // namespace ckn
