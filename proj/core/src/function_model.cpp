#include "cknlab/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>

#include "cknlab/errors.hpp"
#include "cknlab/quadrature.hpp"

namespace ckn {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void fill_zero(std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); }

// out = f'(r) x / r
void radial_gradient(std::span<const double> x, double r, double dfdr, std::span<double> out) {
  const double scale = (r > 0.0) ? dfdr / r : 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
}

class RadialBump final : public Field {
 public:
  RadialBump(double rho_in, double rho_out, double sharpness)
      : ri_(rho_in), ro_(rho_out), sharpness_(sharpness) {}

  double value(std::span<const double> x) const override {
    const double t = map(norm2(x));
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-sharpness_ / (1.0 - t * t));
  }

  void gradient(std::span<const double> x, std::span<double> out) const override {
    const double r = norm2(x);
    const double t = map(r);
    if (std::abs(t) >= 1.0) {
      fill_zero(out);
      return;
    }
    const double one_minus = 1.0 - t * t;
    const double eta = std::exp(-sharpness_ / one_minus);
    const double deta_dt = -eta * 2.0 * sharpness_ * t / (one_minus * one_minus);
    radial_gradient(x, r, deta_dt * 2.0 / (ro_ - ri_), out);
  }

  bool radial() const override { return true; }

 private:
  double map(double r) const { return (2.0 * r - ri_ - ro_) / (ro_ - ri_); }

  double ri_, ro_, sharpness_;
};

class PowerBump final : public Field {
 public:
  PowerBump(double rho_in, double rho_out, double beta, double cut_fraction)
      : ri_(rho_in),
        beta_(beta),
        log_span_(std::log(rho_out / rho_in)),
        width_(cut_fraction * std::log(rho_out / rho_in)) {}

  double value(std::span<const double> x) const override {
    const double r = norm2(x);
    const double tau = std::log(r / ri_);
    if (!(tau > 0.0 && tau < log_span_)) return 0.0;
    return std::pow(r, beta_) * cutoff(tau);
  }

  void gradient(std::span<const double> x, std::span<double> out) const override {
    const double r = norm2(x);
    const double tau = std::log(r / ri_);
    if (!(tau > 0.0 && tau < log_span_)) {
      fill_zero(out);
      return;
    }
    const double a = tau / width_;
    const double b = (log_span_ - tau) / width_;
    const double sa = smooth_step(a);
    const double sb = smooth_step(b);
    const double chi = sa * sb;
    const double dchi_dtau = (smooth_step_derivative(a) * sb - sa * smooth_step_derivative(b)) / width_;
    // d/dr [r^beta chi(log(r/ri))] = r^(beta-1) (beta chi + chi')
    const double dudr = std::pow(r, beta_ - 1.0) * (beta_ * chi + dchi_dtau);
    radial_gradient(x, r, dudr, out);
  }

  bool radial() const override { return true; }

 private:
  double cutoff(double tau) const {
    return smooth_step(tau / width_) * smooth_step((log_span_ - tau) / width_);
  }

  double ri_, beta_, log_span_, width_;
};

class Angular final : public Field {
 public:
  Angular(std::shared_ptr<const Field> base, int mode) : base_(std::move(base)), mode_(mode) {}

  double value(std::span<const double> x) const override {
    return base_->value(x) * factor(x);
  }

  void gradient(std::span<const double> x, std::span<double> out) const override {
    const std::size_t n = x.size();
    const double r = norm2(x);
    const std::complex<double> z(x[0], x[1]);
    const std::complex<double> zm1 = ipow(z, mode_ - 1);
    const std::complex<double> zm = zm1 * z;
    const double rm = std::pow(r, mode_);
    const double a = zm.real() / rm;
    const double u = base_->value(x);
    base_->gradient(x, out);
    // grad A = grad P / r^m - m P x / r^(m+2)
    for (std::size_t i = 0; i < n; ++i) {
      double dA = -mode_ * zm.real() * x[i] / (rm * r * r);
      if (i == 0) dA += mode_ * zm1.real() / rm;
      if (i == 1) dA -= mode_ * zm1.imag() / rm;
      out[i] = a * out[i] + u * dA;
    }
  }

 private:
  static std::complex<double> ipow(std::complex<double> z, int k) {
    std::complex<double> out(1.0, 0.0);
    for (int i = 0; i < k; ++i) out *= z;
    return out;
  }

  double factor(std::span<const double> x) const {
    const double r = norm2(x);
    return ipow({x[0], x[1]}, mode_).real() / std::pow(r, mode_);
  }

  std::shared_ptr<const Field> base_;
  int mode_;
};

class Scaled final : public Field {
 public:
  Scaled(std::shared_ptr<const Field> base, double c) : base_(std::move(base)), c_(c) {}
  double value(std::span<const double> x) const override { return c_ * base_->value(x); }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    base_->gradient(x, out);
    for (double& g : out) g *= c_;
  }
  bool radial() const override { return base_->radial(); }

 private:
  std::shared_ptr<const Field> base_;
  double c_;
};

class Zero final : public Field {
 public:
  double value(std::span<const double>) const override { return 0.0; }
  void gradient(std::span<const double>, std::span<double> out) const override { fill_zero(out); }
  bool radial() const override { return true; }
};

class Coordinate final : public Field {
 public:
  explicit Coordinate(int axis) : axis_(axis) {}
  double value(std::span<const double> x) const override { return x[axis_]; }
  void gradient(std::span<const double>, std::span<double> out) const override {
    fill_zero(out);
    out[axis_] = 1.0;
  }

 private:
  int axis_;
};

class RadialCutoff final : public Field {
 public:
  RadialCutoff(std::shared_ptr<const Field> base, double rho, double delta, bool keep_inner)
      : base_(std::move(base)), start_(rho - 0.5 * delta), delta_(delta), inner_(keep_inner) {}

  double value(std::span<const double> x) const override {
    const double chi = cutoff(norm2(x));
    return chi == 0.0 ? 0.0 : chi * base_->value(x);
  }

  void gradient(std::span<const double> x, std::span<double> out) const override {
    const double r = norm2(x);
    const double tau = (r - start_) / delta_;
    const double step = smooth_step(tau);
    const double chi = inner_ ? 1.0 - step : step;
    const double dchi = (inner_ ? -1.0 : 1.0) * smooth_step_derivative(tau) / delta_;
    base_->gradient(x, out);
    const double u = base_->value(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = chi * out[i] + (r > 0.0 ? u * dchi * x[i] / r : 0.0);
    }
  }

  bool radial() const override { return base_->radial(); }

 private:
  double cutoff(double r) const {
    const double step = smooth_step((r - start_) / delta_);
    return inner_ ? 1.0 - step : step;
  }

  std::shared_ptr<const Field> base_;
  double start_, delta_;
  bool inner_;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// uniform double in [0, 1) from 53 random bits; independent of the
// standard library's distribution implementation
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void AnnularDomain::validate() const {
  if (n < 2) throw DomainError("annular domain needs n >= 2, got " + std::to_string(n));
  if (!(rho_in > 0.0) || !(rho_out > rho_in) || !std::isfinite(rho_out)) {
    throw DomainError("annular domain needs 0 < rho_in < rho_out < inf, got [" + num(rho_in) +
                      ", " + num(rho_out) + "]");
  }
}

double AnnularDomain::volume() const { return annulus_volume(n, rho_in, rho_out); }

bool AnnularDomain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n) return false;
  const double r = norm2(x);
  return r > rho_in && r < rho_out;
}

AnnularDomain make_domain(int n, double rho_in, double rho_out) {
  AnnularDomain d{n, rho_in, rho_out};
  d.validate();
  return d;
}

TestFunction::TestFunction(std::shared_ptr<const Field> field, AnnularDomain support,
                           std::string family, ParamMap params, Smoothness smoothness)
    : field_(std::move(field)),
      support_(support),
      family_(std::move(family)),
      params_(std::move(params)),
      smoothness_(smoothness) {
  if (!field_) throw DomainError("test function needs a field");
}

Point TestFunction::gradient(std::span<const double> x) const {
  Point g(x.size());
  field_->gradient(x, g);
  return g;
}

double smooth_step(double tau) {
  if (tau <= 0.0) return 0.0;
  if (tau >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / tau);
  const double b = std::exp(-1.0 / (1.0 - tau));
  return a / (a + b);
}

double smooth_step_derivative(double tau) {
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / tau);
  const double b = std::exp(-1.0 / (1.0 - tau));
  const double s = a + b;
  const double u = 1.0 - tau;
  return a * b * (1.0 / (tau * tau) + 1.0 / (u * u)) / (s * s);
}

TestFunction make_radial_bump(const AnnularDomain& domain, double sharpness) {
  domain.validate();
  if (!(sharpness > 0.0) || !std::isfinite(sharpness)) {
    throw DomainError("radial bump sharpness must be positive");
  }
  return TestFunction(std::make_shared<RadialBump>(domain.rho_in, domain.rho_out, sharpness),
                      domain, "radial_bump", {{"sharpness", sharpness}});
}

TestFunction make_power_bump(const AnnularDomain& domain, double beta, double cut_fraction) {
  domain.validate();
  if (!(cut_fraction > 0.0 && cut_fraction < 0.5)) {
    throw DomainError("power bump cut_fraction must lie in (0, 1/2), got " + num(cut_fraction));
  }
  if (!std::isfinite(beta)) throw DomainError("power bump beta must be finite");
  return TestFunction(
      std::make_shared<PowerBump>(domain.rho_in, domain.rho_out, beta, cut_fraction), domain,
      "power_bump", {{"beta", beta}, {"cut_fraction", cut_fraction}});
}

TestFunction make_angular(const TestFunction& base, int mode) {
  if (base.dimension() < 2) throw DomainError("angular modulation needs n >= 2");
  if (mode < 0) throw DomainError("angular mode must be >= 0");
  if (mode == 0) return base;
  ParamMap params = base.params();
  params["mode"] = mode;
  return TestFunction(std::make_shared<Angular>(base.field(), mode), base.support(), base.family(),
                      std::move(params), base.smoothness());
}

TestFunction scaled(const TestFunction& u, double c) {
  ParamMap params = u.params();
  params["scale"] = c * (params.count("scale") ? params.at("scale") : 1.0);
  return TestFunction(std::make_shared<Scaled>(u.field(), c), u.support(), u.family(),
                      std::move(params), u.smoothness());
}

TestFunction make_zero(const AnnularDomain& domain) {
  domain.validate();
  return TestFunction(std::make_shared<Zero>(), domain, "zero", {});
}

TestFunction make_coordinate(const AnnularDomain& domain, int axis) {
  domain.validate();
  if (axis < 0 || axis >= domain.n) throw DomainError("coordinate axis out of range");
  return TestFunction(std::make_shared<Coordinate>(axis), domain, "coordinate",
                      {{"axis", static_cast<double>(axis)}});
}

TestFunction with_radial_cutoff(const TestFunction& u, double rho, double delta, bool keep_inner) {
  if (!(delta > 0.0)) throw DomainError("cutoff width must be positive");
  ParamMap params = u.params();
  params["cut_rho"] = rho;
  params["cut_delta"] = delta;
  params["cut_inner"] = keep_inner ? 1.0 : 0.0;
  return TestFunction(std::make_shared<RadialCutoff>(u.field(), rho, delta, keep_inner),
                      u.support(), u.family(), std::move(params), u.smoothness());
}

double gradient_check(const TestFunction& f, std::span<const Point> probes, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const int n = f.dimension();
  std::vector<double> analytic;
  std::vector<double> numeric;
  analytic.reserve(probes.size() * n);
  numeric.reserve(probes.size() * n);
  Point y(n);
  auto shifted = [&](const Point& x, int i, double step) {
    y = x;
    y[i] += step;
    return f(y);
  };
  for (const Point& x : probes) {
    if (!f.support().contains(x)) throw DomainError("gradient probe outside the open annulus");
    const Point g = f.gradient(x);
    for (int i = 0; i < n; ++i) {
      analytic.push_back(g[i]);
      // five-point central stencil, O(h^4)
      const double d1 = shifted(x, i, h) - shifted(x, i, -h);
      const double d2 = shifted(x, i, 2.0 * h) - shifted(x, i, -2.0 * h);
      numeric.push_back((8.0 * d1 - d2) / (12.0 * h));
    }
  }
  double scale = 0.0;
  for (double g : analytic) scale = std::max(scale, std::abs(g));
  const double floor = std::max(1e-6 * scale, 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double diff = std::abs(numeric[i] - analytic[i]);
    if (diff == 0.0) continue;
    worst = std::max(worst, diff / (std::abs(analytic[i]) + floor));
  }
  return worst;
}

std::vector<Point> interior_probes(const AnnularDomain& domain, int count, unsigned seed) {
  domain.validate();
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  const double width = domain.rho_out - domain.rho_in;
  for (int k = 0; k < count; ++k) {
    Point x(domain.n);
    double len = 0.0;
    do {
      len = 0.0;
      for (double& v : x) {
        v = 2.0 * unit_uniform(rng) - 1.0;
        len += v * v;
      }
    } while (len > 1.0 || len < 1e-4);
    len = std::sqrt(len);
    const double r = domain.rho_in + width * (0.05 + 0.9 * unit_uniform(rng));
    for (double& v : x) v *= r / len;
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<std::string> registered_families() { return {"radial_bump", "power_bump", "zero"}; }

ParamMap family_defaults(std::string_view family) {
  if (family == "radial_bump") return {{"sharpness", 1.0}, {"mode", 0.0}};
  if (family == "power_bump") return {{"beta", -0.5}, {"cut_fraction", 0.1}, {"mode", 0.0}};
  if (family == "zero") return {{"mode", 0.0}};
  throw DomainError("unknown test-function family '" + std::string(family) + "'");
}

TestFunction make_family_member(std::string_view family, const AnnularDomain& domain,
                                const ParamMap& params) {
  ParamMap merged = family_defaults(family);
  for (const auto& [key, value] : params) {
    if (!merged.count(key)) {
      throw DomainError("family '" + std::string(family) + "' has no parameter '" + key + "'");
    }
    merged[key] = value;
  }
  const double mode_value = merged.at("mode");
  const int mode = static_cast<int>(std::lround(mode_value));
  if (mode < 0 || std::abs(mode_value - mode) > 1e-9) {
    throw DomainError("mode must be a nonnegative integer");
  }
  TestFunction base = [&] {
    if (family == "radial_bump") return make_radial_bump(domain, merged.at("sharpness"));
    if (family == "power_bump") {
      return make_power_bump(domain, merged.at("beta"), merged.at("cut_fraction"));
    }
    return make_zero(domain);
  }();
  return make_angular(base, mode);
}

}  // namespace ckn
