#include "cknlab/param_algebra.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cknlab/errors.hpp"

namespace ckn {

namespace {

constexpr double kEdgeTol = 1e-12;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0,1], got " + fmt_double(v));
  }
}

void require_dimension(int n) {
  if (n < 1) throw DomainError("dimension must be positive, got " + std::to_string(n));
}

// floor(x) with integers within tol snapped, so that e.g. n*s + 1 = 0.9999999999999998
// coming from s = -1/n is not misread as 0.
double snapped_floor(double x, double tol) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= tol * std::max(1.0, std::abs(x))) return nearest;
  return std::floor(x);
}

// floor(num/den) for den > 0.
std::int64_t floor_div(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

void check_open_closed(std::vector<Violation>& out, double s, int n, const char* what) {
  const double lo = -1.0 / n;
  if (!(s > lo + kEdgeTol) || !(s <= 1.0 + kEdgeTol)) {
    out.push_back({std::string(what) + " outside (-1/n, 1]",
                   std::string(what) + " = " + fmt_double(s) + ", n = " + std::to_string(n)});
  }
}

void check_unit(std::vector<Violation>& out, double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    out.push_back({std::string(name) + " outside [0,1]",
                   std::string(name) + " = " + fmt_double(v)});
  }
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Lebesgue:
      return "Lebesgue";
    case Regime::Infinity:
      return "Infinity";
    case Regime::Holder:
      return "Holder";
  }
  return "?";
}

ReciprocalExponent::ReciprocalExponent(double s) : s_(s) {
  if (!std::isfinite(s)) throw DomainError("reciprocal exponent must be finite");
}

ReciprocalExponent ReciprocalExponent::from_exponent(double p) {
  if (std::isinf(p)) return ReciprocalExponent(0.0);
  if (p == 0.0 || std::isnan(p)) throw DomainError("exponent p must be nonzero");
  return ReciprocalExponent(1.0 / p);
}

double ReciprocalExponent::exponent() const noexcept {
  if (s_ == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / s_;
}

Regime classify_regime(ReciprocalExponent s) {
  if (s.value() > 0.0) return Regime::Lebesgue;
  if (s.value() == 0.0) return Regime::Infinity;
  return Regime::Holder;
}

HolderIndex holder_index(ReciprocalExponent s, int n, double snap_tol) {
  require_dimension(n);
  if (!(s.value() < 0.0)) {
    throw DomainError("holder_index needs 1/p < 0, got " + fmt_double(s.value()));
  }
  const double arg = n * s.value() + 1.0;
  const double fl = snapped_floor(arg, snap_tol);
  HolderIndex out;
  out.k1 = static_cast<int>(-fl);
  out.alpha = -n * s.value() - out.k1;
  // snapping can leave alpha a hair above 1 or at 0 from the other side
  if (std::abs(out.alpha - 1.0) <= snap_tol) out.alpha = 1.0;
  return out;
}

HolderIndex holder_index_exact(std::int64_t num, std::int64_t den, int n) {
  require_dimension(n);
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num >= 0) throw DomainError("holder_index needs 1/p < 0");
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num /= g;
  den /= g;
  // n*s + 1 = (n*num + den) / den
  const std::int64_t fl = floor_div(n * num + den, den);
  HolderIndex out;
  out.k1 = static_cast<int>(-fl);
  // alpha = -n*num/den - k1 = (-n*num - k1*den) / den, exact numerator
  const std::int64_t alpha_num = -n * num - out.k1 * den;
  out.alpha = static_cast<double>(alpha_num) / static_cast<double>(den);
  return out;
}

ReciprocalExponent sobolev_conjugate(ReciprocalExponent s, int n) {
  require_dimension(n);
  return ReciprocalExponent(s.value() - 1.0 / n);
}

ExponentWeight interpolate_pair(ReciprocalExponent s_p, ReciprocalExponent s_r, double a,
                                double c, double lambda) {
  require_unit_interval(lambda, "lambda");
  return {ReciprocalExponent((1.0 - lambda) * s_p.value() + lambda * s_r.value()),
          (1.0 - lambda) * a + lambda * c};
}

ExponentWeight ckn_targets(ReciprocalExponent s_p, ReciprocalExponent s_r, double a, double c,
                           double lambda, double theta, int n) {
  require_unit_interval(lambda, "lambda");
  require_unit_interval(theta, "theta");
  require_dimension(n);
  const double s_q = theta * (s_p.value() - lambda / n) + (1.0 - theta) * s_r.value();
  const double b = theta * (1.0 + a - lambda) + (1.0 - theta) * c;
  return {ReciprocalExponent(s_q), b};
}

double compatibility_residual(const CknTuple& t) {
  const double n = t.n;
  return (t.s_q.value() - t.b / n) - t.theta * (t.s_p.value() - (1.0 + t.a) / n) -
         (1.0 - t.theta) * (t.s_r.value() - t.c / n);
}

ExponentWeight edge_params(ReciprocalExponent s_p, double a, double lambda, int n) {
  require_unit_interval(lambda, "lambda");
  require_dimension(n);
  return {ReciprocalExponent(s_p.value() - (1.0 - lambda) / n), a + lambda};
}

CknTuple make_ckn_tuple(int n, ReciprocalExponent s_p, ReciprocalExponent s_r, double a,
                        double c, double lambda, double theta) {
  const auto target = ckn_targets(s_p, s_r, a, c, lambda, theta, n);
  CknTuple t;
  t.n = n;
  t.s_p = s_p;
  t.s_r = s_r;
  t.s_q = target.s;
  t.a = a;
  t.b = target.weight;
  t.c = c;
  t.lambda = lambda;
  t.theta = theta;
  return t;
}

bool is_endpoint(ReciprocalExponent s, int n, double tol) {
  return std::abs(s.value() - 1.0 / n) <= tol;
}

std::vector<Violation> validate_admissible(InequalityKind kind, const CknTuple& t) {
  std::vector<Violation> out;
  const int n = t.n;
  if (n < 2) {
    out.push_back({"n >= 2 required", "n = " + std::to_string(n)});
    return out;
  }
  const double sp = t.s_p.value();
  const double sr = t.s_r.value();
  const double sq = t.s_q.value();
  const double inv_n = 1.0 / n;

  auto require_endpoint = [&] {
    if (!is_endpoint(t.s_p, n)) {
      out.push_back({"p = n required", "1/p = " + fmt_double(sp) + ", 1/n = " + fmt_double(inv_n)});
    }
  };

  switch (kind) {
    case InequalityKind::ClassicalHardy:
      if (!(sp > inv_n + kEdgeTol && sp < 1.0 - kEdgeTol)) {
        out.push_back({"p outside (1, n)", "p = " + fmt_double(t.s_p.exponent())});
      }
      break;
    case InequalityKind::LocalizedHardy:
      if (!(sp > 0.0 && sp <= 1.0 + kEdgeTol)) {
        out.push_back({"p outside [1, inf)", "1/p = " + fmt_double(sp)});
      }
      break;
    case InequalityKind::GeneralizedSobolev:
      if (is_endpoint(t.s_p, n)) {
        out.push_back({"1/p = 1/n excluded", "the endpoint p = n has no X^{p*} embedding"});
      } else if (!(sp <= 1.0 + kEdgeTol)) {
        out.push_back({"1/p above 1", "1/p = " + fmt_double(sp)});
      }
      break;
    case InequalityKind::Interpolation:
      check_open_closed(out, sp, n, "1/p");
      check_open_closed(out, sr, n, "1/r");
      check_unit(out, t.lambda, "lambda");
      break;
    case InequalityKind::HardySobolev:
      if (sq > sp + kEdgeTol) {
        out.push_back({"1/q above 1/p", "1/q = " + fmt_double(sq) + " > 1/p = " + fmt_double(sp)});
      }
      if (sq < sp - inv_n - kEdgeTol) {
        out.push_back({"1/q below 1/p*",
                       "1/q = " + fmt_double(sq) + " < 1/p - 1/n = " + fmt_double(sp - inv_n)});
      }
      break;
    case InequalityKind::GeneralizedCKN:
      if (is_endpoint(t.s_p, n)) {
        out.push_back({"1/p = 1/n excluded", "1/p = " + fmt_double(sp) + " equals 1/n; use EndpointCKN"});
      } else if (!(sp > 0.0 && sp <= 1.0 + kEdgeTol)) {
        out.push_back({"1/p outside (0,1/n) u (1/n,1]", "1/p = " + fmt_double(sp)});
      }
      check_open_closed(out, sr, n, "1/r");
      check_unit(out, t.lambda, "lambda");
      check_unit(out, t.theta, "theta");
      break;
    case InequalityKind::EndpointLog:
      require_endpoint();
      break;
    case InequalityKind::EndpointCKN:
      require_endpoint();
      check_open_closed(out, sr, n, "1/r");
      check_unit(out, t.lambda, "lambda");
      check_unit(out, t.theta, "theta");
      break;
    case InequalityKind::TrudingerMoser:
      break;
    case InequalityKind::KMethod:
      check_open_closed(out, sp, n, "1/p");
      check_open_closed(out, sr, n, "1/r");
      if (!(t.theta > 0.0 && t.theta < 1.0)) {
        out.push_back({"theta outside (0,1)", "theta = " + fmt_double(t.theta)});
      }
      break;
    default:
      throw DomainError("unknown inequality kind");
  }
  return out;
}

double hardy_constant(int n, double p) {
  if (!(p > 1.0 && p < n)) {
    throw DomainError("hardy_constant needs 1 < p < n, got p = " + fmt_double(p) +
                      ", n = " + std::to_string(n));
  }
  return p / (n - p);
}

std::string_view to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::ClassicalHardy:
      return "ClassicalHardy";
    case InequalityKind::LocalizedHardy:
      return "LocalizedHardy";
    case InequalityKind::GeneralizedSobolev:
      return "GeneralizedSobolev";
    case InequalityKind::Interpolation:
      return "Interpolation";
    case InequalityKind::HardySobolev:
      return "HardySobolev";
    case InequalityKind::GeneralizedCKN:
      return "GeneralizedCKN";
    case InequalityKind::EndpointLog:
      return "EndpointLog";
    case InequalityKind::EndpointCKN:
      return "EndpointCKN";
    case InequalityKind::TrudingerMoser:
      return "TrudingerMoser";
    case InequalityKind::KMethod:
      return "KMethod";
  }
  return "?";
}

InequalityKind parse_kind(std::string_view name) {
  for (auto k : kAllInequalityKinds) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown inequality kind '" + std::string(name) + "'");
}

}  // namespace ckn
