#pragma once

// Exponent and weight bookkeeping for the weighted Hölder-Lebesgue scale.
//
// Every exponent is carried as its reciprocal s = 1/p, with 1/inf = 0.
// s > 0 is a Lebesgue space, s = 0 is L^inf and s < 0 is a Hölder space
// whose derivative count and Hölder exponent come from holder_index().
// All relations below are affine in s, which is why this parameterization
// is used throughout; conversion to p is for display only.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cknlab/inequality_kind.hpp"

namespace ckn {

enum class Regime { Lebesgue, Infinity, Holder };

std::string_view to_string(Regime regime);

class ReciprocalExponent {
 public:
  constexpr ReciprocalExponent() = default;

  /// Throws DomainError if s is not finite.
  explicit ReciprocalExponent(double s);

  /// Builds 1/p from p. p = +/-inf maps to 0; p = 0 is rejected.
  static ReciprocalExponent from_exponent(double p);

  constexpr double value() const noexcept { return s_; }

  /// The exponent p = 1/s (+inf when s = 0).
  double exponent() const noexcept;

  friend constexpr auto operator<=>(ReciprocalExponent, ReciprocalExponent) = default;

 private:
  double s_ = 0.0;
};

/// ((p)_1, (p)_2): derivative count and Hölder exponent of a negative p.
struct HolderIndex {
  int k1 = 0;
  double alpha = 1.0;
};

/// One point (k, 1/p, a) on the weighted scale X^{k,p,a}.
struct SpaceSpec {
  int k = 0;
  ReciprocalExponent s;
  double a = 0.0;
};

/// Full parameter tuple of the generalized CKN family. Which fields are
/// meaningful depends on the inequality kind; unused fields stay zero.
struct CknTuple {
  int n = 2;
  ReciprocalExponent s_p;
  ReciprocalExponent s_r;
  ReciprocalExponent s_q;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double lambda = 0.0;
  double theta = 1.0;
};

struct ExponentWeight {
  ReciprocalExponent s;
  double weight = 0.0;
};

struct Violation {
  std::string constraint;  // short stable identifier, e.g. "1/p = 1/n excluded"
  std::string detail;      // human-readable context with the offending value
};

Regime classify_regime(ReciprocalExponent s);

/// Floating-point evaluation of (p)_1 = -floor(n s + 1), (p)_2 = -n s - (p)_1.
/// Arguments of the floor within `snap_tol` of an integer are snapped to it.
/// Throws DomainError unless s < 0.
HolderIndex holder_index(ReciprocalExponent s, int n, double snap_tol = 1e-12);

/// Same map with s = num/den evaluated in exact integer arithmetic.
HolderIndex holder_index_exact(std::int64_t num, std::int64_t den, int n);

/// 1/p* = 1/p - 1/n. Total: the result may land in the Hölder regime.
ReciprocalExponent sobolev_conjugate(ReciprocalExponent s, int n);

/// 1/q = (1-l)/p + l/r, b = (1-l)a + l c. Throws DomainError for l outside [0,1].
ExponentWeight interpolate_pair(ReciprocalExponent s_p, ReciprocalExponent s_r, double a,
                                double c, double lambda);

/// 1/q = t(1/p - l/n) + (1-t)/r, b = t(1+a-l) + (1-t)c.
ExponentWeight ckn_targets(ReciprocalExponent s_p, ReciprocalExponent s_r, double a, double c,
                           double lambda, double theta, int n);

/// (1/q - b/n) - t(1/p - (1+a)/n) - (1-t)(1/r - c/n).
double compatibility_residual(const CknTuple& t);

/// Sobolev-Hardy edge pair: 1/p_l = 1/p - (1-l)/n and a_l = a + l, i.e. the
/// affine interpolation of (p*, a) at l = 0 and (p, a+1) at l = 1.
ExponentWeight edge_params(ReciprocalExponent s_p, double a, double lambda, int n);

/// Tuple with (s_q, b) filled in by ckn_targets.
CknTuple make_ckn_tuple(int n, ReciprocalExponent s_p, ReciprocalExponent s_r, double a,
                        double c, double lambda, double theta);

/// True when s sits on the critical exponent 1/p = 1/n.
bool is_endpoint(ReciprocalExponent s, int n, double tol = 1e-12);

/// Range constraints of the statement behind `kind`. Empty iff admissible.
std::vector<Violation> validate_admissible(InequalityKind kind, const CknTuple& t);

/// Sharp Hardy constant p/(n-p), 1 < p < n.
double hardy_constant(int n, double p);

}  // namespace ckn
