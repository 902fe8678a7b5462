#pragma once

// Each inequality kind as a checkable statement LHS <= C * RHS on a test
// function, plus empirical constants as ratio suprema over a family.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cknlab/function_model.hpp"
#include "cknlab/k_functional.hpp"
#include "cknlab/norm_engine.hpp"
#include "cknlab/param_algebra.hpp"
#include "cknlab/report.hpp"

namespace ckn {

struct LabConfig {
  QuadratureSpec quad;
  double c2 = 1.0;        // in-log constant of the endpoint estimates, >= 1
  double tm_alpha = 1.0;  // exponent used by evaluate_instance(TrudingerMoser)
  HolderPart holder_part = HolderPart::Full;
  double bound_tolerance = 1e-3;  // relative slack before a known constant counts as violated
  /// Constant to test against instead of the analytic one (any kind).
  std::optional<double> claimed_constant;
  KConfig kcfg;
};

/// Fills the derived fields of a tuple for `kind` from the user-supplied ones:
///   ClassicalHardy, LocalizedHardy: q = p, b = a + 1
///   GeneralizedSobolev: q = p*, a = b = 0
///   Interpolation: (q, b) = interpolate_pair(p, r, a, c, lambda)
///   HardySobolev: b from 1/q - b/n = 1/p - (1+a)/n (q given)
///   GeneralizedCKN: (q, b) = ckn_targets
///   EndpointLog: p = n, q = inf, b = a
///   EndpointCKN: p = n, edge pair (lambda/n, a + lambda) interpolated with (r, c) at theta
///   TrudingerMoser: p = n
///   KMethod: (q, b) = interpolate_pair(p, r, a, c, theta)
CknTuple derive_tuple(InequalityKind kind, const CknTuple& given);

/// Evaluates one instance. Throws AdmissibilityError when the tuple is not
/// admissible and AccuracyError when a norm cannot be resolved.
InequalityReport evaluate_instance(InequalityKind kind, const CknTuple& tuple,
                                   const TestFunction& u, const AnnularDomain& dom,
                                   const LabConfig& cfg);

class AdmissibilityError : public std::domain_error {
 public:
  AdmissibilityError(const std::string& what, std::vector<Violation> v)
      : std::domain_error(what), violations_(std::move(v)) {}
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// (M/m) * C_P / rho with M, m the extreme values of |x|^{-a} on the
/// annulus, C_P = rho_out - rho_in and rho = rho_in.
double localized_hardy_bound(const AnnularDomain& dom, double a, double p);

struct FamilyParam {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool log_scale = false;
};

/// A registered family with some parameters fixed and some free. The
/// parameter names rho_in and rho_out move the annulus.
struct FamilyDescriptor {
  std::string family = "radial_bump";
  AnnularDomain domain;
  ParamMap fixed;
  std::vector<FamilyParam> free;
};

struct OptimizerConfig {
  std::uint64_t seed = 1;
  int scan_points = 48;
  int refine_starts = 3;
  int max_evaluations = 120;  // per simplex run
  bool record_reports = false;  // keep every conclusive report in the estimate
};

struct ConstantEstimate {
  InequalityKind kind = InequalityKind::ClassicalHardy;
  double sup_ratio = 0.0;
  ParamMap argmax;
  int n_evaluations = 0;
  int n_inconclusive = 0;
  std::vector<double> trace;  // best ratio after the scan and after each simplex run
  InequalityReport best;
  std::vector<InequalityReport> evaluated;  // filled when record_reports is set
};

/// Member of the family at the given parameter values (free ones included).
TestFunction family_member(const FamilyDescriptor& fam, const ParamMap& values,
                           AnnularDomain& dom_out);

/// Latin-hypercube scan then Nelder-Mead from the best starts. Throws
/// DomainError when every evaluation is inconclusive.
ConstantEstimate estimate_constant(InequalityKind kind, const CknTuple& tuple,
                                   const FamilyDescriptor& fam, const LabConfig& cfg,
                                   const OptimizerConfig& opt);

struct TmReport {
  std::vector<double> alpha_grid;
  std::vector<double> integrals;
  std::vector<double> integral_errs;
  bool monotone = false;
  bool finite = false;
  double grad_norm = 0.0;  // |grad v|_{L^n}
  double sup = 0.0;
  std::vector<double> levels;    // t
  std::vector<double> measures;  // mu(t)
  double slope = 0.0;            // of log mu against t^{n'} over the upper half
  double intercept = 0.0;
  double r_squared = 0.0;
  int fit_points = 0;
};

/// Default number of level-set heights (k / count * sup, k = 1..count-1).
inline constexpr int kTmLevels = 16;

TmReport trudinger_moser_check(const TestFunction& v, const AnnularDomain& dom,
                               const std::vector<double>& alpha_grid, const LabConfig& cfg,
                               int level_count = kTmLevels);

/// |{x in dom : |v(x)| > t}| by root finding along rays.
double level_set_measure(const TestFunction& v, const AnnularDomain& dom, double t,
                         const QuadratureSpec& q);

/// |x|^{-a}u sup against the log-loss gradient factor.
InequalityReport endpoint_log_check(const TestFunction& u, const AnnularDomain& dom, double a,
                                    double c2, const LabConfig& cfg);

}  // namespace ckn
