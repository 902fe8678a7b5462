#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cknlab/function_model.hpp"
#include "cknlab/inequality_kind.hpp"
#include "cknlab/param_algebra.hpp"

namespace ckn {

enum class Verdict { Bounded, Violated, Inconclusive };

std::string_view to_string(Verdict v);

/// One norm entering the right-hand side with its exponent.
struct NamedValue {
  std::string name;
  double value = 0.0;
  double exponent = 1.0;
  double err = 0.0;
};

/// LHS <= C * prod(rhs_factors[i].value ^ exponent) evaluated on one function.
struct InequalityReport {
  InequalityKind kind = InequalityKind::ClassicalHardy;
  CknTuple tuple;
  AnnularDomain domain;
  std::string family;
  ParamMap member;
  std::string lhs_name;
  double lhs = 0.0;
  double lhs_err = 0.0;
  std::vector<NamedValue> rhs_factors;
  double rhs = 0.0;
  double empirical_ratio = 0.0;
  double ratio_err = 0.0;
  /// Known constant the ratio must stay below, when one exists.
  std::optional<double> analytic_upper_bound;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

}  // namespace ckn
