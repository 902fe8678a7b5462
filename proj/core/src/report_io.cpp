#include <fmt/format.h>
#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "cknlab/suite.hpp"

namespace ckn {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

ordered_json params_json(const ParamMap& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

ordered_json exponent_json(ReciprocalExponent s) {
  if (s.value() == 0.0) return "inf";
  return 1.0 / s.value();
}

ordered_json tuple_json(const CknTuple& t) {
  return {{"n", t.n},
          {"p", exponent_json(t.s_p)},
          {"q", exponent_json(t.s_q)},
          {"r", exponent_json(t.s_r)},
          {"inv_p", t.s_p.value()},
          {"inv_q", t.s_q.value()},
          {"inv_r", t.s_r.value()},
          {"a", t.a},
          {"b", t.b},
          {"c", t.c},
          {"lambda", t.lambda},
          {"theta", t.theta},
          {"compatibility_residual", compatibility_residual(t)}};
}

ordered_json report_json(const InequalityReport& r) {
  ordered_json factors = ordered_json::array();
  for (const auto& f : r.rhs_factors) {
    factors.push_back({{"name", f.name},
                       {"value", number(f.value)},
                       {"exponent", f.exponent},
                       {"err", number(f.err)}});
  }
  ordered_json j = {{"member", params_json(r.member)},
                    {"domain", {{"n", r.domain.n}, {"rho_in", r.domain.rho_in}, {"rho_out", r.domain.rho_out}}},
                    {"lhs_name", r.lhs_name},
                    {"lhs", number(r.lhs)},
                    {"lhs_err", number(r.lhs_err)},
                    {"rhs_factors", factors},
                    {"rhs", number(r.rhs)},
                    {"ratio", number(r.empirical_ratio)},
                    {"ratio_err", number(r.ratio_err)}};
  j["analytic_upper_bound"] = r.analytic_upper_bound ? number(*r.analytic_upper_bound) : ordered_json();
  j["ratio_bounds"] = "empirical ratio is a lower bound for the best constant";
  j["verdict"] = std::string(to_string(r.verdict));
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw OutputError("write failed for " + path.string());
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-256 failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string format_exponent(ReciprocalExponent s) {
  if (s.value() == 0.0) return "inf";
  return g17(1.0 / s.value());
}

std::string csv_header() { return "kind,n,p,q,r,a,b,c,lambda,theta,lhs,rhs,ratio,err,verdict"; }

std::string csv_row(const InequalityReport& r) {
  const CknTuple& t = r.tuple;
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", to_string(r.kind), t.n,
                     format_exponent(t.s_p), format_exponent(t.s_q), format_exponent(t.s_r),
                     g17(t.a), g17(t.b), g17(t.c), g17(t.lambda), g17(t.theta), g17(r.lhs),
                     g17(r.rhs), g17(r.empirical_ratio), g17(r.ratio_err), to_string(r.verdict));
}

void emit_report(const SuiteResult& result, const SuiteSpec& spec,
                 const std::filesystem::path& dir, OutputFormat format) {
  std::vector<const InequalityReport*> rows;
  for (const auto& r : result.reports) rows.push_back(&r);
  if (result.estimate) {
    for (const auto& r : result.estimate->evaluated) rows.push_back(&r);
  }

  if (format != OutputFormat::Csv) {
    ordered_json j;
    j["suite"] = result.name;
    j["kind"] = std::string(to_string(result.kind));
    j["tuple"] = tuple_json(spec.tuple);
    j["domain"] = {{"n", spec.family.domain.n},
                   {"rho_in", spec.family.domain.rho_in},
                   {"rho_out", spec.family.domain.rho_out}};
    j["family"] = spec.family.family;
    j["verdict"] = std::string(to_string(result.verdict));
    if (!result.error.empty()) j["error"] = result.error;
    ordered_json reps = ordered_json::array();
    for (const auto& r : result.reports) reps.push_back(report_json(r));
    j["reports"] = reps;
    if (result.estimate) {
      const ConstantEstimate& e = *result.estimate;
      ordered_json trace = ordered_json::array();
      for (double v : e.trace) trace.push_back(number(v));
      ordered_json evaluated = ordered_json::array();
      for (const auto& r : e.evaluated) evaluated.push_back(report_json(r));
      j["estimate"] = {{"sup_ratio", number(e.sup_ratio)},
                       {"sup_ratio_bounds", "lower bound for the best constant"},
                       {"argmax", params_json(e.argmax)},
                       {"n_evaluations", e.n_evaluations},
                       {"n_inconclusive", e.n_inconclusive},
                       {"trace", trace},
                       {"best", report_json(e.best)},
                       {"evaluated", evaluated}};
    }
    if (!result.profiles.empty()) {
      ordered_json profs = ordered_json::array();
      for (const auto& p : result.profiles) {
        ordered_json t = ordered_json::array();
        ordered_json k = ordered_json::array();
        ordered_json ids = ordered_json::array();
        for (std::size_t i = 0; i < p.t_grid.size(); ++i) {
          t.push_back(p.t_grid[i]);
          k.push_back(number(p.k_values[i]));
          ids.push_back(p.splitting_ids[i]);
        }
        profs.push_back({{"norm_x", number(p.norm_x)},
                         {"norm_y", number(p.norm_y)},
                         {"lines", p.line_count},
                         {"t", t},
                         {"k", k},
                         {"splitting", ids}});
      }
      j["k_profiles"] = profs;
    }
    if (result.tm) {
      const TmReport& tm = *result.tm;
      ordered_json ints = ordered_json::array();
      for (double v : tm.integrals) ints.push_back(number(v));
      ordered_json mus = ordered_json::array();
      for (double v : tm.measures) mus.push_back(number(v));
      j["trudinger_moser"] = {{"alpha", tm.alpha_grid},
                              {"integral", ints},
                              {"monotone", tm.monotone},
                              {"finite", tm.finite},
                              {"grad_norm", number(tm.grad_norm)},
                              {"sup", number(tm.sup)},
                              {"levels", tm.levels},
                              {"measures", mus},
                              {"slope", number(tm.slope)},
                              {"intercept", number(tm.intercept)},
                              {"r_squared", number(tm.r_squared)}};
    }
    write_file(dir / (result.name + ".json"), j.dump(2) + "\n");
  }
  if (format != OutputFormat::Json) {
    std::string text = csv_header() + "\n";
    for (const auto* r : rows) text += csv_row(*r) + "\n";
    write_file(dir / (result.name + ".csv"), text);
  }
  for (std::size_t i = 0; i < result.profiles.size(); ++i) {
    const KProfile& p = result.profiles[i];
    std::string text = "# t K(t)\n";
    for (std::size_t k = 0; k < p.t_grid.size(); ++k) {
      text += g17(p.t_grid[k]) + " " + g17(p.k_values[k]) + "\n";
    }
    write_file(dir / fmt::format("{}_kprofile_{}.dat", result.name, i), text);
  }
  if (result.tm) {
    std::string text = "# t mu(t)\n";
    for (std::size_t k = 0; k < result.tm->levels.size(); ++k) {
      text += g17(result.tm->levels[k]) + " " + g17(result.tm->measures[k]) + "\n";
    }
    write_file(dir / (result.name + "_levels.dat"), text);
  }
}

}  // namespace ckn
