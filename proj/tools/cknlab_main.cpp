// cknlab: command-line driver for the verification lab.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>

#include "cknlab/errors.hpp"
#include "cknlab/suite.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kAccuracyError = 3;

using nlohmann::ordered_json;

ckn::ReciprocalExponent parse_exponent(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return ckn::ReciprocalExponent(0.0);
  std::size_t used = 0;
  const double p = std::stod(text, &used);
  if (used != text.size()) throw ckn::DomainError("bad exponent '" + text + "'");
  return ckn::ReciprocalExponent::from_exponent(p);
}

ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

struct FunctionArgs {
  std::string family = "radial_bump";
  std::vector<std::string> params;
  int n = 2;
  double rho_in = 1.0;
  double rho_out = 2.0;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "Registered test-function family");
    app->add_option("--param", params, "Family parameter as key=value (repeatable)");
    app->add_option("--n", n, "Dimension");
    app->add_option("--rho-in", rho_in, "Inner radius of the annulus");
    app->add_option("--rho-out", rho_out, "Outer radius of the annulus");
  }

  ckn::TestFunction build(ckn::AnnularDomain& dom) const {
    dom = ckn::make_domain(n, rho_in, rho_out);
    ckn::ParamMap pm;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ckn::DomainError("--param expects key=value, got " + kv);
      pm[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return ckn::make_family_member(family, dom, pm);
  }
};

struct SuiteArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "Suite configuration (YAML)")->required();
    app->add_option("--seed", seed, "Override the configured seed");
    app->add_option("--out", out, "Override the output directory");
    app->add_option("--format", format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
  }
};

int run_suites(const SuiteArgs& args, ckn::RunMode mode, bool quiet) {
  ckn::SuiteConfig cfg;
  try {
    cfg = ckn::load_suite_config(args.config);
  } catch (const ckn::ConfigError& e) {
    std::cerr << args.config << ": " << e.what() << '\n';
    return kConfigError;
  }
  if (args.seed) cfg.seed = *args.seed;
  if (!args.out.empty()) cfg.output_dir = args.out;
  if (args.format == "json") cfg.formats = ckn::OutputFormat::Json;
  if (args.format == "csv") cfg.formats = ckn::OutputFormat::Csv;
  if (args.format == "both") cfg.formats = ckn::OutputFormat::Both;
  ckn::RunOptions opts;
  opts.mode = mode;
  opts.log = quiet ? nullptr : &std::cerr;
  const ckn::RunManifest man = ckn::run_suite(cfg, opts);
  if (!quiet) std::cerr << "exit status " << man.exit_status << '\n';
  return man.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification lab for weighted Hardy, Sobolev and CKN inequalities"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress progress output");
  app.set_version_flag("--version", std::string(ckn::tool_version()));

  // params
  auto* params = app.add_subcommand("params", "Validate and derive parameter tuples");
  std::string params_config;
  std::string kind_name = "GeneralizedCKN";
  ckn::CknTuple tuple;
  std::string p_text = "2";
  std::string r_text = "2";
  std::string q_text;
  params->add_option("--config", params_config, "Derive the tuples of every suite in a config");
  params->add_option("--kind", kind_name, "Inequality kind");
  params->add_option("--n", tuple.n, "Dimension");
  params->add_option("--p", p_text, "Exponent p (inf or negative allowed)");
  params->add_option("--r", r_text, "Exponent r");
  params->add_option("--q", q_text, "Exponent q (HardySobolev only)");
  params->add_option("--a", tuple.a, "Weight a");
  params->add_option("--c", tuple.c, "Weight c");
  params->add_option("--lambda", tuple.lambda, "Interpolation parameter lambda");
  params->add_option("--theta", tuple.theta, "Interpolation parameter theta");

  // norm
  auto* norm = app.add_subcommand("norm", "Evaluate one weighted norm");
  FunctionArgs norm_fn;
  norm_fn.attach(norm);
  std::string norm_p = "2";
  double norm_a = 0.0;
  bool norm_gradient = false;
  bool norm_seminorm = false;
  ckn::QuadratureSpec norm_q;
  norm->add_option("--p", norm_p, "Exponent p (inf or negative for Hölder)");
  norm->add_option("--a", norm_a, "Weight exponent a in |x|^-a");
  norm->add_flag("--gradient", norm_gradient, "Norm of the gradient instead of the function");
  norm->add_flag("--seminorm-only", norm_seminorm, "Hölder regime: report the seminorm only");
  norm->add_option("--target-rel-err", norm_q.target_rel_err, "Quadrature target");

  // kfunc
  auto* kfunc = app.add_subcommand("kfunc", "K-functional profile between two weighted spaces");
  FunctionArgs k_fn;
  k_fn.attach(kfunc);
  std::string kx_p = "2";
  std::string ky_r = "inf";
  double kx_a = 0.0;
  double ky_c = 0.0;
  double k_theta = 0.5;
  std::string k_out;
  kfunc->add_option("--p", kx_p, "Exponent of X");
  kfunc->add_option("--a", kx_a, "Weight of X");
  kfunc->add_option("--r", ky_r, "Exponent of Y");
  kfunc->add_option("--c", ky_c, "Weight of Y");
  kfunc->add_option("--theta", k_theta, "Interpolation parameter for the (theta, inf) norm");
  kfunc->add_option("--out", k_out, "Write the (t, K) profile to this file");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  SuiteArgs verify_args;
  verify_args.attach(verify);
  auto* estimate = app.add_subcommand("estimate", "Estimate empirical constants");
  SuiteArgs estimate_args;
  estimate_args.attach(estimate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*params) {
      ordered_json out = ordered_json::array();
      auto describe = [&](const std::string& name, ckn::InequalityKind kind, const ckn::CknTuple& t) {
        ordered_json v = ordered_json::array();
        for (const auto& viol : ckn::validate_admissible(kind, t)) {
          v.push_back({{"constraint", viol.constraint}, {"detail", viol.detail}});
        }
        out.push_back({{"name", name},
                       {"kind", std::string(ckn::to_string(kind))},
                       {"n", t.n},
                       {"p", ckn::format_exponent(t.s_p)},
                       {"q", ckn::format_exponent(t.s_q)},
                       {"r", ckn::format_exponent(t.s_r)},
                       {"a", t.a},
                       {"b", t.b},
                       {"c", t.c},
                       {"lambda", t.lambda},
                       {"theta", t.theta},
                       {"compatibility_residual", ckn::compatibility_residual(t)},
                       {"violations", v}});
        return v.empty();
      };
      bool ok = true;
      if (!params_config.empty()) {
        try {
          const auto cfg = ckn::load_suite_config(params_config);
          for (const auto& s : cfg.suites) ok = describe(s.name, s.kind, s.tuple) && ok;
        } catch (const ckn::ConfigError& e) {
          std::cerr << params_config << ": " << e.what() << '\n';
          return kConfigError;
        }
      } else {
        const auto kind = ckn::parse_kind(kind_name);
        tuple.s_p = parse_exponent(p_text);
        tuple.s_r = parse_exponent(r_text);
        if (!q_text.empty()) tuple.s_q = parse_exponent(q_text);
        ok = describe("cli", kind, ckn::derive_tuple(kind, tuple));
      }
      std::cout << out.dump(2) << '\n';
      return ok ? kOk : kConfigError;
    }
    if (*norm) {
      ckn::AnnularDomain dom;
      const ckn::TestFunction u = norm_fn.build(dom);
      const ckn::SpaceSpec spec{norm_gradient ? 1 : 0, parse_exponent(norm_p), norm_a};
      const auto part = norm_seminorm ? ckn::HolderPart::SeminormOnly : ckn::HolderPart::Full;
      const ckn::NormResult r = ckn::space_norm(u, spec, dom, norm_q, part);
      ordered_json j = {{"value", num(r.value)},
                        {"err_estimate", num(r.err_estimate)},
                        {"regime", std::string(ckn::to_string(r.regime))},
                        {"is_lower_bound", r.is_lower_bound},
                        {"levels", r.levels}};
      if (r.regime == ckn::Regime::Holder) {
        j["sup_part"] = num(r.sup_part);
        j["seminorm_part"] = num(r.seminorm_part);
      }
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
    if (*kfunc) {
      ckn::AnnularDomain dom;
      const ckn::TestFunction u = k_fn.build(dom);
      const ckn::SpaceSpec x{0, parse_exponent(kx_p), kx_a};
      const ckn::SpaceSpec y{0, parse_exponent(ky_r), ky_c};
      const ckn::KProfile prof = ckn::k_profile(u, x, y, dom, ckn::KConfig{});
      std::string text = "# t K(t)\n";
      for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
        text += fmt::format("{:.17g} {:.17g}\n", prof.t_grid[i], prof.k_values[i]);
      }
      if (k_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(k_out);
        if (!(f << text)) {
          std::cerr << "cannot write " << k_out << '\n';
          return kAccuracyError;
        }
      }
      if (!quiet) {
        std::cerr << fmt::format("|u|_X = {:.10g}  |u|_Y = {:.10g}  (theta,inf) norm = {:.10g}\n",
                                 prof.norm_x, prof.norm_y, ckn::interp_norm(prof, k_theta));
      }
      return kOk;
    }
    if (*verify) return run_suites(verify_args, ckn::RunMode::Verify, quiet);
    if (*estimate) return run_suites(estimate_args, ckn::RunMode::Estimate, quiet);
  } catch (const ckn::AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << fmt::format(" (best estimate {:.17g})\n", e.best_estimate());
    return kAccuracyError;
  } catch (const ckn::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
