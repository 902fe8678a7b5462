#include <fmt/format.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <json.hpp>

#include "cknlab/errors.hpp"
#include "cknlab/suite.hpp"

namespace ckn {

namespace {

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Violated || b == Verdict::Violated) return Verdict::Violated;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Bounded;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void log_line(const RunOptions& opts, const std::string& line) {
  if (opts.log != nullptr) *opts.log << line << '\n';
}

}  // namespace

std::string_view tool_version() { return CKNLAB_VERSION; }

SuiteResult execute_suite(const SuiteSpec& spec, std::uint64_t seed, RunMode mode) {
  SuiteResult res;
  res.name = spec.name;
  res.kind = spec.kind;
  try {
    const bool estimate = !spec.family.free.empty() || mode == RunMode::Estimate;
    if (estimate) {
      OptimizerConfig opt = spec.optimizer;
      opt.seed = seed;
      opt.record_reports = true;
      try {
        res.estimate = estimate_constant(spec.kind, spec.tuple, spec.family, spec.lab, opt);
        res.verdict = res.estimate->best.verdict;
        for (const auto& r : res.estimate->evaluated) res.verdict = combine(res.verdict, r.verdict);
      } catch (const AdmissibilityError&) {
        throw;
      } catch (const DomainError& e) {
        res.verdict = Verdict::Inconclusive;
        res.error = e.what();
      }
    }
    if (mode == RunMode::Verify && (spec.family.free.empty() || !spec.members.empty())) {
      std::vector<ParamMap> members = spec.members;
      if (members.empty()) members.push_back({});
      for (const ParamMap& extra : members) {
        ParamMap values = spec.family.fixed;
        for (const auto& [k, v] : extra) values[k] = v;
        AnnularDomain dom;
        const TestFunction u = family_member(spec.family, values, dom);
        InequalityReport rep = evaluate_instance(spec.kind, spec.tuple, u, dom, spec.lab);
        res.verdict = combine(res.verdict, rep.verdict);
        res.reports.push_back(std::move(rep));
        if (spec.kind == InequalityKind::KMethod) {
          KConfig k = spec.lab.kcfg;
          k.quad = spec.lab.quad;
          k.holder_part = spec.lab.holder_part;
          res.profiles.push_back(k_profile(u, {0, spec.tuple.s_p, spec.tuple.a},
                                           {0, spec.tuple.s_r, spec.tuple.c}, dom, k));
        }
        if (spec.kind == InequalityKind::TrudingerMoser && !spec.alpha_grid.empty() && !res.tm) {
          res.tm = trudinger_moser_check(u, dom, spec.alpha_grid, spec.lab);
          if (!res.tm->finite || !res.tm->monotone) res.verdict = combine(res.verdict, Verdict::Violated);
        }
      }
    }
  } catch (const AccuracyError& e) {
    res.accuracy_failure = true;
    res.verdict = Verdict::Inconclusive;
    res.error = fmt::format("{} (best estimate {:.17g}, error {:.3g})", e.what(), e.best_estimate(),
                            e.err_estimate());
  }
  return res;
}

RunManifest run_suite(const SuiteConfig& cfg, const RunOptions& opts) {
  RunManifest man;
  man.version = std::string(tool_version());
  man.config_digest = cfg.digest;
  man.seed = cfg.seed;
  man.timestamp = utc_timestamp();

  const std::filesystem::path dir(cfg.output_dir);
  bool output_failed = false;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    log_line(opts, "error: cannot create output directory " + dir.string());
    man.exit_status = 3;
    return man;
  }

  bool violated = false;
  bool inconclusive = false;
  bool accuracy = false;
  for (const SuiteSpec& spec : cfg.suites) {
    log_line(opts, fmt::format("suite {} ({})", spec.name, to_string(spec.kind)));
    const SuiteResult res = execute_suite(spec, cfg.seed, opts.mode);
    try {
      emit_report(res, spec, dir, cfg.formats);
    } catch (const OutputError& e) {
      log_line(opts, std::string("error: ") + e.what());
      output_failed = true;
    }
    for (const auto& r : res.reports) {
      log_line(opts, fmt::format("  ratio {:.10g} +- {:.2g}  {}", r.empirical_ratio, r.ratio_err,
                                 to_string(r.verdict)));
    }
    if (res.estimate) {
      log_line(opts, fmt::format("  sup ratio {:.10g} over {} evaluations", res.estimate->sup_ratio,
                                 res.estimate->n_evaluations));
    }
    if (!res.error.empty()) log_line(opts, "  error: " + res.error);
    log_line(opts, fmt::format("  verdict {}", to_string(res.verdict)));
    violated = violated || res.verdict == Verdict::Violated;
    inconclusive = inconclusive || res.verdict == Verdict::Inconclusive;
    accuracy = accuracy || res.accuracy_failure;
    man.verdicts.emplace_back(spec.name, res.verdict);
  }

  if (accuracy || output_failed) {
    man.exit_status = 3;
  } else if (violated) {
    man.exit_status = 1;
  } else if (inconclusive) {
    man.exit_status = 3;
  } else {
    man.exit_status = 0;
  }

  nlohmann::ordered_json j;
  j["tool"] = "cknlab";
  j["version"] = man.version;
  j["config_digest"] = man.config_digest;
  j["seed"] = man.seed;
  j["timestamp"] = man.timestamp;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& [name, v] : man.verdicts) {
    suites.push_back({{"name", name}, {"verdict", std::string(to_string(v))}});
  }
  j["suites"] = suites;
  j["exit_status"] = man.exit_status;
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out || !(out << j.dump(2) << '\n') || !out.flush()) {
    log_line(opts, "error: cannot write manifest");
    man.exit_status = 3;
  }
  return man;
}

}  // namespace ckn
