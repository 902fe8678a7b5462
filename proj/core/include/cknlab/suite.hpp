#pragma once

// Batch driver: suite configuration, execution, report files and manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cknlab/inequality_lab.hpp"
#include "cknlab/k_functional.hpp"

namespace ckn {

/// Malformed or inadmissible configuration. line/column are 1-based, 0 if unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Output directory or file could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Json, Csv, Both };

struct SuiteSpec {
  std::string name;
  InequalityKind kind = InequalityKind::ClassicalHardy;
  CknTuple tuple;  // derived fields filled in
  FamilyDescriptor family;
  std::vector<ParamMap> members;  // explicit members; empty means fixed params only
  LabConfig lab;
  OptimizerConfig optimizer;
  std::vector<double> alpha_grid;  // TrudingerMoser only
  int line = 0;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "cknlab_out";
  OutputFormat formats = OutputFormat::Both;
  std::vector<SuiteSpec> suites;
  std::string digest;  // SHA-256 of the config text
};

/// Parses YAML text. Unknown keys, bad values and inadmissible tuples throw ConfigError.
SuiteConfig parse_suite_config(std::string_view text);
SuiteConfig load_suite_config(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

enum class RunMode { Verify, Estimate };

struct SuiteResult {
  std::string name;
  InequalityKind kind = InequalityKind::ClassicalHardy;
  std::vector<InequalityReport> reports;
  std::optional<ConstantEstimate> estimate;
  std::vector<KProfile> profiles;
  std::optional<TmReport> tm;
  Verdict verdict = Verdict::Bounded;
  std::string error;  // accuracy failure, if any
  bool accuracy_failure = false;
};

struct RunManifest {
  std::string version;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::vector<std::pair<std::string, Verdict>> verdicts;
  int exit_status = 0;
};

struct RunOptions {
  RunMode mode = RunMode::Verify;
  std::ostream* log = nullptr;  // progress lines; null for quiet
};

std::string_view tool_version();

/// Runs one suite in memory.
SuiteResult execute_suite(const SuiteSpec& spec, std::uint64_t seed, RunMode mode);

/// Executes every suite, writes reports then the manifest into
/// cfg.output_dir and returns the manifest. exit_status: 0 all bounded,
/// 1 any violation, 3 accuracy failure, unwritable output or inconclusive.
RunManifest run_suite(const SuiteConfig& cfg, const RunOptions& opts);

/// Writes <dir>/<name>.json and/or .csv plus profile data files.
void emit_report(const SuiteResult& result, const SuiteSpec& spec,
                 const std::filesystem::path& dir, OutputFormat format);

/// CSV schema shared by every report file.
std::string csv_header();
std::string csv_row(const InequalityReport& rep);

/// Exponent p = 1/s formatted for reports ("inf" at s = 0).
std::string format_exponent(ReciprocalExponent s);

}  // namespace ckn
