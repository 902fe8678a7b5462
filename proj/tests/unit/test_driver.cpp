#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cknlab/suite.hpp"

using namespace ckn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(CKNLAB_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  auto v = split(s, '\n');
  if (!v.empty() && v.back().empty()) v.pop_back();
  return v;
}

SuiteConfig config_in(const fs::path& dir, const std::string& body) {
  SuiteConfig cfg = parse_suite_config(body);
  cfg.output_dir = dir.string();
  return cfg;
}

const char* kLL = R"(seed: 3
suites:
  - name: ll
    kind: Interpolation
    tuple: {n: 2, p: 2, r: 4, a: 0.3, c: -0.2, lambda: 0.4}
    domain: {rho_in: 1, rho_out: 3}
    family:
      name: radial_bump
      members:
        - {sharpness: 0.5}
        - {sharpness: 2}
        - {sharpness: 6}
)";

}  // namespace

TEST_CASE("config errors carry line numbers") {
  SUBCASE("unknown key") {
    try {
      parse_suite_config("suites:\n  - kind: ClassicalHardy\n    tuple: {n: 3, p: 2}\n    quadrature:\n      radial_nodez: 8\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 5);
      CHECK(std::string(e.what()).find("radial_nodez") != std::string::npos);
    }
  }
  SUBCASE("unparseable text") {
    try {
      parse_suite_config("suites: [\n  {kind: ClassicalHardy\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() > 0);
    }
  }
  SUBCASE("inadmissible tuple names the excluded endpoint") {
    try {
      parse_suite_config("suites:\n  - kind: GeneralizedCKN\n    tuple: {n: 2, p: 2, r: 4, lambda: 0.5, theta: 0.5}\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("1/p = 1/n excluded") != std::string::npos);
    }
  }
  SUBCASE("bad values") {
    CHECK_THROWS_AS(parse_suite_config("seed: -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_suite_config("formats: xml\n"), ConfigError);
    CHECK_THROWS_AS(parse_suite_config("suites:\n  - kind: Nope\n    tuple: {n: 2}\n"), ConfigError);
    CHECK_THROWS_AS(parse_suite_config("suites:\n  - kind: ClassicalHardy\n    tuple: {n: 3, p: 2, q: 2}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_suite_config("suites:\n  - kind: ClassicalHardy\n    tuple: {n: 3, p: 2}\n"
                                       "    family: {name: radial_bump, fixed: {beta: 1}}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_suite_config(""), ConfigError);
  }
}

TEST_CASE("config parsing fills derived fields and defaults") {
  const auto cfg = parse_suite_config(kLL);
  CHECK(cfg.seed == 3);
  CHECK(cfg.formats == OutputFormat::Both);
  REQUIRE(cfg.suites.size() == 1);
  const auto& s = cfg.suites[0];
  CHECK(s.kind == InequalityKind::Interpolation);
  CHECK(s.members.size() == 3);
  CHECK(s.tuple.s_q.value() == doctest::Approx(0.6 * 0.5 + 0.4 * 0.25));
  CHECK(cfg.digest.size() == 64);
  CHECK(parse_suite_config(std::string(kLL) + "\n").digest != cfg.digest);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("empty suite list writes only the manifest") {
  const auto dir = scratch("empty");
  const auto cfg = config_in(dir, "suites: []\n");
  const auto man = run_suite(cfg, RunOptions{});
  CHECK(man.exit_status == 0);
  CHECK(man.verdicts.empty());
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++files;
    CHECK(e.path().filename() == "manifest.json");
  }
  CHECK(files == 1);
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["exit_status"] == 0);
  CHECK(j["config_digest"] == cfg.digest);
}

TEST_CASE("L-L suite: CSV schema and agreement with JSON") {
  const auto dir = scratch("ll");
  const auto man = run_suite(config_in(dir, kLL), RunOptions{});
  CHECK(man.exit_status == 0);
  REQUIRE(man.verdicts.size() == 1);
  CHECK(man.verdicts[0].second == Verdict::Bounded);

  const auto rows = lines(slurp(dir / "ll.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "kind,n,p,q,r,a,b,c,lambda,theta,lhs,rhs,ratio,err,verdict");
  const auto json = nlohmann::json::parse(slurp(dir / "ll.json"));
  REQUIRE(json["reports"].size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i], ',');
    REQUIRE(f.size() == 15);
    CHECK(f[0] == "Interpolation");
    CHECK(f[14] == "bounded");
    const auto& rep = json["reports"][i - 1];
    CHECK(std::stod(f[10]) == rep["lhs"].get<double>());
    CHECK(std::stod(f[11]) == rep["rhs"].get<double>());
    CHECK(std::stod(f[12]) == rep["ratio"].get<double>());
    CHECK(std::stod(f[13]) == rep["ratio_err"].get<double>());
    CHECK(std::stod(f[12]) <= 1.0 + 5.0 * std::stod(f[13]));
  }
}

TEST_CASE("csv_row prints 17 significant digits") {
  InequalityReport r;
  r.kind = InequalityKind::ClassicalHardy;
  r.tuple.n = 3;
  r.tuple.s_p = ReciprocalExponent(0.5);
  r.tuple.s_q = ReciprocalExponent(0.5);
  r.tuple.s_r = ReciprocalExponent(0.0);
  r.lhs = 0.1;
  r.verdict = Verdict::Bounded;
  const auto f = split(csv_row(r), ',');
  REQUIRE(f.size() == 15);
  CHECK(f[2] == "2");
  CHECK(f[4] == "inf");
  CHECK(f[10] == "0.10000000000000001");
}

TEST_CASE("K-method suite writes a two-column profile") {
  const auto dir = scratch("kmethod");
  const auto man = run_suite(config_in(dir, R"(suites:
  - name: k
    kind: KMethod
    tuple: {n: 2, p: 2, r: inf, theta: 0.5}
    family: {name: radial_bump, fixed: {sharpness: 1}}
)"),
                             RunOptions{});
  CHECK(man.exit_status == 0);
  const auto rows = lines(slurp(dir / "k_kprofile_0.dat"));
  REQUIRE(rows.size() == 66);
  CHECK(rows[0] == "# t K(t)");
  double prev_t = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i], ' ');
    REQUIRE(f.size() == 2);
    CHECK(std::stod(f[0]) > prev_t);
    prev_t = std::stod(f[0]);
  }
}

TEST_CASE("determinism: identical config and seed give byte-identical CSV") {
  const char* body = R"(seed: 11
formats: csv
suites:
  - name: hardy
    kind: ClassicalHardy
    tuple: {n: 3, p: 2}
    domain: {rho_in: 1, rho_out: 100}
    family:
      name: power_bump
      free:
        - {name: beta, lo: -1.5, hi: 0.5}
        - {name: cut_fraction, lo: 0.05, hi: 0.45}
    optimizer: {scan_points: 12, refine_starts: 1, max_evaluations: 30}
)";
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const auto ma = run_suite(config_in(a, body), RunOptions{});
  const auto mb = run_suite(config_in(b, body), RunOptions{});
  CHECK(ma.exit_status == 0);
  CHECK(mb.exit_status == 0);
  const auto ca = slurp(a / "hardy.csv");
  CHECK(lines(ca).size() > 12);
  CHECK(ca == slurp(b / "hardy.csv"));
  CHECK_FALSE(fs::exists(a / "hardy.json"));

  // a different seed moves the scan
  auto other = config_in(scratch("det_c"), body);
  other.seed = 12;
  run_suite(other, RunOptions{});
  CHECK(slurp(fs::path(other.output_dir) / "hardy.csv") != ca);
}

TEST_CASE("exit status precedence") {
  SUBCASE("violation -> 1") {
    const auto dir = scratch("violated");
    const auto man = run_suite(config_in(dir, R"(suites:
  - kind: ClassicalHardy
    tuple: {n: 3, p: 2}
    lab: {claimed_constant: 0.1}
)"),
                               RunOptions{});
    CHECK(man.exit_status == 1);
    CHECK(man.verdicts.at(0).second == Verdict::Violated);
  }
  SUBCASE("accuracy failure -> 3, even next to a violation") {
    const auto dir = scratch("accuracy");
    const auto man = run_suite(config_in(dir, R"(suites:
  - name: bad
    kind: ClassicalHardy
    tuple: {n: 3, p: 2}
    lab: {claimed_constant: 0.1}
  - name: acc
    kind: LocalizedHardy
    tuple: {n: 2, p: 1}
    family: {name: radial_bump, fixed: {mode: 2}}
    quadrature: {target_rel_err: 1e-15, refinement_levels: 1}
)"),
                               RunOptions{});
    CHECK(man.exit_status == 3);
    const auto j = nlohmann::json::parse(slurp(dir / "acc.json"));
    CHECK(j["error"].get<std::string>().find("best estimate") != std::string::npos);
  }
  SUBCASE("unwritable output -> 3") {
    const auto dir = scratch("blocked");
    std::ofstream(dir / "file") << "x";
    auto cfg = parse_suite_config("suites: []\n");
    cfg.output_dir = (dir / "file" / "sub").string();
    CHECK(run_suite(cfg, RunOptions{}).exit_status == 3);
  }
}
