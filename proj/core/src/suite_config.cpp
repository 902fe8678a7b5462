#include <yaml-cpp/yaml.h>

#include <cctype>
#include <cmath>
#include <limits>
#include <fstream>
#include <set>
#include <sstream>

#include "cknlab/errors.hpp"
#include "cknlab/suite.hpp"

namespace ckn {

ConfigError::ConfigError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? "config:" + std::to_string(line) + ":" +
                                        std::to_string(column) + ": " + msg
                                  : "config: " + msg),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& msg) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw ConfigError(msg);
  throw ConfigError(msg, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& node, const std::string& what) {
  if (!node.IsMap()) fail(node, what + " must be a mapping");
}

void check_keys(const YAML::Node& node, const std::string& what,
                std::initializer_list<std::string_view> allowed) {
  require_map(node, what);
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      fail(kv.first, "unknown key '" + key + "' in " + what + " (allowed: " + list + ")");
    }
  }
}

double as_double(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a number");
  const std::string text = node.Scalar();
  if (text == "inf" || text == "+inf" || text == ".inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf" || text == "-.inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) fail(node, what + " must be a number, got '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(node, what + " must be a number, got '" + text + "'");
  }
}

double finite_double(const YAML::Node& node, const std::string& what) {
  const double v = as_double(node, what);
  if (!std::isfinite(v)) fail(node, what + " must be finite");
  return v;
}

int as_int(const YAML::Node& node, const std::string& what) {
  const double v = finite_double(node, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(node, what + " must be an integer");
  return static_cast<int>(v);
}

bool as_bool(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    fail(node, what + " must be true or false");
  }
}

// exponent given either as p (number, inf, negative for Hölder) or as inv_p = 1/p
std::optional<ReciprocalExponent> exponent_field(const YAML::Node& tuple, const std::string& p) {
  const YAML::Node direct = tuple[p];
  const YAML::Node inv = tuple["inv_" + p];
  if (direct && inv) fail(inv, "give either " + p + " or inv_" + p + ", not both");
  if (direct) {
    const double v = as_double(direct, p);
    if (v == 0.0 || std::isnan(v)) fail(direct, p + " must be nonzero");
    return ReciprocalExponent::from_exponent(v);
  }
  if (inv) return ReciprocalExponent(finite_double(inv, "inv_" + p));
  return std::nullopt;
}

ParamMap param_map(const YAML::Node& node, const std::string& what) {
  require_map(node, what);
  ParamMap out;
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    out[key] = finite_double(kv.second, what + "." + key);
  }
  return out;
}

void parse_quadrature(const YAML::Node& node, QuadratureSpec& q) {
  check_keys(node, "quadrature",
             {"radial_nodes", "radial_order", "sphere_points", "refinement_levels",
              "target_rel_err", "exploit_radial_symmetry", "holder_pair_budget"});
  if (node["radial_nodes"]) q.radial_nodes = as_int(node["radial_nodes"], "radial_nodes");
  if (node["radial_order"]) q.radial_order = as_int(node["radial_order"], "radial_order");
  if (node["sphere_points"]) q.sphere_points = as_int(node["sphere_points"], "sphere_points");
  if (node["refinement_levels"]) {
    q.refinement_levels = as_int(node["refinement_levels"], "refinement_levels");
  }
  if (node["target_rel_err"]) q.target_rel_err = finite_double(node["target_rel_err"], "target_rel_err");
  if (node["exploit_radial_symmetry"]) {
    q.exploit_radial_symmetry = as_bool(node["exploit_radial_symmetry"], "exploit_radial_symmetry");
  }
  if (node["holder_pair_budget"]) {
    q.holder_pair_budget = as_int(node["holder_pair_budget"], "holder_pair_budget");
  }
}

void parse_family(const YAML::Node& node, SuiteSpec& s) {
  check_keys(node, "family", {"name", "fixed", "free", "members"});
  if (!node["name"]) fail(node, "family needs a name");
  s.family.family = node["name"].as<std::string>();
  bool known = false;
  for (const auto& f : registered_families()) known = known || f == s.family.family;
  if (!known) fail(node["name"], "unknown family '" + s.family.family + "'");
  if (node["fixed"]) s.family.fixed = param_map(node["fixed"], "family.fixed");
  if (node["free"]) {
    if (!node["free"].IsSequence()) fail(node["free"], "family.free must be a list");
    for (const auto& item : node["free"]) {
      check_keys(item, "family.free entry", {"name", "lo", "hi", "log"});
      if (!item["name"] || !item["lo"] || !item["hi"]) {
        fail(item, "family.free entries need name, lo and hi");
      }
      FamilyParam p;
      p.name = item["name"].as<std::string>();
      p.lo = finite_double(item["lo"], p.name + ".lo");
      p.hi = finite_double(item["hi"], p.name + ".hi");
      if (item["log"]) p.log_scale = as_bool(item["log"], "log");
      if (!(p.hi >= p.lo)) fail(item, "free parameter " + p.name + " needs lo <= hi");
      if (p.log_scale && !(p.lo > 0.0)) fail(item, "log-scale parameter " + p.name + " needs lo > 0");
      s.family.free.push_back(p);
    }
  }
  if (node["members"]) {
    if (!node["members"].IsSequence()) fail(node["members"], "family.members must be a list");
    for (const auto& item : node["members"]) s.members.push_back(param_map(item, "family member"));
  }
}

// Builds every declared member once so that bad parameter names fail at load time.
void probe_members(const YAML::Node& node, const SuiteSpec& s) {
  auto probe = [&](const ParamMap& extra) {
    ParamMap values = s.family.fixed;
    for (const auto& [k, v] : extra) values[k] = v;
    for (const auto& p : s.family.free) {
      if (!values.count(p.name)) values[p.name] = 0.5 * (p.lo + p.hi);
    }
    try {
      AnnularDomain dom;
      (void)family_member(s.family, values, dom);
    } catch (const DomainError& e) {
      fail(node, std::string("family: ") + e.what());
    }
  };
  if (s.members.empty()) probe({});
  for (const auto& m : s.members) probe(m);
}

SuiteSpec parse_suite(const YAML::Node& node, std::size_t index) {
  check_keys(node, "suite",
             {"name", "kind", "tuple", "domain", "family", "quadrature", "optimizer", "lab",
              "kfunc", "alpha_grid"});
  SuiteSpec s;
  s.line = node.Mark().line + 1;
  s.name = node["name"] ? node["name"].as<std::string>() : "suite" + std::to_string(index);
  for (char c : s.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      fail(node["name"], "suite name may only contain letters, digits, '_', '-' and '.'");
    }
  }
  if (!node["kind"]) fail(node, "suite needs a kind");
  try {
    s.kind = parse_kind(node["kind"].as<std::string>());
  } catch (const DomainError& e) {
    fail(node["kind"], e.what());
  }

  if (!node["tuple"]) fail(node, "suite needs a tuple");
  const YAML::Node t = node["tuple"];
  check_keys(t, "tuple",
             {"n", "p", "inv_p", "q", "inv_q", "r", "inv_r", "a", "c", "lambda", "theta"});
  if (!t["n"]) fail(t, "tuple needs n");
  CknTuple tuple;
  tuple.n = as_int(t["n"], "n");
  if (tuple.n < 2) fail(t["n"], "n >= 2 required");
  try {
    if (auto v = exponent_field(t, "p")) tuple.s_p = *v;
    if (auto v = exponent_field(t, "r")) tuple.s_r = *v;
    if (auto v = exponent_field(t, "q")) tuple.s_q = *v;
  } catch (const DomainError& e) {
    fail(t, e.what());
  }
  const bool needs_q = s.kind == InequalityKind::HardySobolev;
  if (needs_q && !t["q"] && !t["inv_q"]) fail(t, "HardySobolev needs q");
  if (!needs_q && (t["q"] || t["inv_q"])) fail(t, "q is derived for " + node["kind"].as<std::string>());
  if (t["a"]) tuple.a = finite_double(t["a"], "a");
  if (t["c"]) tuple.c = finite_double(t["c"], "c");
  if (t["lambda"]) tuple.lambda = finite_double(t["lambda"], "lambda");
  if (t["theta"]) tuple.theta = finite_double(t["theta"], "theta");
  if (s.kind == InequalityKind::KMethod && !t["theta"]) tuple.theta = 0.5;
  try {
    tuple = derive_tuple(s.kind, tuple);
  } catch (const DomainError& e) {
    fail(t, e.what());
  }
  const auto violations = validate_admissible(s.kind, tuple);
  if (!violations.empty()) {
    std::string msg = std::string(to_string(s.kind)) + " tuple not admissible:";
    for (const auto& v : violations) msg += " [" + v.constraint + ": " + v.detail + "]";
    fail(t, msg);
  }
  s.tuple = tuple;

  s.family.domain.n = tuple.n;
  if (node["domain"]) {
    const YAML::Node d = node["domain"];
    check_keys(d, "domain", {"rho_in", "rho_out"});
    if (d["rho_in"]) s.family.domain.rho_in = finite_double(d["rho_in"], "rho_in");
    if (d["rho_out"]) s.family.domain.rho_out = finite_double(d["rho_out"], "rho_out");
  }
  try {
    s.family.domain.validate();
  } catch (const DomainError& e) {
    fail(node["domain"] ? node["domain"] : node, e.what());
  }

  if (node["family"]) {
    parse_family(node["family"], s);
  } else {
    s.family.family = "radial_bump";
  }
  probe_members(node["family"] ? node["family"] : node, s);

  if (node["quadrature"]) parse_quadrature(node["quadrature"], s.lab.quad);
  try {
    s.lab.quad.validate(tuple.n);
  } catch (const DomainError& e) {
    fail(node["quadrature"] ? node["quadrature"] : node, e.what());
  }
  if (node["optimizer"]) {
    const YAML::Node o = node["optimizer"];
    check_keys(o, "optimizer", {"scan_points", "refine_starts", "max_evaluations"});
    if (o["scan_points"]) s.optimizer.scan_points = as_int(o["scan_points"], "scan_points");
    if (o["refine_starts"]) s.optimizer.refine_starts = as_int(o["refine_starts"], "refine_starts");
    if (o["max_evaluations"]) {
      s.optimizer.max_evaluations = as_int(o["max_evaluations"], "max_evaluations");
    }
    if (s.optimizer.scan_points < 1) fail(o, "scan_points must be >= 1");
    if (s.optimizer.refine_starts < 0) fail(o, "refine_starts must be >= 0");
  }
  if (node["lab"]) {
    const YAML::Node l = node["lab"];
    check_keys(l, "lab",
               {"c2", "tm_alpha", "holder_seminorm_only", "bound_tolerance", "claimed_constant"});
    if (l["c2"]) s.lab.c2 = finite_double(l["c2"], "c2");
    if (l["tm_alpha"]) s.lab.tm_alpha = finite_double(l["tm_alpha"], "tm_alpha");
    if (l["holder_seminorm_only"] && as_bool(l["holder_seminorm_only"], "holder_seminorm_only")) {
      s.lab.holder_part = HolderPart::SeminormOnly;
    }
    if (l["bound_tolerance"]) s.lab.bound_tolerance = finite_double(l["bound_tolerance"], "bound_tolerance");
    if (l["claimed_constant"]) {
      s.lab.claimed_constant = finite_double(l["claimed_constant"], "claimed_constant");
      if (!(*s.lab.claimed_constant > 0.0)) fail(l["claimed_constant"], "claimed_constant must be positive");
    }
    if (!(s.lab.c2 >= 1.0)) fail(l, "c2 must be >= 1");
    if (!(s.lab.bound_tolerance >= 0.0)) fail(l, "bound_tolerance must be >= 0");
  }
  if (node["kfunc"]) {
    const YAML::Node k = node["kfunc"];
    check_keys(k, "kfunc",
               {"use_cutoffs", "rho_points", "delta_fractions", "golden_iterations", "refine_stride"});
    KConfig& kc = s.lab.kcfg;
    if (k["use_cutoffs"]) kc.use_cutoffs = as_bool(k["use_cutoffs"], "use_cutoffs");
    if (k["rho_points"]) kc.rho_points = as_int(k["rho_points"], "rho_points");
    if (k["golden_iterations"]) kc.golden_iterations = as_int(k["golden_iterations"], "golden_iterations");
    if (k["refine_stride"]) kc.refine_stride = as_int(k["refine_stride"], "refine_stride");
    if (k["delta_fractions"]) {
      if (!k["delta_fractions"].IsSequence()) fail(k["delta_fractions"], "delta_fractions must be a list");
      kc.delta_fractions.clear();
      for (const auto& v : k["delta_fractions"]) {
        const double f = finite_double(v, "delta_fractions entry");
        if (!(f > 0.0)) fail(v, "delta_fractions entries must be positive");
        kc.delta_fractions.push_back(f);
      }
    }
    if (kc.rho_points < 1) fail(k, "rho_points must be >= 1");
  }
  if (node["alpha_grid"]) {
    if (s.kind != InequalityKind::TrudingerMoser) {
      fail(node["alpha_grid"], "alpha_grid only applies to TrudingerMoser");
    }
    if (!node["alpha_grid"].IsSequence()) fail(node["alpha_grid"], "alpha_grid must be a list");
    for (const auto& v : node["alpha_grid"]) {
      const double a = finite_double(v, "alpha_grid entry");
      if (a < 0.0) fail(v, "alpha_grid entries must be >= 0");
      if (!s.alpha_grid.empty() && a <= s.alpha_grid.back()) fail(v, "alpha_grid must increase");
      s.alpha_grid.push_back(a);
    }
  }
  return s;
}

}  // namespace

SuiteConfig parse_suite_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  SuiteConfig cfg;
  cfg.digest = sha256_hex(text);
  if (!root || root.IsNull()) throw ConfigError("empty configuration");
  try {
    check_keys(root, "configuration", {"seed", "output", "formats", "suites"});
    if (root["seed"]) {
      const double v = finite_double(root["seed"], "seed");
      if (v < 0.0 || v != std::floor(v) || v > 9.007199254740992e15) {
        fail(root["seed"], "seed must be a non-negative integer");
      }
      cfg.seed = static_cast<std::uint64_t>(v);
    }
    if (root["output"]) cfg.output_dir = root["output"].as<std::string>();
    if (root["formats"]) {
      const YAML::Node f = root["formats"];
      std::set<std::string> names;
      if (f.IsScalar()) {
        names.insert(f.Scalar());
      } else if (f.IsSequence()) {
        for (const auto& v : f) names.insert(v.as<std::string>());
      } else {
        fail(f, "formats must be json, csv, both or a list of them");
      }
      bool json = false;
      bool csv = false;
      for (const auto& n : names) {
        if (n == "json") json = true;
        else if (n == "csv") csv = true;
        else if (n == "both") json = csv = true;
        else fail(f, "unknown format '" + n + "'");
      }
      if (!json && !csv) fail(f, "formats must not be empty");
      cfg.formats = json && csv ? OutputFormat::Both : json ? OutputFormat::Json : OutputFormat::Csv;
    }
    if (root["suites"]) {
      const YAML::Node suites = root["suites"];
      if (!suites.IsSequence() && !suites.IsNull()) fail(suites, "suites must be a list");
      std::set<std::string> names;
      std::size_t i = 0;
      for (const auto& node : suites) {
        SuiteSpec s = parse_suite(node, i++);
        if (!names.insert(s.name).second) fail(node, "duplicate suite name '" + s.name + "'");
        cfg.suites.push_back(std::move(s));
      }
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.is_null() ? 0 : e.mark.line + 1,
                      e.mark.is_null() ? 0 : e.mark.column + 1);
  }
  return cfg;
}

SuiteConfig load_suite_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_suite_config(ss.str());
}

}  // namespace ckn
