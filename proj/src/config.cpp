#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "esym/cli.hpp"

namespace esym {

namespace {

std::string g_source = "<config>";

[[noreturn]] void fail(const YAML::Node& n, const std::string& key, const std::string& msg) {
  std::ostringstream os;
  os << g_source;
  if (n.IsDefined() && n.Mark().line >= 0) os << ":" << n.Mark().line + 1;
  os << ": key '" << key << "': " << msg;
  throw ConfigError(os.str());
}

double as_double(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(n, key, "expected a number");
  }
}

long as_long(const YAML::Node& n, const std::string& key) {
  const double v = as_double(n, key);
  if (std::floor(v) != v) fail(n, key, "expected an integer");
  return static_cast<long>(v);
}

std::string as_string(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, key, "expected a scalar");
  return n.as<std::string>();
}

bool is_number(const YAML::Node& n) {
  if (!n.IsScalar()) return false;
  try {
    (void)n.as<double>();
    return true;
  } catch (const YAML::Exception&) {
    return false;
  }
}

void check_keys(const YAML::Node& n, const std::string& where, const std::set<std::string>& allowed) {
  if (!n.IsMap()) fail(n, where, "expected a mapping");
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    if (!allowed.count(k)) fail(kv.first, where.empty() ? k : where + "." + k, "unknown key");
  }
}

Expr parse_expr(const YAML::Node& n, const std::string& key, const std::vector<std::string>& names) {
  const std::string text = as_string(n, key);
  try {
    return parse(text, names);
  } catch (const ParseError& e) {
    fail(n, key, e.what());
  }
}

std::vector<std::string> string_list(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(n, key, "expected a list");
  std::vector<std::string> out;
  for (const auto& v : n) out.push_back(as_string(v, key));
  return out;
}

std::vector<std::vector<Expr>> expr_matrix(const YAML::Node& n, const std::string& key, int rows,
                                           int cols, const std::vector<std::string>& names) {
  if (!n.IsSequence() || static_cast<int>(n.size()) != rows)
    fail(n, key, "dimension mismatch: expected " + std::to_string(rows) + " rows");
  std::vector<std::vector<Expr>> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const YAML::Node row = n[i];
    if (!row.IsSequence() || static_cast<int>(row.size()) != cols)
      fail(row, key, "dimension mismatch: row " + std::to_string(i + 1) + " needs " +
                         std::to_string(cols) + " entries");
    std::vector<Expr> r;
    for (std::size_t j = 0; j < row.size(); ++j) r.push_back(parse_expr(row[j], key, names));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<int> parse_index_key(const YAML::Node& k, const std::string& key, int count, int limit) {
  const std::string s = k.as<std::string>();
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok) - 1);
    } catch (const std::exception&) {
      fail(k, key, "bad index tuple '" + s + "'");
    }
  }
  if (static_cast<int>(out.size()) != count) fail(k, key, "index tuple '" + s + "' needs " + std::to_string(count) + " entries");
  for (int v : out)
    if (v < 0 || v >= limit) fail(k, key, "index out of range in '" + s + "'");
  return out;
}

int coord_index(const YAML::Node& n, const std::string& key, const std::vector<std::string>& coords) {
  if (is_number(n)) {
    const long v = as_long(n, key);
    if (v < 0 || v >= static_cast<long>(coords.size())) fail(n, key, "coordinate index out of range");
    return static_cast<int>(v);
  }
  const std::string s = as_string(n, key);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == s) return static_cast<int>(i);
  fail(n, key, "unknown coordinate '" + s + "'");
}

EFrame custom_frame(const YAML::Node& fr, const std::vector<std::string>& coords, const Chart& chart) {
  check_keys(fr, "custom.frame", {"family", "m", "k", "p", "anchor", "structure", "boundary", "orders"});
  const int n = static_cast<int>(coords.size());
  const std::string fam = fr["family"] ? as_string(fr["family"], "custom.frame.family") : "custom";
  EFrame f;
  try {
    if (fam == "b") {
      f = make_b_structure(n, fr["m"] ? static_cast<int>(as_long(fr["m"], "custom.frame.m")) : 1);
    } else if (fam == "corner") {
      if (!fr["k"]) fail(fr, "custom.frame.k", "corner family needs k");
      f = make_corner_structure(n, static_cast<int>(as_long(fr["k"], "custom.frame.k")));
    } else if (fam == "foliation") {
      if (!fr["p"]) fail(fr, "custom.frame.p", "foliation family needs p");
      f = make_foliation_structure(n, static_cast<int>(as_long(fr["p"], "custom.frame.p")));
    } else if (fam == "elliptic" || fam == "vanishing") {
      if (n != 2) fail(fr, "custom.coords", "dimension mismatch: " + fam + " family needs 2 coordinates");
      f = fam == "elliptic" ? make_elliptic_structure() : make_vanishing_structure();
    } else if (fam == "custom") {
      if (!fr["anchor"]) fail(fr, "custom.frame.anchor", "custom frames need an anchor");
      const YAML::Node an = fr["anchor"];
      if (!an.IsSequence() || an.size() == 0) fail(an, "custom.frame.anchor", "expected a non-empty list of rows");
      const int p = static_cast<int>(an.size());
      auto anchor = expr_matrix(an, "custom.frame.anchor", p, n, coords);
      std::vector<std::vector<std::vector<Expr>>> C(
          p, std::vector<std::vector<Expr>>(p, std::vector<Expr>(p, Expr(0.0))));
      if (fr["structure"]) {
        const YAML::Node st = fr["structure"];
        if (!st.IsMap()) fail(st, "custom.frame.structure", "expected a mapping \"i,j,k\": expression");
        for (const auto& kv : st) {
          auto idx = parse_index_key(kv.first, "custom.frame.structure", 3, p);
          Expr e = parse_expr(kv.second, "custom.frame.structure", coords);
          if (idx[0] == idx[1]) fail(kv.first, "custom.frame.structure", "C_ii^k must vanish");
          if (idx[0] > idx[1]) {
            std::swap(idx[0], idx[1]);
            e = -e;
          }
          C[idx[0]][idx[1]][idx[2]] = e;
        }
      }
      std::vector<int> bd;
      std::map<int, int> ord;
      if (fr["boundary"]) {
        const YAML::Node b = fr["boundary"];
        if (!b.IsSequence()) fail(b, "custom.frame.boundary", "expected a list");
        for (const auto& v : b) bd.push_back(coord_index(v, "custom.frame.boundary", coords));
      }
      if (fr["orders"]) {
        const YAML::Node o = fr["orders"];
        if (!o.IsSequence() || o.size() != bd.size())
          fail(o, "custom.frame.orders", "dimension mismatch: one order per boundary coordinate");
        for (std::size_t i = 0; i < bd.size(); ++i)
          ord[bd[i]] = static_cast<int>(as_long(o[i], "custom.frame.orders"));
      }
      Chart c = Chart::make(chart.name, coords, bd, chart.region, chart.region_text);
      return make_custom_frame(c, anchor, C, ord);
    } else {
      fail(fr["family"], "custom.frame.family", "unknown family '" + fam + "'");
    }
  } catch (const FrameError& e) {
    fail(fr, "custom.frame", e.what());
  }
  f.chart = Chart::make(chart.name, coords, f.chart.boundary, chart.region, chart.region_text);
  return f;
}

LieAlgebra custom_algebra(const YAML::Node& a) {
  if (a.IsScalar()) {
    try {
      return LieAlgebra::by_name(a.as<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(a, "custom.gauge.algebra", e.what());
    }
  }
  check_keys(a, "custom.gauge.algebra", {"dim", "constants", "name"});
  const int d = static_cast<int>(as_long(a["dim"], "custom.gauge.algebra.dim"));
  if (d < 1) fail(a["dim"], "custom.gauge.algebra.dim", "must be positive");
  std::vector<double> c(static_cast<std::size_t>(d * d * d), 0.0);
  if (a["constants"]) {
    for (const auto& kv : a["constants"]) {
      auto idx = parse_index_key(kv.first, "custom.gauge.algebra.constants", 3, d);
      const double v = as_double(kv.second, "custom.gauge.algebra.constants");
      c[static_cast<std::size_t>((idx[0] * d + idx[1]) * d + idx[2])] = v;
      c[static_cast<std::size_t>((idx[1] * d + idx[0]) * d + idx[2])] = -v;
    }
  }
  try {
    return LieAlgebra::custom(a["name"] ? a["name"].as<std::string>() : "custom", d, c);
  } catch (const std::invalid_argument& e) {
    fail(a, "custom.gauge.algebra", e.what());
  }
}

ScenarioSpec build_custom(const YAML::Node& c) {
  check_keys(c, "custom", {"name", "coords", "region", "region_closed", "frame", "momenta", "symplectic",
                           "metric", "negative_eigenvalues", "hamiltonian", "potential", "gauge",
                           "action", "moment"});
  ScenarioSpec s;
  s.name = c["name"] ? as_string(c["name"], "custom.name") : "custom";
  s.provenance = "user-declared system";
  if (!c["coords"]) fail(c, "custom.coords", "missing coordinate list");
  const auto coords = string_list(c["coords"], "custom.coords");
  try {
    (void)Chart::make("check", coords);
  } catch (const FrameError& e) {
    fail(c["coords"], "custom.coords", e.what());
  }
  std::vector<Expr> open, closed;
  std::string region_text;
  if (c["region"])
    for (const auto& v : c["region"]) {
      open.push_back(parse_expr(v, "custom.region", coords));
      region_text += (region_text.empty() ? "" : ", ") + v.as<std::string>() + " > 0";
    }
  if (c["region_closed"])
    for (const auto& v : c["region_closed"]) {
      closed.push_back(parse_expr(v, "custom.region_closed", coords));
      region_text += (region_text.empty() ? "" : ", ") + v.as<std::string>() + " >= 0";
    }
  RegionFn region;
  if (!open.empty() || !closed.empty())
    region = [open, closed](std::span<const double> x) {
      for (const auto& e : open)
        if (!(e.eval(x) > 0)) return false;
      for (const auto& e : closed)
        if (!(e.eval(x) >= 0)) return false;
      return true;
    };
  Chart chart = Chart::make(s.name, coords, {}, region, region_text.empty() ? "R^n" : region_text);
  if (!c["frame"]) fail(c, "custom.frame", "missing frame block");
  const EFrame f = custom_frame(c["frame"], coords, chart);
  const int n = f.n(), p = f.p;

  if (c["symplectic"]) {
    if (c["metric"] || c["gauge"]) fail(c["symplectic"], "custom.symplectic", "cannot be combined with metric or gauge");
    EForm w;
    w.degree = 2;
    for (const auto& kv : c["symplectic"]) {
      auto idx = parse_index_key(kv.first, "custom.symplectic", 2, p);
      w.set(idx, parse_expr(kv.second, "custom.symplectic", coords));
    }
    s.phase = symplectic_manifold(f, w);
  } else {
    std::vector<std::string> mom;
    if (c["momenta"]) {
      mom = string_list(c["momenta"], "custom.momenta");
      if (static_cast<int>(mom.size()) != p)
        fail(c["momenta"], "custom.momenta", "dimension mismatch: frame has " + std::to_string(p) + " generators");
    }
    try {
      s.phase = cotangent_bundle(f, mom);
    } catch (const FrameError& e) {
      fail(c["momenta"], "custom.momenta", e.what());
    }
  }
  std::vector<std::string> names = s.phase.names;

  if (c["metric"]) {
    auto g = expr_matrix(c["metric"], "custom.metric", p, p, coords);
    const int neg = c["negative_eigenvalues"]
                        ? static_cast<int>(as_long(c["negative_eigenvalues"], "custom.negative_eigenvalues"))
                        : 0;
    s.metric = EMetric(f, g, neg);
  }
  if (c["gauge"]) {
    const YAML::Node g = c["gauge"];
    check_keys(g, "custom.gauge", {"algebra", "A"});
    if (!g["algebra"]) fail(g, "custom.gauge.algebra", "missing algebra");
    const LieAlgebra alg = custom_algebra(g["algebra"]);
    if (!g["A"]) fail(g, "custom.gauge.A", "missing connection coefficients");
    auto A = expr_matrix(g["A"], "custom.gauge.A", p, alg.d, coords);
    s.gauge = GaugeData(alg, f, A);
    for (int a = 0; a < alg.d; ++a) names.push_back("O" + std::to_string(a + 1));
  }
  s.state_names = names;

  const std::vector<std::string> hnames(names.begin(), names.begin() + (s.phase.kind == PhaseSpace::Kind::cotangent ? n + p : n));
  if (c["hamiltonian"]) {
    const std::string text = as_string(c["hamiltonian"], "custom.hamiltonian");
    try {
      s.hamiltonian = parse_efunction(text, hnames, f.chart.boundary);
      check_admissible(s.hamiltonian, f);
    } catch (const ParseError& e) {
      fail(c["hamiltonian"], "custom.hamiltonian", e.what());
    } catch (const AdmissibilityError& e) {
      fail(c["hamiltonian"], "custom.hamiltonian", std::string("expression \"") + text + "\": " + e.what());
    }
  } else if (s.metric) {
    s.hamiltonian = kinetic_efunction(*s.metric);
  } else {
    fail(c, "custom.hamiltonian", "missing Hamiltonian (or a metric for geodesic flow)");
  }
  if (c["potential"]) {
    if (!s.metric) fail(c["potential"], "custom.potential", "a potential needs a metric");
    const Expr V = parse_expr(c["potential"], "custom.potential", coords);
    s.hamiltonian = EFunction(kinetic_efunction(*s.metric).smooth + V, n + p);
  }
  if (c["action"]) {
    auto comps = c["action"];
    if (!comps.IsSequence() || static_cast<int>(comps.size()) != s.phase.dim())
      fail(comps, "custom.action", "dimension mismatch: need " + std::to_string(s.phase.dim()) + " components");
    ActionGenerator gen;
    gen.label = "action";
    for (const auto& v : comps) gen.fundamental.push_back(parse_expr(v, "custom.action", hnames));
    s.action = gen;
    if (!c["moment"]) fail(c, "custom.moment", "an action needs a moment map");
    try {
      s.moment = parse_efunction(as_string(c["moment"], "custom.moment"), hnames, f.chart.boundary);
    } catch (const ParseError& e) {
      fail(c["moment"], "custom.moment", e.what());
    }
  }
  s.x0.assign(names.size(), 0.0);
  return s;
}

void fill_integrator(const YAML::Node& n, IntegratorConfig& ic) {
  check_keys(n, "integrator", {"method", "dt", "rtol", "atol", "dt_min", "dt_max", "T", "sample_stride"});
  if (n["method"]) {
    try {
      ic.method = method_from_name(as_string(n["method"], "integrator.method"));
    } catch (const std::invalid_argument& e) {
      fail(n["method"], "integrator.method", e.what());
    }
  }
  if (n["dt"]) ic.dt = as_double(n["dt"], "integrator.dt");
  if (n["rtol"]) ic.rtol = as_double(n["rtol"], "integrator.rtol");
  if (n["atol"]) ic.atol = as_double(n["atol"], "integrator.atol");
  if (n["dt_min"]) ic.dt_min = as_double(n["dt_min"], "integrator.dt_min");
  if (n["dt_max"]) ic.dt_max = as_double(n["dt_max"], "integrator.dt_max");
  if (n["T"]) ic.T = as_double(n["T"], "integrator.T");
  if (n["sample_stride"]) ic.sample_stride = static_cast<int>(as_long(n["sample_stride"], "integrator.sample_stride"));
  try {
    ic.validate();
  } catch (const std::invalid_argument& e) {
    fail(n, "integrator", e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  g_source = source;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": malformed YAML: " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
  check_keys(root, "", {"scenario", "custom", "parameters", "initial", "integrator", "output", "seed", "ensemble"});
  RunConfig cfg;
  if (root["scenario"] && root["custom"]) fail(root["custom"], "custom", "give either scenario or custom, not both");
  if (!root["scenario"] && !root["custom"]) fail(root, "scenario", "missing: give scenario or custom");
  if (root["scenario"]) {
    cfg.scenario = as_string(root["scenario"], "scenario");
    const auto names = scenario_names();
    if (std::find(names.begin(), names.end(), cfg.scenario) == names.end())
      fail(root["scenario"], "scenario", "unknown scenario '" + cfg.scenario + "'");
  } else {
    YAML::Emitter em;
    em << root["custom"];
    cfg.custom_yaml = em.c_str();
    (void)build_custom(root["custom"]);  // early validation with line numbers
  }
  if (root["parameters"]) {
    const YAML::Node ps = root["parameters"];
    if (!ps.IsMap()) fail(ps, "parameters", "expected a mapping");
    for (const auto& kv : ps) {
      const std::string k = kv.first.as<std::string>();
      if (is_number(kv.second)) cfg.params.num[k] = kv.second.as<double>();
      else cfg.params.str[k] = as_string(kv.second, "parameters." + k);
    }
  }
  if (root["initial"]) {
    const YAML::Node in = root["initial"];
    if (!in.IsSequence()) fail(in, "initial", "expected a list of numbers");
    for (const auto& v : in) cfg.initial.push_back(as_double(v, "initial"));
  }
  if (root["integrator"]) {
    fill_integrator(root["integrator"], cfg.integrator);
    cfg.integrator_given = true;
  }
  if (root["output"]) {
    const YAML::Node o = root["output"];
    check_keys(o, "output", {"dir", "format", "plot"});
    if (o["dir"]) cfg.out_dir = as_string(o["dir"], "output.dir");
    if (o["format"]) cfg.format = as_string(o["format"], "output.format");
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
      fail(o["format"], "output.format", "must be csv, json or both");
    if (o["plot"]) cfg.plot = string_list(o["plot"], "output.plot");
  }
  if (root["seed"]) {
    const long s = as_long(root["seed"], "seed");
    if (s < 0) fail(root["seed"], "seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (root["ensemble"]) {
    const YAML::Node e = root["ensemble"];
    check_keys(e, "ensemble", {"count", "spread"});
    if (e["count"]) cfg.ensemble = static_cast<int>(as_long(e["count"], "ensemble.count"));
    if (e["spread"]) cfg.spread = as_double(e["spread"], "ensemble.spread");
    if (cfg.ensemble < 1) fail(e["count"], "ensemble.count", "must be >= 1");
  }
  (void)build_problem(cfg);  // dimension checks
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

ScenarioSpec build_problem(const RunConfig& cfg) {
  ScenarioSpec s;
  if (!cfg.scenario.empty()) {
    try {
      s = make_scenario(cfg.scenario, cfg.params);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("parameters: scenario " + cfg.scenario + ": " + e.what());
    }
  } else {
    YAML::Node c = YAML::Load(cfg.custom_yaml);
    s = build_custom(c);
    if (cfg.initial.empty()) throw ConfigError("initial: custom systems need an explicit initial state");
  }
  if (!cfg.initial.empty()) {
    if (static_cast<int>(cfg.initial.size()) != s.state_size())
      throw ConfigError("initial: dimension mismatch: state of " + s.name + " has " +
                        std::to_string(s.state_size()) + " entries, got " + std::to_string(cfg.initial.size()));
    s.x0 = cfg.initial;
  }
  if (cfg.integrator_given) s.integrator = cfg.integrator;
  if (!s.in_region(s.x0)) throw ConfigError("initial: state lies outside the region " + s.base_frame().chart.region_text);
  return s;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  if (!cfg.scenario.empty()) j["scenario"] = cfg.scenario;
  else j["custom"] = cfg.custom_yaml;
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : cfg.params.num) p[k] = v;
  for (const auto& [k, v] : cfg.params.str) p[k] = v;
  j["parameters"] = p;
  j["initial"] = cfg.initial;
  if (cfg.integrator_given) {
    const auto& ic = cfg.integrator;
    j["integrator"] = {{"method", method_name(ic.method)}, {"dt", ic.dt},       {"rtol", ic.rtol},
                       {"atol", ic.atol},                  {"dt_min", ic.dt_min}, {"dt_max", ic.dt_max},
                       {"T", ic.T},                        {"sample_stride", ic.sample_stride}};
  }
  j["output"] = {{"dir", cfg.out_dir}, {"format", cfg.format}, {"plot", cfg.plot}};
  j["seed"] = cfg.seed;
  j["ensemble"] = {{"count", cfg.ensemble}, {"spread", cfg.spread}};
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
  if (j.contains("custom")) cfg.custom_yaml = j["custom"].get<std::string>();
  for (const auto& [k, v] : j.at("parameters").items()) {
    if (v.is_number()) cfg.params.num[k] = v.get<double>();
    else cfg.params.str[k] = v.get<std::string>();
  }
  cfg.initial = j.at("initial").get<std::vector<double>>();
  if (j.contains("integrator")) {
    const auto& i = j["integrator"];
    cfg.integrator_given = true;
    cfg.integrator.method = method_from_name(i.at("method").get<std::string>());
    cfg.integrator.dt = i.at("dt").get<double>();
    cfg.integrator.rtol = i.at("rtol").get<double>();
    cfg.integrator.atol = i.at("atol").get<double>();
    cfg.integrator.dt_min = i.at("dt_min").get<double>();
    cfg.integrator.dt_max = i.at("dt_max").get<double>();
    cfg.integrator.T = i.at("T").get<double>();
    cfg.integrator.sample_stride = i.at("sample_stride").get<int>();
  }
  cfg.out_dir = j.at("output").at("dir").get<std::string>();
  cfg.format = j.at("output").at("format").get<std::string>();
  cfg.plot = j.at("output").at("plot").get<std::vector<std::string>>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.ensemble = j.at("ensemble").at("count").get<int>();
  cfg.spread = j.at("ensemble").at("spread").get<double>();
  return cfg;
}

std::string config_to_yaml(const RunConfig& cfg) {
  YAML::Emitter em;
  em.SetDoublePrecision(17);
  em << YAML::BeginMap;
  if (!cfg.scenario.empty()) em << YAML::Key << "scenario" << YAML::Value << cfg.scenario;
  else em << YAML::Key << "custom" << YAML::Value << YAML::Load(cfg.custom_yaml);
  if (!cfg.params.num.empty() || !cfg.params.str.empty()) {
    em << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : cfg.params.num) em << YAML::Key << k << YAML::Value << v;
    for (const auto& [k, v] : cfg.params.str) em << YAML::Key << k << YAML::Value << v;
    em << YAML::EndMap;
  }
  if (!cfg.initial.empty()) {
    em << YAML::Key << "initial" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : cfg.initial) em << v;
    em << YAML::EndSeq;
  }
  const auto& ic = cfg.integrator;
  em << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
  em << YAML::Key << "method" << YAML::Value << method_name(ic.method);
  em << YAML::Key << "T" << YAML::Value << ic.T;
  em << YAML::Key << "dt" << YAML::Value << ic.dt;
  em << YAML::Key << "rtol" << YAML::Value << ic.rtol;
  em << YAML::Key << "atol" << YAML::Value << ic.atol;
  em << YAML::Key << "dt_min" << YAML::Value << ic.dt_min;
  em << YAML::Key << "dt_max" << YAML::Value << ic.dt_max;
  em << YAML::Key << "sample_stride" << YAML::Value << ic.sample_stride;
  em << YAML::EndMap;
  em << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  em << YAML::Key << "dir" << YAML::Value << cfg.out_dir;
  em << YAML::Key << "format" << YAML::Value << cfg.format;
  em << YAML::Key << "plot" << YAML::Value << YAML::Flow << cfg.plot;
  em << YAML::EndMap;
  em << YAML::Key << "seed" << YAML::Value << cfg.seed;
  em << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap;
  em << YAML::Key << "count" << YAML::Value << cfg.ensemble;
  em << YAML::Key << "spread" << YAML::Value << cfg.spread;
  em << YAML::EndMap;
  em << YAML::EndMap;
  return std::string(em.c_str()) + "\n";
}

}  // namespace esym
