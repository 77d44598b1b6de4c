#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <random>
#include <sstream>

#include "esym/cli.hpp"

namespace fs = std::filesystem;

namespace esym {

void init_logging() {
  auto logger = spdlog::stderr_logger_mt("esym");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("ESYM_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

int cmd_list(bool json, std::ostream& out) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& name : scenario_names()) {
    const ScenarioSpec s = make_scenario(name);
    const EFrame& f = s.base_frame();
    arr.push_back({{"name", s.name},
                   {"state_size", s.state_size()},
                   {"base_dim", f.n()},
                   {"rank", f.p},
                   {"family", family_name(f.family)},
                   {"state", s.state_names},
                   {"provenance", s.provenance}});
  }
  if (json) {
    out << arr.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& e : arr)
    out << std::left << std::setw(24) << e["name"].get<std::string>() << " dim=" << e["state_size"].get<int>()
        << " base=" << e["base_dim"].get<int>() << " rank=" << e["rank"].get<int>() << " "
        << e["family"].get<std::string>() << "  " << e["provenance"].get<std::string>() << "\n";
  return kExitOk;
}

namespace {

struct PlotPair {
  std::string a, b;
};

std::vector<PlotPair> parse_pairs(const std::vector<std::string>& specs) {
  std::vector<PlotPair> out;
  for (const auto& s : specs) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto c = item.find(':');
      if (c == std::string::npos || c == 0 || c + 1 == item.size())
        throw ConfigError("output.plot: pair '" + item + "' must look like a:b");
      out.push_back({item.substr(0, c), item.substr(c + 1)});
    }
  }
  return out;
}

// column accessor over samples: t, state names, monitors
std::function<double(std::size_t)> column(const Trajectory& tr, const std::string& name) {
  if (name == "t") return [&tr](std::size_t k) { return tr.times[k]; };
  for (std::size_t i = 0; i < tr.state_names.size(); ++i)
    if (tr.state_names[i] == name) return [&tr, i](std::size_t k) { return tr.states[k][i]; };
  for (std::size_t i = 0; i < tr.monitor_names.size(); ++i)
    if (tr.monitor_names[i] == name) return [&tr, i](std::size_t k) { return tr.monitors[k][i]; };
  return {};
}

void check_pairs(const Trajectory& tr, const std::vector<PlotPair>& pairs) {
  for (const auto& p : pairs)
    for (const auto& n : {p.a, p.b})
      if (!column(tr, n)) throw ConfigError("output.plot: unknown variable '" + n + "'");
}

void write_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& xl,
               const std::string& yl, std::ostream& os) {
  const double W = 480, H = 360, pad = 40;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) continue;
    if (first) {
      x0 = x1 = xs[k];
      y0 = y1 = ys[k];
      first = false;
    }
    x0 = std::min(x0, xs[k]);
    x1 = std::max(x1, xs[k]);
    y0 = std::min(y0, ys[k]);
    y1 = std::max(y1, ys[k]);
  }
  if (x1 - x0 < 1e-300) x1 = x0 + 1;
  if (y1 - y0 < 1e-300) y1 = y0 + 1;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad / 2 << "\" width=\"" << W - 1.5 * pad << "\" height=\""
     << H - 1.5 * pad << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) continue;
    const double px = pad + (xs[k] - x0) / (x1 - x0) * (W - 1.5 * pad);
    const double py = H - pad - (ys[k] - y0) / (y1 - y0) * (H - 1.5 * pad);
    os << std::setprecision(6) << px << "," << py << " ";
  }
  os << "\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" font-size=\"12\">" << xl << "</text>\n";
  os << "<text x=\"4\" y=\"" << H / 2 << "\" font-size=\"12\">" << yl << "</text>\n";
  os << "</svg>\n";
}

void open_or_throw(std::ofstream& f, const fs::path& p) {
  f.open(p, std::ios::binary);
  if (!f) throw ConfigError("output.dir: cannot write " + p.string());
}

void write_outputs(const Trajectory& tr, const nlohmann::json& meta, const fs::path& dir,
                   const std::string& suffix, const std::string& format, const std::vector<PlotPair>& pairs,
                   bool svg, const InvariantReport* rep) {
  if (format == "csv" || format == "both") {
    std::ofstream f;
    open_or_throw(f, dir / ("trajectory" + suffix + ".csv"));
    write_csv(tr, f);
  }
  if (format == "json" || format == "both") {
    std::ofstream f;
    open_or_throw(f, dir / ("trajectory" + suffix + ".json"));
    f << trajectory_to_json(tr, meta).dump(1) << "\n";
  }
  if (rep) {
    nlohmann::json r = report_to_json(*rep);
    r["steps_accepted"] = tr.steps_accepted;
    r["steps_rejected"] = tr.steps_rejected;
    r["message"] = tr.message;
    if (meta.contains("scenario")) r["scenario"] = meta["scenario"];
    std::ofstream f;
    open_or_throw(f, dir / ("report" + suffix + ".json"));
    f << r.dump(2) << "\n";
  }
  for (const auto& p : pairs) {
    auto ca = column(tr, p.a), cb = column(tr, p.b);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      xs.push_back(ca(k));
      ys.push_back(cb(k));
    }
    const std::string stem = "plot_" + p.a + "_" + p.b + suffix;
    std::ofstream f;
    open_or_throw(f, dir / (stem + ".dat"));
    f << "# " << p.a << " " << p.b << "\n";
    for (std::size_t k = 0; k < xs.size(); ++k) f << format_g17(xs[k]) << " " << format_g17(ys[k]) << "\n";
    if (svg) {
      std::ofstream g;
      open_or_throw(g, dir / (stem + ".svg"));
      write_svg(xs, ys, p.a, p.b, g);
    }
  }
}

std::vector<double> perturbed(const ScenarioSpec& s, std::uint64_t seed, int member, double spread) {
  if (member == 0 || spread <= 0.0) return s.x0;
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(member));
  std::normal_distribution<double> nd(0.0, spread);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> x = s.x0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      bool on_boundary = false;
      for (int b : s.base_frame().chart.boundary)
        if (static_cast<std::size_t>(b) == i && x[i] == 0.0) on_boundary = true;
      if (!on_boundary) x[i] += nd(rng);
    }
    if (s.in_region(x)) return x;
  }
  throw ConfigError("ensemble.spread: no perturbed initial state inside the region");
}

struct MemberResult {
  Trajectory traj;
  std::vector<double> x0;
  bool failed = false;
  std::string error;
};

}  // namespace

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  ScenarioSpec spec;
  std::vector<PlotPair> pairs;
  fs::path dir;
  try {
    cfg = load_config(opt.config_path);
    if (opt.out_dir) cfg.out_dir = *opt.out_dir;
    if (opt.format) {
      if (*opt.format != "csv" && *opt.format != "json" && *opt.format != "both")
        throw ConfigError("--format must be csv, json or both");
      cfg.format = *opt.format;
    }
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.plot.empty()) cfg.plot = opt.plot;
    spec = build_problem(cfg);
    pairs = parse_pairs(cfg.plot);
    dir = cfg.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("output.dir: cannot create " + dir.string());
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  spdlog::info("running {} with {} member(s)", spec.name, cfg.ensemble);

  std::vector<std::vector<double>> starts;
  try {
    for (int k = 0; k < cfg.ensemble; ++k) starts.push_back(perturbed(spec, cfg.seed, k, cfg.spread));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const OdeSystem sys = spec.system();
  std::vector<std::future<MemberResult>> jobs;
  for (int k = 0; k < cfg.ensemble; ++k)
    jobs.push_back(std::async(std::launch::async, [&sys, &spec, x = starts[static_cast<std::size_t>(k)]]() {
      MemberResult r;
      r.x0 = x;
      try {
        r.traj = integrate(sys, x, spec.integrator);
      } catch (const IntegrationError& e) {
        r.failed = true;
        r.error = std::string(e.what()) + " at t=" + format_g17(e.t);
      } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
      }
      return r;
    }));

  int code = kExitOk;
  const nlohmann::json cfg_json = config_to_json(cfg);
  for (int k = 0; k < cfg.ensemble; ++k) {
    MemberResult r = jobs[static_cast<std::size_t>(k)].get();
    const std::string suffix = cfg.ensemble > 1 ? "_" + std::to_string(k) : "";
    if (r.failed) {
      err << "integration error" << (suffix.empty() ? "" : " (member " + std::to_string(k) + ")") << ": "
          << r.error << "\n";
      code = kExitConfig;
      continue;
    }
    try {
      check_pairs(r.traj, pairs);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    nlohmann::json meta = {{"scenario", spec.name},  {"config", cfg_json},         {"state_size", spec.state_size()},
                           {"seed", cfg.seed},       {"member", k},                {"initial", r.x0},
                           {"method", method_name(spec.integrator.method)}};
    const InvariantReport rep = invariant_report(r.traj);
    try {
      write_outputs(r.traj, meta, dir, suffix, cfg.format, pairs, opt.svg, &rep);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    out << spec.name << suffix << ": " << status_name(r.traj.status) << " t=" << format_g17(rep.final_time)
        << " samples=" << rep.samples;
    if (rep.channels.count("energy")) out << " energy_drift=" << format_g17(rep.channels.at("energy").max_rel);
    out << "\n";
    if (r.traj.status != Status::completed) {
      err << spec.name << suffix << ": " << r.traj.message << "\n";
      if (code == kExitOk) code = kExitIncomplete;
    }
  }
  return code;
}

int cmd_export(const ExportOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.scenario.empty() == opt.input.empty()) {
    err << "export needs exactly one of --scenario or --input\n";
    return kExitConfig;
  }
  try {
    if (!opt.scenario.empty()) {
      const auto names = scenario_names();
      if (std::find(names.begin(), names.end(), opt.scenario) == names.end())
        throw ConfigError("unknown scenario '" + opt.scenario + "'");
      const ScenarioSpec s = make_scenario(opt.scenario);
      RunConfig cfg;
      cfg.scenario = s.name;
      cfg.initial = s.x0;
      cfg.integrator = s.integrator;
      cfg.integrator_given = true;
      cfg.plot = opt.plot;
      const std::string text = config_to_yaml(cfg);
      if (opt.out.empty()) {
        out << text;
      } else {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + opt.out);
        f << text;
      }
      return kExitOk;
    }
    std::ifstream in(opt.input);
    if (!in) throw ConfigError("cannot open " + opt.input);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(opt.input + ": " + e.what());
    }
    const Trajectory tr = trajectory_from_json(j);
    const auto pairs = parse_pairs(opt.plot);
    check_pairs(tr, pairs);
    const fs::path dir = opt.out.empty() ? fs::path(".") : fs::path(opt.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (opt.format != "csv" && opt.format != "json" && opt.format != "both")
      throw ConfigError("--format must be csv, json or both");
    write_outputs(tr, j.value("meta", nlohmann::json::object()), dir, "", opt.format, pairs, true, nullptr);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "export error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace esym
