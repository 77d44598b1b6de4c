#include <CLI11.hpp>

#include <iostream>

#include "esym/cli.hpp"

int main(int argc, char** argv) {
  esym::init_logging();
  CLI::App app{"esym: Hamiltonian mechanics on E-manifolds"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list built-in scenarios");
  bool list_json = false;
  list->add_flag("--json", list_json, "machine-readable output");

  auto* run = app.add_subcommand("run", "integrate a configured system");
  esym::RunOptions ro;
  std::string out_dir, format, plot;
  std::uint64_t seed = 0;
  bool no_svg = false;
  run->add_option("--config,config", ro.config_path, "YAML config")->required();
  auto* o_out = run->add_option("--out", out_dir, "output directory");
  auto* o_fmt = run->add_option("--format", format, "csv, json or both");
  auto* o_seed = run->add_option("--seed", seed, "ensemble seed");
  run->add_option("--plot", plot, "pairs a:b[,c:d]");
  run->add_flag("--no-svg", no_svg, "skip the svg rendering");

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  std::string scope = "all", mutate;
  bool verify_json = false;
  verify->add_option("--scope,scope", scope, "all, a module name or a scenario name");
  verify->add_option("--mutate", mutate, "inject a defect: flip_momentum_charge");
  verify->add_flag("--json", verify_json, "machine-readable output");

  auto* exp = app.add_subcommand("export", "write a config template or convert a trajectory");
  esym::ExportOptions eo;
  std::string eplot;
  auto* e_scn = exp->add_option("--scenario", eo.scenario, "scenario for a config template");
  exp->add_option("--input", eo.input, "trajectory JSON to convert")->excludes(e_scn);
  exp->add_option("--out", eo.out, "output file (template) or directory (conversion)");
  exp->add_option("--format", eo.format, "csv, json or both");
  exp->add_option("--plot", eplot, "pairs a:b[,c:d]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc != 0) std::cerr << app.help();
    return rc == 0 ? 0 : esym::kExitConfig;
  }

  if (*list) return esym::cmd_list(list_json, std::cout);
  if (*run) {
    if (*o_out) ro.out_dir = out_dir;
    if (*o_fmt) ro.format = format;
    if (*o_seed) ro.seed = seed;
    if (!plot.empty()) ro.plot = {plot};
    ro.svg = !no_svg;
    return esym::cmd_run(ro, std::cout, std::cerr);
  }
  if (*verify) return esym::cmd_verify(scope, mutate, verify_json, std::cout, std::cerr);
  if (*exp) {
    if (!eplot.empty()) eo.plot = {eplot};
    return esym::cmd_export(eo, std::cout, std::cerr);
  }
  return esym::kExitConfig;
}
