#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cogcap/experiment.hpp"
#include "cogcap/numerics.hpp"

namespace {

using cogcap::ConfigError;
using cogcap::ExperimentConfig;
namespace ex = cogcap::experiment;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string preset;
  std::vector<std::string> settings;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  bool seed_given = false;
  bool n_given = false;
  double inflate_cap = 1.0;
  bool print_config = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_preset) {
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--out", o.out_path, "write CSV here");
  cmd->add_option("--set", o.settings, "override one key, KEY=VALUE (repeatable)");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--n", o.n, "Monte Carlo draws");
  cmd->add_flag("--print-config", o.print_config, "echo the resolved configuration and exit");
  if (with_preset) cmd->add_option("--preset", o.preset, "fig2..fig8 or regions");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig resolve(const CommonOptions& o, const std::string& preset) {
  ExperimentConfig c;
  if (!preset.empty()) {
    for (const auto& s : cogcap::preset_defaults(preset)) cogcap::apply_setting(c, s);
  }
  if (!o.config_path.empty()) cogcap::apply_config_text(c, read_file(o.config_path));
  for (const auto& s : o.settings) cogcap::apply_setting(c, s);
  if (o.seed_given) c.seed = o.seed;
  if (o.n_given) c.n = o.n;
  if (o.inflate_cap != 1.0) c.cap_scale = o.inflate_cap;
  c.validate();
  return c;
}

void emit(const cogcap::Table& table, const std::string& out_path, bool default_stdout) {
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("out", "cannot write '" + out_path + "'");
    table.write_csv(out);
  } else if (default_stdout) {
    table.write_csv(std::cout);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity of a spectrum-sharing link with imperfect cross-link estimates"};
  app.require_subcommand(1);

  CommonOptions eval_o, sweep_o, verify_o, table_o, regions_o;
  auto* eval = app.add_subcommand("eval", "capacity of one operating point");
  add_common(eval, eval_o, true);
  auto* sweep = app.add_subcommand("sweep", "preset or free-form parameter sweep to CSV");
  add_common(sweep, sweep_o, true);
  auto* verify = app.add_subcommand("verify", "Monte Carlo check of power, outage and rate");
  add_common(verify, verify_o, true);
  verify->add_option("--inflate-cap", verify_o.inflate_cap,
                     "multiply the policy cap (negative control)");
  auto* table1 = app.add_subcommand("table1", "no-CSI closed forms against quadrature");
  add_common(table1, table_o, false);
  auto* regions = app.add_subcommand("regions", "eps1/eps2 region map (fig7 preset)");
  add_common(regions, regions_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ex::kOk : ex::kUsageError;
  }

  const std::pair<CLI::App*, CommonOptions*> commands[] = {
      {eval, &eval_o}, {sweep, &sweep_o}, {verify, &verify_o}, {table1, &table_o},
      {regions, &regions_o}};
  for (const auto& [cmd, o] : commands) {
    o->seed_given = cmd->count("--seed") > 0;
    o->n_given = cmd->count("--n") > 0;
  }

  try {
    if (*eval) {
      const ExperimentConfig c = resolve(eval_o, eval_o.preset);
      if (eval_o.print_config) {
        std::cout << c.echo();
        return ex::kOk;
      }
      emit(ex::run_eval(c, std::cout), eval_o.out_path, false);
      return ex::kOk;
    }
    if (*sweep || *regions) {
      CommonOptions& o = *sweep ? sweep_o : regions_o;
      const std::string preset = *sweep ? o.preset : "fig7";
      const ExperimentConfig c = resolve(o, preset);
      if (o.print_config) {
        std::cout << c.echo();
        return ex::kOk;
      }
      emit(ex::run_sweep(preset, c), o.out_path, true);
      return ex::kOk;
    }
    if (*verify) {
      const ExperimentConfig c = resolve(verify_o, verify_o.preset);
      if (verify_o.print_config) {
        std::cout << c.echo();
        return ex::kOk;
      }
      const auto outcome = ex::run_verify(c, std::cout);
      emit(outcome.table, verify_o.out_path, false);
      return outcome.pass ? ex::kOk : ex::kVerifyFailed;
    }
    if (*table1) {
      const auto outcome = ex::run_table1();
      outcome.table.write_csv(std::cout);
      std::cout << "max_abs_discrepancy_npcu: " << cogcap::format_number(outcome.max_discrepancy)
                << '\n';
      emit(outcome.table, table_o.out_path, false);
      return ex::kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ex::kUsageError;
  } catch (const cogcap::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ex::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kUsageError;
  }
  return ex::kUsageError;
}
