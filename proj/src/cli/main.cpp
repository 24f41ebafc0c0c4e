#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "paro/checks.hpp"

namespace {

// Exit codes: 0 success, 1 unexpected error, 2 bad input, 3 solver failure,
// 4 verification failure.
int dispatch(int argc, char** argv) {
  CLI::App app{"Piecewise affine policies for multi-stage robust covering problems"};
  app.require_subcommand(1);

  paro::cli::GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Generate an instance file");
  cmd_gen->add_option("--family", gen.family, "gaussian, demand or affine-gap");
  cmd_gen->add_option("--m", gen.m, "dimension (gaussian, affine-gap)");
  cmd_gen->add_option("--alpha", gen.alpha, "cost dispersion (gaussian)");
  cmd_gen->add_option("--uset", gen.uset, "hypersphere or budgeted");
  cmd_gen->add_option("--seed", gen.seed, "random seed");
  cmd_gen->add_option("--locations", gen.locations, "grid locations (demand)");
  cmd_gen->add_option("--planning", gen.planning, "planning periods (demand)");
  cmd_gen->add_option("--exec", gen.exec, "execution periods per planning period (demand)");
  cmd_gen->add_option("--cost-demand", gen.cost_demand, "unit cost of lost demand (demand)");
  cmd_gen->add_option("--cost-resource", gen.cost_resource, "unit resource cost (demand)");
  cmd_gen->add_option("--budget", gen.budget,
                      "override the uncertainty set with a budgeted set of this budget");
  cmd_gen->add_flag("--spec-only", gen.spec_only,
                    "store only the generator parameters, not the matrices");
  cmd_gen->add_option("--out", gen.out, "output instance file")->required();

  paro::cli::SolveOptions solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Solve one instance with one policy");
  cmd_solve->add_option("--in", solve.input, "instance file")->required();
  cmd_solve->add_option("--policy", solve.policy, "box, pap, spap or aff");
  cmd_solve->add_option("--time-limit", solve.time_limit_sec, "seconds per solve");

  paro::cli::VerifyOptions verify;
  CLI::App* cmd_verify = app.add_subcommand("verify", "Run the certification battery");
  cmd_verify->add_option("--suite", verify.suite, "domination, sandwich or all");
  cmd_verify->add_option("--out", verify.out, "write the reports as CSV");

  paro::cli::ReportOptions report;
  CLI::App* cmd_report = app.add_subcommand("report", "Summarize a results CSV");
  cmd_report->add_option("--in", report.input, "results file")->required();
  cmd_report->add_option("--out", report.out, "write the summary as CSV");

  std::string preset;
  std::string config_path;
  paro::cli::ExperimentConfig run_cfg;
  std::vector<int> run_ms;
  std::vector<double> run_alphas;
  std::vector<std::string> run_kinds;
  std::vector<std::string> run_policies;
  std::vector<double> run_cds;
  CLI::App* cmd_run = app.add_subcommand("run", "Run an experiment grid");
  CLI::Option* opt_preset = cmd_run->add_option("--preset", preset, "gauss-desk or demand-desk");
  cmd_run->add_option("--config", config_path, "experiment config JSON")->excludes(opt_preset);
  CLI::Option* o_family = cmd_run->add_option("--family", run_cfg.family, "gaussian or demand");
  CLI::Option* o_m = cmd_run->add_option("--m", run_ms, "dimension grid");
  CLI::Option* o_alpha = cmd_run->add_option("--alpha", run_alphas, "alpha grid");
  CLI::Option* o_uset = cmd_run->add_option("--uset", run_kinds, "uncertainty set kinds");
  CLI::Option* o_policy = cmd_run->add_option("--policy", run_policies, "policies to run");
  CLI::Option* o_seeds = cmd_run->add_option("--seeds", run_cfg.seeds, "seeds per cell");
  CLI::Option* o_tl =
      cmd_run->add_option("--time-limit", run_cfg.time_limit_sec, "seconds per solve");
  CLI::Option* o_cd =
      cmd_run->add_option("--cost-demand", run_cds, "lost-demand cost grid (demand)");
  CLI::Option* o_out = cmd_run->add_option("--out", run_cfg.out, "results CSV path");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmd_gen->parsed()) return paro::cli::run_gen(gen, std::cout);
  if (cmd_solve->parsed()) return paro::cli::run_solve(solve, std::cout);
  if (cmd_verify->parsed()) return paro::cli::run_verify(verify, std::cout);
  if (cmd_report->parsed()) return paro::cli::run_report(report, std::cout);

  // run: start from preset or config file, then let explicit flags override.
  paro::cli::ExperimentConfig cfg;
  if (!preset.empty()) {
    cfg = paro::cli::preset_config(preset);
  } else if (!config_path.empty()) {
    cfg = paro::cli::load_config(config_path);
  }
  if (o_family->count() > 0) cfg.family = run_cfg.family;
  if (o_m->count() > 0) cfg.ms = run_ms;
  if (o_alpha->count() > 0) cfg.alphas = run_alphas;
  if (o_uset->count() > 0) cfg.kinds = run_kinds;
  if (o_policy->count() > 0) cfg.policies = run_policies;
  if (o_seeds->count() > 0) cfg.seeds = run_cfg.seeds;
  if (o_tl->count() > 0) cfg.time_limit_sec = run_cfg.time_limit_sec;
  if (o_cd->count() > 0) cfg.cost_demand = run_cds;
  if (o_out->count() > 0) cfg.out = run_cfg.out;
  return paro::cli::run_experiment(cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (paro::InputError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (paro::SolverError const& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (std::exception const& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
