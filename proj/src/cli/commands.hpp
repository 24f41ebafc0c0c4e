#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace paro::cli {

struct GenOptions {
  std::string family = "gaussian";  // gaussian | demand | affine-gap
  int m = 10;
  double alpha = 0.0;
  std::string uset = "hypersphere";  // hypersphere | budgeted
  std::uint64_t seed = 1;
  int locations = 2;
  int planning = 1;
  int exec = 8;
  double cost_demand = 0.25;
  double cost_resource = 1.0;
  double budget = 0.0;  // > 0 overrides the generated budget (file keeps matrices only)
  bool spec_only = false;
  std::string out;
};
int run_gen(GenOptions const& opt, std::ostream& os);

struct SolveOptions {
  std::string input;
  std::string policy = "pap";  // box | pap | spap | aff
  double time_limit_sec = 300.0;
};
int run_solve(SolveOptions const& opt, std::ostream& os);

struct VerifyOptions {
  std::string suite = "all";  // domination | sandwich | all
  std::string out;            // optional CSV path for the reports
};
int run_verify(VerifyOptions const& opt, std::ostream& os);

struct ReportOptions {
  std::string input;
  std::string out;  // optional summary CSV path (stdout always gets the table)
};
int run_report(ReportOptions const& opt, std::ostream& os);

// Grid experiment over one instance family. Gaussian cells iterate
// m x alpha x uset, demand cells iterate cost_demand x uset; every cell runs
// `seeds` seeds and each requested policy, normalized by the static policy.
struct ExperimentConfig {
  std::string family = "gaussian";  // gaussian | demand
  std::vector<int> ms = {10, 20};
  std::vector<double> alphas = {0.0, 1.0, 5.0};
  std::vector<std::string> kinds = {"hypersphere", "budgeted"};
  std::vector<std::string> policies = {"box", "pap", "spap", "aff"};
  int seeds = 5;
  double time_limit_sec = 300.0;  // per solve
  int num_realizations = 500;     // demand simulation draws per policy
  int num_locations = 2;
  int num_planning = 1;
  int num_exec = 8;
  std::vector<double> cost_demand = {0.25, 0.5};
  double cost_resource = 1.0;
  std::string out = "results.csv";
};

ExperimentConfig preset_config(std::string const& name);  // gauss-desk | demand-desk
ExperimentConfig load_config(std::string const& path);
std::vector<std::string> validate_config(ExperimentConfig const& cfg);
int run_experiment(ExperimentConfig const& cfg, std::ostream& os);

}  // namespace paro::cli
