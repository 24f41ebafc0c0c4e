#include "paro/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "paro/checks.hpp"
#include "paro/lp.hpp"

namespace paro {

namespace {

constexpr double kScenarioCap = 1e4;

std::string format_vector(Eigen::VectorXd const& v) {
  std::ostringstream os;
  char buf[32];
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    os << (i ? "," : "") << buf;
  }
  os << "]";
  return os.str();
}

// Number of 0/1 scenarios with at most `budget` ones, saturating at the cap.
double count_scenarios(int m, int budget) {
  double total = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= budget; ++j) {
    total += binom;
    if (total > 1e7) return total;
    binom = binom * (m - j) / (j + 1);
  }
  return total;
}

struct ScenarioMax {
  double value = 0.0;
  int argmax = -1;
};

ScenarioMax scenario_max(AroInstance const& inst,
                         std::vector<Eigen::VectorXd> const& realizations) {
  require(!realizations.empty(), "scenario lower bound needs at least one realization");
  ScenarioMax out;
  for (size_t s = 0; s < realizations.size(); ++s) {
    Eigen::VectorXd const& xi = realizations[s];
    require(xi.size() == inst.num_coords(), "realization dimension mismatch");
    require(inst.uset.contains(xi), "realization outside the uncertainty set");
    LinearProgram lp(inst.num_decisions());
    lp.objective = inst.c;
    Eigen::VectorXd const rhs = inst.D * xi + inst.d;
    for (int r = 0; r < inst.num_rows(); ++r) {
      lp.add_row(inst.A.row(r).transpose(), Relation::Ge, rhs[r]);
    }
    LpSolution const sol = solve_lp(lp);
    require_solver(sol.status == LpStatus::Optimal,
                   "scenario LP " + std::to_string(s) + ": " + to_string(sol.status));
    if (out.argmax < 0 || sol.objective > out.value) {
      out.value = sol.objective;
      out.argmax = static_cast<int>(s);
    }
  }
  return out;
}

struct ExactScope {
  bool ok = false;
  int budget = 0;
  std::string reason;
};

ExactScope exact_scope(AroInstance const& inst) {
  ExactScope scope;
  if (inst.stages.unc_of_stage.size() != 2) {
    scope.reason = "needs a two-stage instance";
    return scope;
  }
  if (inst.uset.kind() != SetKind::Budgeted) {
    scope.reason = "needs a budgeted uncertainty set";
    return scope;
  }
  double const raw = inst.uset.budget();
  int const k = static_cast<int>(std::lround(raw));
  if (std::abs(raw - k) > 1e-9) {
    scope.reason = "needs an integer budget";
    return scope;
  }
  scope.budget = std::min(k, inst.num_coords());
  if (count_scenarios(inst.num_coords(), scope.budget) > kScenarioCap) {
    scope.reason = "scenario enumeration cap exceeded";
    return scope;
  }
  scope.ok = true;
  return scope;
}

struct ExactResult {
  double value = 0.0;
  Eigen::VectorXd worst;
};

// One epigraph LP over all 0/1 scenarios. First-stage columns are shared by
// scenarios whose revealed first-stage coordinates agree, second-stage
// columns are fresh per scenario, so the solution is exactly a
// nonanticipative policy on the enumerated tree.
ExactResult exact_two_stage_core(AroInstance const& inst, SolverConfig const& config) {
  ExactScope const scope = exact_scope(inst);
  require(scope.ok, "exact adjustable oracle: " + scope.reason);

  int const m = inst.num_coords();
  int const n = inst.num_decisions();
  int const l = inst.num_rows();
  std::vector<Eigen::VectorXd> const scenarios = binary_scenarios(m, scope.budget);
  int const S = static_cast<int>(scenarios.size());

  std::vector<int> const dec_stage = stage_of_each_decision(inst.stages, n);
  std::vector<int> idx_in_stage(static_cast<size_t>(n), -1);
  for (size_t t = 0; t < inst.stages.dec_of_stage.size(); ++t) {
    int next = 0;
    for (int j : inst.stages.dec_of_stage[t]) idx_in_stage[static_cast<size_t>(j)] = next++;
  }
  int const n0 = static_cast<int>(inst.stages.dec_of_stage[0].size());
  int const n1 = n - n0;

  std::vector<int> const& first_coords = inst.stages.unc_of_stage[0];
  std::map<std::vector<int>, int> group_of_prefix;
  std::vector<int> group_of(static_cast<size_t>(S), 0);
  for (int s = 0; s < S; ++s) {
    std::vector<int> key;
    key.reserve(first_coords.size());
    for (int k : first_coords) key.push_back(scenarios[static_cast<size_t>(s)][k] > 0.5 ? 1 : 0);
    auto const [it, inserted] =
        group_of_prefix.try_emplace(std::move(key), static_cast<int>(group_of_prefix.size()));
    (void)inserted;
    group_of[static_cast<size_t>(s)] = it->second;
  }
  int const G = static_cast<int>(group_of_prefix.size());

  int const z_col = 0;
  auto col_of = [&](int s, int j) {
    if (dec_stage[static_cast<size_t>(j)] == 0) {
      return 1 + group_of[static_cast<size_t>(s)] * n0 + idx_in_stage[static_cast<size_t>(j)];
    }
    return 1 + G * n0 + s * n1 + idx_in_stage[static_cast<size_t>(j)];
  };

  int const cols = 1 + G * n0 + S * n1;
  LinearProgram lp(cols);
  lp.objective = Eigen::VectorXd::Zero(cols);
  lp.objective[z_col] = 1.0;
  for (int s = 0; s < S; ++s) {
    Eigen::VectorXd epi = Eigen::VectorXd::Zero(cols);
    epi[z_col] = 1.0;
    for (int j = 0; j < n; ++j) epi[col_of(s, j)] -= inst.c[j];
    lp.add_row(std::move(epi), Relation::Ge, 0.0);

    Eigen::VectorXd const rhs = inst.D * scenarios[static_cast<size_t>(s)] + inst.d;
    for (int r = 0; r < l; ++r) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(cols);
      for (int j = 0; j < n; ++j) row[col_of(s, j)] += inst.A(r, j);
      lp.add_row(std::move(row), Relation::Ge, rhs[r]);
    }
  }

  LpSolution const sol = solve_lp(lp, config);
  require_solver(sol.status == LpStatus::Optimal,
                 "exact adjustable oracle: " + to_string(sol.status));

  ExactResult out;
  out.value = sol.objective;
  int worst = 0;
  double worst_cost = -kInf;
  for (int s = 0; s < S; ++s) {
    double cost = 0.0;
    for (int j = 0; j < n; ++j) cost += inst.c[j] * sol.x[col_of(s, j)];
    if (cost > worst_cost) {
      worst_cost = cost;
      worst = s;
    }
  }
  out.worst = scenarios[static_cast<size_t>(worst)];
  return out;
}

std::string csv_escape(std::string const& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

std::vector<Eigen::VectorXd> binary_scenarios(int m, int budget) {
  require(m >= 1, "scenario enumeration needs a positive dimension");
  require(budget >= 0, "scenario enumeration needs a non-negative budget");
  budget = std::min(budget, m);
  require(count_scenarios(m, budget) <= 1e6, "scenario enumeration too large");

  std::vector<Eigen::VectorXd> out;
  out.push_back(Eigen::VectorXd::Zero(m));
  std::vector<int> picks;
  for (int j = 1; j <= budget; ++j) {
    picks.assign(static_cast<size_t>(j), 0);
    for (int i = 0; i < j; ++i) picks[static_cast<size_t>(i)] = i;
    while (true) {
      Eigen::VectorXd xi = Eigen::VectorXd::Zero(m);
      for (int i : picks) xi[i] = 1.0;
      out.push_back(std::move(xi));
      // Advance to the next combination in lexicographic order.
      int pos = j - 1;
      while (pos >= 0 && picks[static_cast<size_t>(pos)] == m - j + pos) --pos;
      if (pos < 0) break;
      ++picks[static_cast<size_t>(pos)];
      for (int i = pos + 1; i < j; ++i) {
        picks[static_cast<size_t>(i)] = picks[static_cast<size_t>(i - 1)] + 1;
      }
    }
  }
  return out;
}

double scenario_lower_bound(AroInstance const& inst,
                            std::vector<Eigen::VectorXd> const& realizations) {
  return scenario_max(inst, realizations).value;
}

double exact_two_stage_budgeted(AroInstance const& inst, SolverConfig const& config) {
  return exact_two_stage_core(inst, config).value;
}

VerificationReport sandwich_check(AroInstance const& inst, DominatingSet const& dom,
                                  double pap_objective, int num_samples, std::uint64_t seed) {
  require(dom.dim() == inst.num_coords(), "dominating set dimension mismatch");
  VerificationReport rep;
  rep.claim = "sandwich";
  rep.tolerance = 1e-6;

  ExactScope const scope = exact_scope(inst);
  if (scope.ok) {
    ExactResult const exact = exact_two_stage_core(inst, {});
    rep.values = {{"exact", exact.value},
                  {"pap", pap_objective},
                  {"beta", dom.beta},
                  {"upper", dom.beta * exact.value}};
    bool const lower_ok = exact.value <= pap_objective + rep.tolerance;
    bool const upper_ok = pap_objective <= dom.beta * exact.value + rep.tolerance;
    rep.status = (lower_ok && upper_ok) ? CheckStatus::Pass : CheckStatus::Fail;
    if (!lower_ok) {
      rep.detail = "piecewise objective fell below the exact adjustable value; worst scenario " +
                   format_vector(exact.worst);
    } else if (!upper_ok) {
      rep.detail =
          "piecewise objective exceeds the certified multiple of the exact value; "
          "worst scenario " +
          format_vector(exact.worst);
    }
    return rep;
  }

  require(num_samples > 0, "sampling oracle needs a positive sample count");
  std::vector<Eigen::VectorXd> const samples = inst.uset.sample(num_samples, seed);
  ScenarioMax const lb = scenario_max(inst, samples);
  rep.values = {{"lower_bound", lb.value}, {"pap", pap_objective}, {"beta", dom.beta}};
  bool const lower_ok = pap_objective >= lb.value - rep.tolerance;
  rep.status = lower_ok ? CheckStatus::Pass : CheckStatus::Fail;
  rep.detail = "upper half skipped: no exact adjustable oracle for this instance (" +
               scope.reason + ")";
  if (!lower_ok) {
    rep.detail += "; counterexample realization " +
                  format_vector(samples[static_cast<size_t>(lb.argmax)]);
  }
  return rep;
}

VerificationReport dominance_check(AroInstance const& inst, AffineCutConfig const& cfg) {
  VerificationReport rep;
  rep.claim = "affine-dominance";
  rep.tolerance = 1e-5;

  if (inst.uset.kind() != SetKind::Budgeted) {
    rep.detail = "scope: integer-budget uncertainty sets only";
    return rep;
  }
  double const raw = inst.uset.budget();
  if (std::abs(raw - std::lround(raw)) > 1e-9) {
    rep.detail = "scope: integer-budget uncertainty sets only";
    return rep;
  }

  DominatingSet const dom = build_closed_form(inst.uset);
  auto const [plain_lp, plain_map] = build_pap_master(inst, dom, {});
  (void)plain_map;
  LpSolution const pap = solve_lp(plain_lp, cfg.lp);
  require_solver(pap.status == LpStatus::Optimal,
                 "piecewise master: " + to_string(pap.status));

  PapMasterOptions rescale_opts;
  rescale_opts.enable_rescaling = true;
  auto const [scaled_lp, scaled_map] = build_pap_master(inst, dom, rescale_opts);
  (void)scaled_map;
  LpSolution const spap = solve_lp(scaled_lp, cfg.lp);
  require_solver(spap.status == LpStatus::Optimal,
                 "rescaled piecewise master: " + to_string(spap.status));

  AffineSolveResult const aff = solve_affine_cutting_plane(inst, cfg);
  if (!aff.converged) {
    rep.detail = "cutting plane hit the round cap before converging";
    return rep;
  }

  rep.values = {{"aff", aff.objective}, {"pap", pap.objective}, {"spap", spap.objective}};
  bool const vs_pap = aff.objective <= pap.objective + rep.tolerance;
  bool const vs_spap = aff.objective <= spap.objective + rep.tolerance;
  rep.status = (vs_pap && vs_spap) ? CheckStatus::Pass : CheckStatus::Fail;
  if (!vs_pap) rep.detail = "affine objective exceeds the piecewise objective";
  if (!vs_spap) {
    if (!rep.detail.empty()) rep.detail += "; ";
    rep.detail += "affine objective exceeds the rescaled piecewise objective";
  }
  return rep;
}

void write_reports_csv(std::ostream& os, std::vector<VerificationReport> const& reports) {
  os << "claim,status,tolerance,values,detail\n";
  char buf[32];
  for (auto const& rep : reports) {
    std::string values;
    for (auto const& [name, value] : rep.values) {
      std::snprintf(buf, sizeof(buf), "%.17g", value);
      if (!values.empty()) values += ';';
      values += name;
      values += '=';
      values += buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", rep.tolerance);
    os << csv_escape(rep.claim) << ',' << to_string(rep.status) << ',' << buf << ','
       << csv_escape(values) << ',' << csv_escape(rep.detail) << "\n";
  }
}

void write_reports_log(std::ostream& os, std::vector<VerificationReport> const& reports) {
  char buf[64];
  for (auto const& rep : reports) {
    char const* tag = rep.status == CheckStatus::Pass
                          ? "[PASS]"
                          : (rep.status == CheckStatus::Fail ? "[FAIL]" : "[SKIP]");
    os << tag << ' ' << rep.claim;
    if (!rep.values.empty()) {
      os << ':';
      for (auto const& [name, value] : rep.values) {
        std::snprintf(buf, sizeof(buf), " %s=%.9g", name.c_str(), value);
        os << buf;
      }
    }
    std::snprintf(buf, sizeof(buf), " (tol %.1e)", rep.tolerance);
    os << buf << "\n";
    if (!rep.detail.empty()) os << "       " << rep.detail << "\n";
  }
}

}  // namespace paro
