#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "paro/core.hpp"
#include "paro/domsets.hpp"
#include "paro/robust_lp.hpp"

namespace paro {

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus status);

// Outcome of one certification check. Failures carry the offending numbers in
// `values` and a counterexample description in `detail`; skips explain why.
struct VerificationReport {
  std::string claim;
  CheckStatus status = CheckStatus::Skipped;
  std::vector<std::pair<std::string, double>> values;
  double tolerance = 0.0;
  std::string detail;

  bool passed() const { return status == CheckStatus::Pass; }
};

// All 0/1 vectors of dimension m with at most `budget` ones: the extreme
// points of the budgeted set for an integer budget. Ordered by popcount, then
// lexicographically by coordinate index.
std::vector<Eigen::VectorXd> binary_scenarios(int m, int budget);

// Largest perfect-information cost over the given realizations: each one is
// solved as its own LP min {c.x : Ax >= D xi + d}. A valid lower bound on the
// adjustable value because perfect information relaxes nonanticipativity.
// Every realization must lie in the instance's uncertainty set; an infeasible
// scenario LP throws.
double scenario_lower_bound(AroInstance const& inst,
                            std::vector<Eigen::VectorXd> const& realizations);

// Exact adjustable value for two-stage instances over an integer-budget set,
// by enumerating the 0/1 extreme points as scenarios in one epigraph LP.
// First-stage columns are shared across scenarios with the same revealed
// first-stage prefix. Throws if the instance is outside this scope or the
// enumeration would exceed 10^4 scenarios.
double exact_two_stage_budgeted(AroInstance const& inst,
                                SolverConfig const& config = {});

// Certifies the two-sided approximation guarantee for a computed piecewise
// policy objective: exact_value <= pap_objective <= beta * exact_value when
// the exact oracle applies, otherwise only pap_objective >= sampled lower
// bound (upper half reported as skipped inside `detail`).
VerificationReport sandwich_check(AroInstance const& inst, DominatingSet const& dom,
                                  double pap_objective, int num_samples = 200,
                                  std::uint64_t seed = 1);

// Certifies that the affine policy is at least as strong as the piecewise
// policies on integer-budget sets: Z_AFF <= Z_PAP + tol and
// Z_AFF <= Z_SPAP + tol. Skipped outside that scope or when the cutting
// plane does not converge.
VerificationReport dominance_check(AroInstance const& inst, AffineCutConfig const& cfg = {});

// CSV with one row per report: claim,status,tolerance,values,detail where
// `values` joins name=value pairs with ';'.
void write_reports_csv(std::ostream& os, std::vector<VerificationReport> const& reports);

// Aligned human-readable listing, one [PASS]/[FAIL]/[SKIP] line per report.
void write_reports_log(std::ostream& os, std::vector<VerificationReport> const& reports);

}  // namespace paro
