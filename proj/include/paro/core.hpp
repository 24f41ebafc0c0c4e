#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "paro/usets.hpp"

namespace paro {

// Assignment of uncertainty coordinates and decision variables to stages.
// Stage t decisions may depend on every uncertainty coordinate revealed in
// stages 1..t. Indices are 0-based throughout the library; the on-disk format
// is 1-based and converted at the I/O layer.
struct StagePartition {
  std::vector<std::vector<int>> unc_of_stage;
  std::vector<std::vector<int>> dec_of_stage;

  int num_stages() const { return static_cast<int>(unc_of_stage.size()); }
};

// Uncertainty coordinates revealed after the first `stages` stages, in order
// of appearance. `stages` may range from 0 (nothing revealed) to T.
std::vector<int> revealed_prefix(StagePartition const& partition, int stages);

// stage index (0-based) of each decision / uncertainty coordinate. The
// partition must be valid for the given counts.
std::vector<int> stage_of_each_decision(StagePartition const& partition, int num_decisions);
std::vector<int> stage_of_each_uncertainty(StagePartition const& partition, int num_coords);

std::vector<std::string> validate_stage_partition(StagePartition const& partition,
                                                  int num_coords, int num_decisions);

// Multi-stage robust covering instance:
//
//   min_x(.)  max_{xi in U}  c . x(xi)
//   s.t.      A x(xi) >= D xi + d   for all xi in U
//
// with D >= 0 and d >= 0 entrywise, and x(.) restricted to the
// nonanticipativity pattern induced by `stages`.
struct AroInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd c;
  Eigen::MatrixXd D;
  Eigen::VectorXd d;
  StagePartition stages;
  UncertaintySet uset;

  int num_rows() const { return static_cast<int>(A.rows()); }
  int num_decisions() const { return static_cast<int>(A.cols()); }
  int num_coords() const { return static_cast<int>(D.cols()); }
};

// Returns human-readable problems; an empty list means the instance is valid.
std::vector<std::string> validate_instance(AroInstance const& instance);

// Throws InputError with the first problem if the instance is invalid.
void require_valid(AroInstance const& instance);

}  // namespace paro
