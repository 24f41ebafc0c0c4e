#include "paro/core.hpp"

#include <cmath>
#include <sstream>

namespace paro {

std::vector<int> revealed_prefix(StagePartition const& partition, int stages) {
  require(stages >= 0 && stages <= partition.num_stages(),
          "revealed_prefix: stage count out of range");
  std::vector<int> prefix;
  for (int t = 0; t < stages; ++t) {
    prefix.insert(prefix.end(), partition.unc_of_stage[t].begin(),
                  partition.unc_of_stage[t].end());
  }
  return prefix;
}

namespace {

std::vector<int> stage_lookup(std::vector<std::vector<int>> const& groups, int count,
                              char const* what) {
  std::vector<int> stage(count, -1);
  for (size_t t = 0; t < groups.size(); ++t) {
    for (int idx : groups[t]) {
      require(idx >= 0 && idx < count, std::string(what) + " index out of range");
      require(stage[idx] < 0, std::string(what) + " assigned to two stages");
      stage[idx] = static_cast<int>(t);
    }
  }
  for (int idx = 0; idx < count; ++idx) {
    require(stage[idx] >= 0, std::string(what) + " not assigned to any stage");
  }
  return stage;
}

}  // namespace

std::vector<int> stage_of_each_decision(StagePartition const& partition, int num_decisions) {
  return stage_lookup(partition.dec_of_stage, num_decisions, "decision");
}

std::vector<int> stage_of_each_uncertainty(StagePartition const& partition, int num_coords) {
  return stage_lookup(partition.unc_of_stage, num_coords, "uncertainty coordinate");
}

std::vector<std::string> validate_stage_partition(StagePartition const& partition,
                                                  int num_coords, int num_decisions) {
  std::vector<std::string> problems;
  auto complain = [&](std::string msg) { problems.push_back(std::move(msg)); };

  int const T = partition.num_stages();
  if (T < 1) complain("partition has no stages");
  if (partition.dec_of_stage.size() != partition.unc_of_stage.size()) {
    complain("uncertainty and decision stage lists have different lengths");
    return problems;
  }

  auto check_cover = [&](std::vector<std::vector<int>> const& groups, int count,
                         std::string const& what) {
    std::vector<int> seen(count, 0);
    for (size_t t = 0; t < groups.size(); ++t) {
      for (int idx : groups[t]) {
        if (idx < 0 || idx >= count) {
          std::ostringstream os;
          os << what << " index " << idx << " out of range [0, " << count << ")";
          complain(os.str());
          continue;
        }
        if (++seen[idx] == 2) {
          std::ostringstream os;
          os << what << " " << idx << " appears in more than one stage";
          complain(os.str());
        }
      }
    }
    for (int idx = 0; idx < count; ++idx) {
      if (seen[idx] == 0) {
        std::ostringstream os;
        os << what << " " << idx << " is not assigned to any stage";
        complain(os.str());
      }
    }
  };
  check_cover(partition.unc_of_stage, num_coords, "uncertainty coordinate");
  check_cover(partition.dec_of_stage, num_decisions, "decision");

  for (int t = 0; t < T; ++t) {
    if (partition.unc_of_stage[t].empty() && partition.dec_of_stage[t].empty()) {
      std::ostringstream os;
      os << "stage " << t << " has neither uncertainty coordinates nor decisions";
      complain(os.str());
    }
  }
  return problems;
}

std::vector<std::string> validate_instance(AroInstance const& instance) {
  std::vector<std::string> problems;
  auto complain = [&](std::string msg) { problems.push_back(std::move(msg)); };

  int const l = instance.num_rows();
  int const n = instance.num_decisions();
  int const m = instance.num_coords();

  if (l < 1) complain("constraint matrix A has no rows");
  if (n < 1) complain("constraint matrix A has no columns");
  if (m < 1) complain("uncertainty matrix D has no columns");
  if (instance.c.size() != n) complain("objective length does not match the column count of A");
  if (instance.D.rows() != l) complain("D and A have different row counts");
  if (instance.d.size() != l) complain("rhs offset length does not match the row count of A");
  if (instance.uset.dim() != m) {
    std::ostringstream os;
    os << "uncertainty set dimension " << instance.uset.dim()
       << " does not match D column count " << m;
    complain(os.str());
  }

  if (!instance.A.allFinite()) complain("A has non-finite entries");
  if (!instance.c.allFinite()) complain("c has non-finite entries");
  if (!instance.D.allFinite()) complain("D has non-finite entries");
  if (!instance.d.allFinite()) complain("d has non-finite entries");

  for (int i = 0; i < instance.D.rows(); ++i) {
    for (int j = 0; j < instance.D.cols(); ++j) {
      if (instance.D(i, j) < 0.0) {
        std::ostringstream os;
        os << "D(" << i << "," << j << ") is negative";
        complain(os.str());
      }
    }
  }
  for (int i = 0; i < instance.d.size(); ++i) {
    if (instance.d[i] < 0.0) {
      std::ostringstream os;
      os << "d(" << i << ") is negative";
      complain(os.str());
    }
  }

  auto const stage_problems = validate_stage_partition(instance.stages, m, n);
  problems.insert(problems.end(), stage_problems.begin(), stage_problems.end());
  return problems;
}

void require_valid(AroInstance const& instance) {
  auto const problems = validate_instance(instance);
  if (!problems.empty()) throw InputError("invalid instance: " + problems.front());
}

}  // namespace paro
