#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include "paro/core.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace paro;

namespace {

AroInstance tiny_instance() {
  StagePartition stages;
  stages.unc_of_stage = {{2}, {0, 1}};
  stages.dec_of_stage = {{0}, {1, 2}};
  return AroInstance{MatrixXd::Identity(3, 3), VectorXd::Ones(3),
                     MatrixXd::Identity(3, 3), VectorXd::Zero(3), stages,
                     UncertaintySet::budgeted(3, 2.0)};
}

}  // namespace

TEST_CASE("revealed prefix preserves order of appearance") {
  StagePartition stages;
  stages.unc_of_stage = {{2}, {0, 1}, {}};
  stages.dec_of_stage = {{0}, {1}, {2}};
  CHECK(revealed_prefix(stages, 0).empty());
  CHECK(revealed_prefix(stages, 1) == std::vector<int>{2});
  CHECK(revealed_prefix(stages, 2) == std::vector<int>{2, 0, 1});
  CHECK(revealed_prefix(stages, 3) == std::vector<int>{2, 0, 1});
  CHECK_THROWS_AS(revealed_prefix(stages, 4), InputError);
  CHECK_THROWS_AS(revealed_prefix(stages, -1), InputError);
}

TEST_CASE("stage lookups") {
  StagePartition stages;
  stages.unc_of_stage = {{1}, {0}};
  stages.dec_of_stage = {{2, 0}, {1}};
  CHECK(stage_of_each_uncertainty(stages, 2) == std::vector<int>{1, 0});
  CHECK(stage_of_each_decision(stages, 3) == std::vector<int>{0, 1, 0});
  CHECK_THROWS_AS(stage_of_each_decision(stages, 2), InputError);
}

TEST_CASE("a well-formed instance validates cleanly") {
  CHECK(validate_instance(tiny_instance()).empty());
  CHECK_NOTHROW(require_valid(tiny_instance()));
}

TEST_CASE("stage-one uncertainty may be empty but stages cannot be fully empty") {
  auto inst = tiny_instance();
  inst.stages.unc_of_stage = {{}, {0, 1, 2}};
  inst.stages.dec_of_stage = {{0}, {1, 2}};
  CHECK(validate_instance(inst).empty());

  inst.stages.unc_of_stage = {{}, {0, 1, 2}};
  inst.stages.dec_of_stage = {{}, {0, 1, 2}};
  auto const problems = validate_instance(inst);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("neither") != std::string::npos);
}

TEST_CASE("validation pinpoints bad data") {
  SUBCASE("negative D entry") {
    auto inst = tiny_instance();
    inst.D(1, 2) = -0.25;
    auto const problems = validate_instance(inst);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0] == "D(1,2) is negative");
  }
  SUBCASE("negative offset") {
    auto inst = tiny_instance();
    inst.d(0) = -1.0;
    auto const problems = validate_instance(inst);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0] == "d(0) is negative");
  }
  SUBCASE("duplicated decision") {
    auto inst = tiny_instance();
    inst.stages.dec_of_stage = {{0, 1}, {1, 2}};
    auto const problems = validate_instance(inst);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("decision 1") != std::string::npos);
  }
  SUBCASE("missing uncertainty coordinate") {
    auto inst = tiny_instance();
    inst.stages.unc_of_stage = {{2}, {0}};
    auto const problems = validate_instance(inst);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("coordinate 1") != std::string::npos);
  }
  SUBCASE("set dimension mismatch") {
    auto inst = tiny_instance();
    inst.uset = UncertaintySet::hypersphere(4);
    auto const problems = validate_instance(inst);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("dimension 4") != std::string::npos);
    CHECK_THROWS_AS(require_valid(inst), InputError);
  }
  SUBCASE("shape mismatches") {
    auto inst = tiny_instance();
    inst.c = VectorXd::Ones(2);
    CHECK_FALSE(validate_instance(inst).empty());
    inst = tiny_instance();
    inst.d = VectorXd::Zero(4);
    CHECK_FALSE(validate_instance(inst).empty());
  }
  SUBCASE("non-finite entries") {
    auto inst = tiny_instance();
    inst.A(0, 0) = std::numeric_limits<double>::infinity();
    auto const problems = validate_instance(inst);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("A has non-finite") != std::string::npos);
  }
}
