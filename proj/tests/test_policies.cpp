#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "paro/checks.hpp"
#include "paro/domsets.hpp"
#include "paro/policies.hpp"
#include "paro/rng.hpp"
#include "paro/usets.hpp"
#include "reference_simplex.hpp"

using Eigen::VectorXd;
using namespace paro;

namespace {

VectorXd vec(std::initializer_list<double> vals) {
  VectorXd v(static_cast<Eigen::Index>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

DominatingSet manual_dom(VectorXd v0, VectorXd rho) {
  DominatingSet dom;
  dom.v0 = std::move(v0);
  dom.rho = std::move(rho);
  dom.beta = 1.0;
  dom.origin = "manual";
  return dom;
}

// Feasibility of: exists mu >= 0, sum mu = 1, sum_i mu_i v_i (rel) target,
// where rel is == (point lies in the hull) or >= (hull member dominates
// target). Solved with the independent reference simplex.
bool hull_feasible(std::vector<VectorXd> const& vertices, VectorXd const& target,
                   Relation rel) {
  int const r = static_cast<int>(vertices.size());
  int const m = static_cast<int>(target.size());
  LinearProgram lp(r);
  lp.lower = VectorXd::Zero(r);
  for (int j = 0; j < m; ++j) {
    VectorXd row(r);
    for (int i = 0; i < r; ++i) row[i] = vertices[i][j];
    lp.add_row(row, rel, target[j]);
  }
  lp.add_row(VectorXd::Ones(r), Relation::Eq, 1.0);
  return testing::reference_solve(lp).status == LpStatus::Optimal;
}

// Vertex solutions obeying the sharing rule: the stage-t block of x_i equals
// x_0's block unless coordinate i is revealed by stages 1..t.
std::vector<VectorXd> random_vertex_solutions(StagePartition const& stages, int m, int n,
                                              Rng& rng) {
  auto const dec_stage = stage_of_each_decision(stages, n);
  auto const unc_stage = stage_of_each_uncertainty(stages, m);
  std::vector<VectorXd> xs(static_cast<size_t>(m) + 1);
  xs[0] = VectorXd::NullaryExpr(n, [&](Eigen::Index) { return rng.uniform(-2.0, 2.0); });
  for (int i = 0; i < m; ++i) {
    xs[i + 1] = xs[0];
    for (int r = 0; r < n; ++r) {
      if (unc_stage[i] <= dec_stage[r]) xs[i + 1][r] = rng.uniform(-2.0, 2.0);
    }
  }
  return xs;
}

}  // namespace

TEST_CASE("dominate: componentwise maximum with the anchor") {
  VectorXd const v0 = vec({0.5, 0.5});
  CHECK(dominate(v0, vec({0.2, 0.8})) == vec({0.5, 0.8}));
  CHECK(dominate(v0, v0) == v0);
  CHECK(dominate(v0, vec({0.6, 0.1})) == vec({0.6, 0.5}));
  CHECK_THROWS_AS(dominate(v0, vec({0.1, 0.2, 0.3})), InputError);
}

TEST_CASE("dominate with scales pulls coordinates toward one") {
  VectorXd const v0 = vec({0.5, 0.5});
  VectorXd const h = dominate(v0, vec({0.2, 0.8}), vec({0.5, 0.0}));
  CHECK(h[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(h[1] == doctest::Approx(0.8).epsilon(1e-15));
  // s = 1 maps everything to the all-ones corner.
  CHECK(dominate(v0, vec({0.2, 0.8}), vec({1.0, 1.0})) == vec({1.0, 1.0}));
  CHECK_THROWS_AS(dominate(v0, v0, vec({0.5})), InputError);
}

TEST_CASE("lambda coefficients from positive excess over the anchor") {
  auto const dom = manual_dom(vec({0.5, 0.5}), vec({1.0, 1.0}));
  CHECK((lambda_coeffs(dom, vec({0.2, 0.8})) - vec({0.0, 0.3})).cwiseAbs().maxCoeff() <=
        1e-15);
  CHECK(lambda_coeffs(dom, vec({0.5, 0.5})) == vec({0.0, 0.0}));
  CHECK(lambda_coeffs(dom, vec({0.1, 0.4})) == vec({0.0, 0.0}));
}

TEST_CASE("lambda at a unit vector of the hypersphere cover") {
  auto const u = UncertaintySet::hypersphere(4);
  auto const dom = build_closed_form(u);
  VectorXd xi = VectorXd::Zero(4);
  xi[0] = 1.0;
  VectorXd const lambda = lambda_coeffs(dom, xi);
  CHECK(lambda[0] == doctest::Approx(0.9142136).epsilon(1e-6));
  CHECK(lambda[1] == 0.0);
  CHECK(lambda[2] == 0.0);
  CHECK(lambda[3] == 0.0);
  CHECK(lambda.sum() <= 1.0 + 1e-9);
}

TEST_CASE("lambda is zero when collapsed vertices carry no excess") {
  // Full-budget cover: anchor is the all-ones corner, spreads are zero.
  auto const dom = build_closed_form(UncertaintySet::budgeted(3, 3.0));
  REQUIRE(dom.rho.maxCoeff() == 0.0);
  CHECK(lambda_coeffs(dom, vec({0.3, 1.0, 0.7})) == VectorXd::Zero(3));
}

TEST_CASE("lambda sums stay below one on sampled members of each set") {
  for (auto const& u : {UncertaintySet::hypersphere(5), UncertaintySet::budgeted(5, 2.0),
                        UncertaintySet::p_norm_ball(5, 3.0), UncertaintySet::ellipsoid(5, 0.2)}) {
    auto const dom = build_closed_form(u);
    for (auto const& xi : u.sample(200, 91)) {
      CHECK(lambda_coeffs(dom, xi).sum() <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("piecewise evaluation interpolates the vertex solutions") {
  auto const dom = manual_dom(vec({0.5, 0.5}), vec({0.25, 0.25}));
  PiecewisePolicy pol{dom, std::nullopt,
                      {vec({1.0, 2.0}), vec({3.0, 2.0}), vec({1.0, -2.0})}};
  // At the anchor: x0. At anchor + rho_1 e_1: exactly x_1 (dyadic data, so
  // the weight is exactly one).
  CHECK(evaluate_pap(pol, vec({0.5, 0.5})) == vec({1.0, 2.0}));
  CHECK(evaluate_pap(pol, vec({0.75, 0.5})) == vec({3.0, 2.0}));
  CHECK(evaluate_pap(pol, vec({0.5, 0.75})) == vec({1.0, -2.0}));
  // lambda = (0, 0.5) -> 0.5 x2 + 0.5 x0.
  CHECK(evaluate_pap(pol, vec({0.25, 0.625})) == vec({1.0, 0.0}));
  CHECK_THROWS_AS(evaluate_pap(pol, vec({0.5})), InputError);
  PiecewisePolicy broken{dom, std::nullopt, {vec({1.0, 2.0}), vec({3.0, 2.0})}};
  CHECK_THROWS_AS(evaluate_pap(broken, vec({0.5, 0.5})), InputError);
}

TEST_CASE("piecewise evaluation never sees unrevealed coordinates") {
  StagePartition stages;
  stages.unc_of_stage = {{2}, {0}, {1}};
  stages.dec_of_stage = {{0, 1}, {2}, {3, 4}};
  int const m = 3, n = 5;
  Rng rng(1234);
  auto const dom = manual_dom(vec({0.2, 0.3, 0.1}), vec({0.7, 0.7, 0.9}));
  PiecewisePolicy pol{dom, std::nullopt, random_vertex_solutions(stages, m, n, rng)};

  auto const dec_stage = stage_of_each_decision(stages, n);
  for (int trial = 0; trial < 200; ++trial) {
    VectorXd xi = VectorXd::NullaryExpr(m, [&](Eigen::Index) { return rng.uniform(); });
    for (int t = 0; t <= stages.num_stages(); ++t) {
      auto const prefix = revealed_prefix(stages, t);
      VectorXd other = VectorXd::NullaryExpr(m, [&](Eigen::Index) { return rng.uniform(); });
      for (int j : prefix) other[j] = xi[j];
      VectorXd const xa = evaluate_pap(pol, xi);
      VectorXd const xb = evaluate_pap(pol, other);
      for (int r = 0; r < n; ++r) {
        if (dec_stage[r] < t) CHECK(xa[r] == xb[r]);
      }
    }
  }
}

TEST_CASE("piecewise cost on hull members never exceeds the worst vertex cost") {
  StagePartition stages;
  stages.unc_of_stage = {{0, 1, 2, 3}};
  stages.dec_of_stage = {{0, 1, 2}};
  Rng rng(777);
  auto const dom = build_closed_form(UncertaintySet::hypersphere(4));
  PiecewisePolicy pol{dom, std::nullopt, random_vertex_solutions(stages, 4, 3, rng)};
  VectorXd const c = vec({1.0, 2.0, 0.5});

  double worst = -kInf;
  for (auto const& x : pol.vertex_solutions) worst = std::max(worst, c.dot(x));

  auto const vertices = dom.all_vertices();
  for (int trial = 0; trial < 500; ++trial) {
    // Random convex combination of the cover's vertices.
    VectorXd w = VectorXd::NullaryExpr(5, [&](Eigen::Index) { return rng.uniform(); });
    w /= w.sum();
    VectorXd xi = VectorXd::Zero(4);
    for (int i = 0; i < 5; ++i) xi += w[i] * vertices[i];
    CHECK(c.dot(evaluate_pap(pol, xi)) <= worst + 1e-9);
  }
}

TEST_CASE("dominated points majorize the input and lie in the cover") {
  auto const u = UncertaintySet::hypersphere(4);
  auto const dom = build_closed_form(u);
  auto const vertices = dom.all_vertices();
  for (auto const& xi : u.sample(40, 5)) {
    VectorXd const h = dominate(dom.v0, xi);
    CHECK((h - xi).minCoeff() >= 0.0);
    CHECK(hull_feasible(vertices, h, Relation::Eq));
  }
}

TEST_CASE("re-scaled vertices keep dominating sampled points") {
  Rng rng(2024);
  for (auto const& u : {UncertaintySet::hypersphere(3), UncertaintySet::budgeted(4, 2.0)}) {
    auto const dom = build_closed_form(u);
    auto const samples = u.sample(5, 11);
    for (int trial = 0; trial < 100; ++trial) {
      int const m = u.dim();
      VectorXd s = VectorXd::NullaryExpr(m, [&](Eigen::Index) { return rng.uniform(); });
      auto const scaled = apply_scales(dom.all_vertices(), s);
      for (auto const& xi : samples) {
        VectorXd const h = dominate(dom.v0, xi, s);
        CHECK((h - xi).minCoeff() >= -1e-12);
        CHECK(hull_feasible(scaled, h, Relation::Ge));
        // The scaled dominated point is exactly the lambda-combination of the
        // scaled vertices, with weights from the original anchor and spreads.
        VectorXd const lambda = lambda_coeffs(dom, xi);
        VectorXd combo = (1.0 - lambda.sum()) * scaled[0];
        for (int i = 0; i < m; ++i) combo += lambda[i] * scaled[i + 1];
        CHECK((combo - h).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("affine evaluation and its sparsity validator") {
  StagePartition stages;
  stages.unc_of_stage = {{0, 1}};
  stages.dec_of_stage = {{0, 1}};
  AffinePolicy pol{stages, Eigen::MatrixXd::Identity(2, 2), VectorXd::Zero(2)};
  CHECK(evaluate_affine(pol, vec({0.3, 0.7})) == vec({0.3, 0.7}));
  CHECK_NOTHROW(require_affine_support(pol));

  pol.P.setZero();
  pol.q = vec({1.5, -0.5});
  CHECK(evaluate_affine(pol, vec({0.9, 0.9})) == pol.q);
  CHECK(evaluate_affine(pol, VectorXd::Zero(2)) == pol.q);
  CHECK_THROWS_AS(evaluate_affine(pol, vec({0.1})), InputError);

  // Two stages: the stage-1 decision must not read the stage-2 coordinate.
  StagePartition two;
  two.unc_of_stage = {{0}, {1}};
  two.dec_of_stage = {{0}, {1}};
  AffinePolicy lower{two, Eigen::MatrixXd::Zero(2, 2), VectorXd::Zero(2)};
  lower.P(0, 0) = 0.4;
  lower.P(1, 0) = 0.2;
  lower.P(1, 1) = 0.3;
  CHECK_NOTHROW(require_affine_support(lower));
  lower.P(0, 1) = 1e-9;
  CHECK_THROWS_AS(require_affine_support(lower), InputError);
}

TEST_CASE("assessment aggregates cost and violation over realizations") {
  AroInstance inst{Eigen::MatrixXd{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}},
                   vec({1.0, 1.0}),
                   Eigen::MatrixXd{{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}},
                   vec({0.1, 0.0, 0.2}),
                   StagePartition{{{0, 1}}, {{0, 1}}},
                   UncertaintySet::budgeted(2, 1.5)};
  require_valid(inst);

  SUBCASE("empty realization list gives a zeroed report") {
    auto const report = assess(inst, [](VectorXd const& xi) { return xi; }, {});
    CHECK(report.num_realizations == 0);
    CHECK(report.max_cost == 0.0);
    CHECK(report.mean_cost == 0.0);
    CHECK(report.worst_violation == 0.0);
    CHECK(report.feasible);
  }

  SUBCASE("constant policy covering the all-ones corner is feasible on the set") {
    // min x1 + x2 subject to x1 >= 1.1, x2 >= 1.0, x1 + x2 >= 1.2 at xi = e.
    BoxPolicy const box{vec({1.1, 1.0})};
    auto const samples = inst.uset.sample(50, 3);
    auto const report =
        assess(inst, [&](VectorXd const&) { return box.x; }, samples, 1e-7);
    CHECK(report.num_realizations == 50);
    CHECK(report.feasible);
    CHECK(report.worst_violation <= 1e-7);
    CHECK(report.max_cost == doctest::Approx(2.1).epsilon(1e-12));
    CHECK(report.mean_cost == doctest::Approx(2.1).epsilon(1e-12));
  }

  SUBCASE("violations are reported raw, not clipped") {
    std::vector<VectorXd> const reals = {vec({1.0, 1.0})};
    auto const report =
        assess(inst, [](VectorXd const& xi) { return VectorXd::Zero(2).eval(); }, reals);
    CHECK(report.worst_violation == doctest::Approx(1.2).epsilon(1e-12));
    CHECK_FALSE(report.feasible);
    CHECK(report.max_cost == 0.0);
  }

  SUBCASE("mismatched decision size is rejected") {
    std::vector<VectorXd> const reals = {vec({0.5, 0.5})};
    CHECK_THROWS_AS(
        assess(inst, [](VectorXd const&) { return VectorXd::Zero(3).eval(); }, reals),
        InputError);
  }
}
