#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "paro/lp.hpp"
#include "paro/rng.hpp"
#include "paro/usets.hpp"

using Eigen::VectorXd;
using namespace paro;

namespace {

// Brute-force maximum of a linear (or componentwise convex) function over the
// 0/1 vectors with at most k ones.
template <typename F>
double brute_force_over_binary(int m, int k, F&& score) {
  double best = -1e100;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) > k) continue;
    VectorXd xi = VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) xi[i] = 1.0;
    }
    best = std::max(best, score(xi));
  }
  return best;
}

VectorXd spike(int m, int j, double value) {
  VectorXd xi = VectorXd::Zero(m);
  for (int i = 0; i < j; ++i) xi[i] = value;
  return xi;
}

std::vector<UncertaintySet> closed_form_grid(int m) {
  std::vector<UncertaintySet> sets;
  sets.push_back(UncertaintySet::hypersphere(m));
  sets.push_back(UncertaintySet::budgeted(m, 1.0));
  sets.push_back(UncertaintySet::budgeted(m, std::min(2.5, static_cast<double>(m))));
  sets.push_back(UncertaintySet::budgeted(m, static_cast<double>(m)));
  sets.push_back(UncertaintySet::p_norm_ball(m, 1.5));
  sets.push_back(UncertaintySet::p_norm_ball(m, 3.0));
  sets.push_back(UncertaintySet::ellipsoid(m, 0.0));
  sets.push_back(UncertaintySet::ellipsoid(m, 0.3));
  sets.push_back(UncertaintySet::ellipsoid(m, 1.0));
  return sets;
}

}  // namespace

TEST_CASE("construction validates parameters") {
  CHECK_THROWS_AS(UncertaintySet::budgeted(4, 0.5), InputError);
  CHECK_THROWS_AS(UncertaintySet::budgeted(4, 5.0), InputError);
  CHECK_THROWS_AS(UncertaintySet::p_norm_ball(4, 1.0), InputError);
  CHECK_THROWS_AS(UncertaintySet::ellipsoid(4, -0.1), InputError);
  CHECK_THROWS_AS(UncertaintySet::ellipsoid(4, 1.1), InputError);
  CHECK_THROWS_AS(UncertaintySet::vertex_polytope(2, {}), InputError);
  CHECK_THROWS_AS(UncertaintySet::vertex_polytope(
                      2, {Eigen::Vector2d(0.5, 1.5)}),
                  InputError);
}

TEST_CASE("unit vectors and the origin belong to every kind") {
  for (int m : {1, 3, 6}) {
    for (auto const& u : closed_form_grid(m)) {
      CHECK(u.contains(VectorXd::Zero(m)));
      for (int i = 0; i < m; ++i) {
        CHECK(u.contains(VectorXd::Unit(m, i)));
      }
    }
  }
}

TEST_CASE("gamma values and the spike membership property") {
  auto const hyp = UncertaintySet::hypersphere(9);
  CHECK(hyp.gamma(4) == doctest::Approx(0.5).epsilon(1e-12));
  auto const bud = UncertaintySet::budgeted(9, 3.0);
  CHECK(bud.gamma(2) == doctest::Approx(1.0));
  CHECK(bud.gamma(6) == doctest::Approx(0.5));
  auto const pn = UncertaintySet::p_norm_ball(8, 2.0);
  CHECK(pn.gamma(4) == doctest::Approx(0.5).epsilon(1e-12));
  auto const el = UncertaintySet::ellipsoid(5, 1.0);
  CHECK(el.gamma(5) == doctest::Approx(0.2).epsilon(1e-12));

  for (int m : {2, 5, 9}) {
    for (auto const& u : closed_form_grid(m)) {
      for (int j : {1, (m + 1) / 2, m}) {
        double const g = u.gamma(j);
        CHECK(u.contains(spike(m, j, g), 1e-9));
        CHECK_FALSE(u.contains(spike(m, j, g + 1e-3), 1e-9));
      }
    }
  }

  CHECK_THROWS_AS(hyp.gamma(0), InputError);
  CHECK_THROWS_AS(hyp.gamma(10), InputError);
  auto const vp = UncertaintySet::vertex_polytope(2, {Eigen::Vector2d(1.0, 0.0)});
  CHECK_THROWS_AS(vp.gamma(1), InputError);
}

TEST_CASE("budgeted integer linmax equals binary enumeration") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(900 + seed);
    int const m = 2 + rng.below(9);
    int const k = 1 + rng.below(m);
    auto const u = UncertaintySet::budgeted(m, static_cast<double>(k));
    VectorXd a(m);
    for (int i = 0; i < m; ++i) a[i] = rng.uniform(-1.0, 1.0);
    auto const got = u.linmax(a);
    double const want =
        brute_force_over_binary(m, k, [&](VectorXd const& xi) { return a.dot(xi); });
    CHECK(got.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(u.contains(got.argmax, 1e-9));
    CHECK(a.dot(got.argmax) == doctest::Approx(got.value).epsilon(1e-12));
  }
}

TEST_CASE("fractional budget linmax matches an LP oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(7100 + seed);
    int const m = 2 + rng.below(7);
    double const k = rng.uniform(1.0, static_cast<double>(m));
    auto const u = UncertaintySet::budgeted(m, k);
    VectorXd a(m);
    for (int i = 0; i < m; ++i) a[i] = rng.uniform(-1.0, 1.0);

    LinearProgram lp(m);
    lp.objective = -a;  // maximize a . xi
    lp.lower.setZero();
    lp.upper.setOnes();
    lp.add_row(VectorXd::Ones(m), Relation::Le, k);
    auto const sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);

    auto const got = u.linmax(a);
    CHECK(got.value == doctest::Approx(-sol.objective).epsilon(1e-9));
    CHECK(u.contains(got.argmax, 1e-9));
  }
}

TEST_CASE("linmax is achieved and unbeaten by sampling") {
  for (int m : {2, 4, 7}) {
    for (auto const& u : closed_form_grid(m)) {
      Rng rng(55u + static_cast<std::uint64_t>(m));
      for (int trial = 0; trial < 6; ++trial) {
        VectorXd a(m);
        for (int i = 0; i < m; ++i) a[i] = rng.uniform(-1.0, 1.0);
        auto const got = u.linmax(a);
        CHECK(u.contains(got.argmax, 1e-7));
        CHECK(a.dot(got.argmax) == doctest::Approx(got.value).epsilon(1e-9));
        auto const pts = u.sample(2000, 31 * trial + m);
        for (auto const& xi : pts) {
          CHECK(a.dot(xi) <= got.value + 1e-7);
        }
      }
    }
  }
}

TEST_CASE("ellipsoid degenerate weights match their simpler twins") {
  int const m = 6;
  auto const sphere = UncertaintySet::hypersphere(m);
  auto const el0 = UncertaintySet::ellipsoid(m, 0.0);
  auto const el1 = UncertaintySet::ellipsoid(m, 1.0);
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    VectorXd a(m);
    for (int i = 0; i < m; ++i) a[i] = rng.uniform(-1.0, 1.0);
    CHECK(el0.linmax(a).value == doctest::Approx(sphere.linmax(a).value).epsilon(1e-10));
    double const simplex_max = std::max(0.0, a.maxCoeff());
    CHECK(el1.linmax(a).value == doctest::Approx(simplex_max).epsilon(1e-12));
  }
}

TEST_CASE("plusmax for integer budgets equals binary enumeration") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(4000 + seed);
    int const m = 2 + rng.below(9);
    int const k = 1 + rng.below(m);
    auto const u = UncertaintySet::budgeted(m, static_cast<double>(k));
    VectorXd v(m);
    for (int i = 0; i < m; ++i) v[i] = rng.uniform(0.0, 1.4);
    auto const got = u.plusmax(v);
    double const want = brute_force_over_binary(
        m, k, [&](VectorXd const& xi) { return (xi - v).cwiseMax(0.0).sum(); });
    CHECK(got.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(u.contains(got.argmax, 1e-9));
  }

  auto const frac = UncertaintySet::budgeted(4, 2.5);
  CHECK_THROWS_AS(frac.plusmax(VectorXd::Zero(4)), InputError);
  auto const hyp = UncertaintySet::hypersphere(4);
  CHECK_THROWS_AS(hyp.plusmax(VectorXd::Zero(4)), InputError);
}

TEST_CASE("plusmax at the origin reduces to linmax of all-ones") {
  for (int m : {3, 6}) {
    for (int k = 1; k <= m; ++k) {
      auto const u = UncertaintySet::budgeted(m, static_cast<double>(k));
      CHECK(u.plusmax(VectorXd::Zero(m)).value ==
            doctest::Approx(u.linmax(VectorXd::Ones(m)).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampling is deterministic, members only, boundary points on boundary") {
  for (int m : {2, 5}) {
    for (auto const& u : closed_form_grid(m)) {
      auto const first = u.sample(200, 77);
      auto const second = u.sample(200, 77);
      REQUIRE(first.size() == 200);
      for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i] == second[i]);
        CHECK(u.contains(first[i], 1e-9));
      }
      // Even indices are exact boundary points: pushing them outward leaves
      // the set.
      for (size_t i = 0; i < first.size(); i += 2) {
        if (first[i].norm() == 0.0) continue;
        CHECK_FALSE(u.contains(first[i] * (1.0 + 1e-6), 1e-9));
      }
      // Members are closed under scaling toward the origin.
      for (double t : {0.25, 0.75}) {
        CHECK(u.contains(t * first[0], 1e-9));
      }
    }
  }
}

TEST_CASE("vertex polytope operations enumerate the vertex list") {
  std::vector<VectorXd> verts = {
      Eigen::Vector3d(0.0, 0.0, 0.0), Eigen::Vector3d(1.0, 0.0, 0.0),
      Eigen::Vector3d(0.0, 1.0, 0.0), Eigen::Vector3d(0.4, 0.4, 0.8)};
  auto const u = UncertaintySet::vertex_polytope(3, verts);

  CHECK(u.contains(Eigen::Vector3d(0.5, 0.5, 0.0), 1e-9));
  CHECK(u.contains(Eigen::Vector3d(0.2, 0.2, 0.4), 1e-9));
  CHECK_FALSE(u.contains(Eigen::Vector3d(0.9, 0.9, 0.0), 1e-9));
  CHECK_FALSE(u.contains(Eigen::Vector3d(0.0, 0.0, 0.9), 1e-9));

  Eigen::Vector3d const a(1.0, 0.5, 2.0);
  auto const lm = u.linmax(a);
  CHECK(lm.value == doctest::Approx(0.4 + 0.2 + 1.6));
  CHECK(lm.argmax == verts[3]);

  auto const pm = u.plusmax(Eigen::Vector3d(0.2, 0.2, 0.2));
  CHECK(pm.value == doctest::Approx(1.0));  // best vertex: (0.4,0.4,0.8)
  auto const samples = u.sample(60, 5);
  for (auto const& xi : samples) CHECK(u.contains(xi, 1e-7));
}

TEST_CASE("linmax input validation") {
  auto const u = UncertaintySet::hypersphere(3);
  CHECK_THROWS_AS(u.linmax(VectorXd::Zero(2)), InputError);
  VectorXd bad = VectorXd::Zero(3);
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(u.linmax(bad), InputError);
}
