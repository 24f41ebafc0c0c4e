#pragma once

// Shared helpers for building random structured uncertainty sets in tests.

#include <Eigen/Dense>
#include <vector>

#include "paro/rng.hpp"
#include "paro/usets.hpp"

namespace paro::testing {

// Random polytope inside [0,1]^m that is closed under componentwise decrease
// and contains every unit vector: the vertex list holds the origin, the unit
// vectors, and every coordinate-subset zeroing of `num_points` random points
// (which makes the hull exactly the downward closure of those points' hull).
inline UncertaintySet down_monotone_polytope(int m, std::uint64_t seed, int num_points = 1) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> vertices;
  vertices.push_back(Eigen::VectorXd::Zero(m));
  for (int i = 0; i < m; ++i) vertices.push_back(Eigen::VectorXd::Unit(m, i));
  for (int p = 0; p < num_points; ++p) {
    Eigen::VectorXd base(m);
    for (int i = 0; i < m; ++i) base[i] = rng.uniform();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
      for (int i = 0; i < m; ++i) {
        if (mask & (1u << i)) v[i] = base[i];
      }
      vertices.push_back(std::move(v));
    }
  }
  return UncertaintySet::vertex_polytope(m, std::move(vertices));
}

}  // namespace paro::testing
