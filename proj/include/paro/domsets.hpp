#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "paro/usets.hpp"

namespace paro {

// Dominating simplex for an uncertainty set U: the convex hull of an anchor
// v0 and the m spread vertices v_i = v0 + rho_i e_i. Every point of U is
// dominated componentwise by a convex combination of these vertices, and
// every vertex divided by beta lies in U, which certifies the approximation
// factor beta.
struct DominatingSet {
  Eigen::VectorXd v0;
  Eigen::VectorXd rho;  // entries >= 0; rho_i = 0 collapses vertex i onto v0
  double beta = 1.0;
  std::string origin;

  int dim() const { return static_cast<int>(v0.size()); }

  // vertex(0) = v0, vertex(i) = v0 + rho_{i-1} e_{i-1} for i in 1..m.
  Eigen::VectorXd vertex(int i) const;
  std::vector<Eigen::VectorXd> all_vertices() const;
};

// Symmetric closed-form construction; one formula per closed-form set kind.
DominatingSet build_closed_form(UncertaintySet const& u);

// Iterative construction for sets that support plusmax: repeatedly absorbs the
// worst uncovered excess until the residual drops below the round index.
// Terminates within ceil(sqrt(m)) rounds; the result has uniform spreads and
// beta = 2 * rounds + 1.
DominatingSet build_general(UncertaintySet const& u);

enum class ValidityMode { ClosedForm, Sampling };

// Coverage margin of the dominating simplex over U; values <= 1 certify that
// every point of U is dominated. ClosedForm evaluates the worst spike profile
// max_j j * (gamma(j) - mu)_+ / rho (symmetric sets only); Sampling maximizes
// sum_i ((xi - v0)_+)_i / rho_i over sampled members of U.
double check_validity(DominatingSet const& dom, UncertaintySet const& u, ValidityMode mode,
                      int num_samples = 10000, std::uint64_t seed = 0);

// Smallest factor t such that every simplex vertex divided by t lies in U
// (bisection on membership).
double compute_beta(DominatingSet const& dom, UncertaintySet const& u);

// Componentwise rescaling of vertices toward the all-ones corner:
// v'_j = s_j * (1 - v_j) + v_j with s in [0, 1]^m.
std::vector<Eigen::VectorXd> apply_scales(std::vector<Eigen::VectorXd> const& vertices,
                                          Eigen::VectorXd const& s);

}  // namespace paro
