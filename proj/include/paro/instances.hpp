#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "paro/core.hpp"

namespace paro {

enum class BaseSetKind { Hypersphere, Budgeted };

// Random covering family: m = n, costs e + alpha |y|, rows (I + |Y|/sqrt(m)) x
// >= xi plus x >= 0, contiguous uncertainty stages of size ~m/floor(sqrt(m)).
struct GaussianSpec {
  int m = 10;
  double alpha = 0.0;
  BaseSetKind kind = BaseSetKind::Hypersphere;
  std::uint64_t seed = 1;
};

// Demand covering over locations on an integer grid: buy R resources up
// front, allocate per planning period, then delay or redirect shortfalls per
// execution period. Compiled to the covering form with the base uncertainty
// (xi^p, xi^e) driving demands d_lt (1 + xi^p_lt + xi^e_lt / 2).
struct DemandSpec {
  int num_locations = 2;       // grid locations
  int num_planning = 1;        // planning periods
  int num_exec = 8;            // execution periods per planning period
  double cost_resource = 1.0;  // unit cost of buying resources
  double cost_demand = 0.25;   // unit cost of lost demand
  BaseSetKind kind = BaseSetKind::Hypersphere;
  std::uint64_t seed = 1;
};

// Two-stage family with a provable gap between affine and piecewise
// policies: static scalar at cost sqrt(m), unit-cost recourse, rows
// alpha e + x >= xi over the hypersphere set.
struct AffineGapSpec {
  int m = 4;
};

using GeneratorSpec = std::variant<GaussianSpec, DemandSpec, AffineGapSpec>;

// Index bookkeeping of the compiled demand-covering instance, plus the drawn
// parameters, so callers and tests can reconstruct any row independently.
struct DemandMetadata {
  int num_locations = 0;
  int num_planning = 0;
  int num_exec = 0;
  std::vector<std::array<int, 2>> positions;  // grid position per location
  Eigen::MatrixXd demand;                     // (location, execution period) -> d_lt
  Eigen::VectorXd delay_loss;                 // q^d per execution period
  Eigen::MatrixXd redirect_loss;              // q^r per (from, to) pair

  int total_exec() const { return num_planning * num_exec; }
  int period_of(int t) const { return t / num_exec; }
  int base_dim() const { return 2 * num_locations * total_exec(); }

  // Base uncertainty coordinates: per planning period, first the block of
  // planning-level components for its execution periods, then one block of
  // execution-level components per execution period; location-major inside.
  int p_coord(int t, int l) const {
    int const p = period_of(t);
    return p * 2 * num_locations * num_exec + (t - p * num_exec) * num_locations + l;
  }
  int e_coord(int t, int l) const {
    int const p = period_of(t);
    return p * 2 * num_locations * num_exec + num_locations * num_exec +
           (t - p * num_exec) * num_locations + l;
  }

  // Decision columns: R, then allocations by planning period, then one
  // block per execution period holding delays followed by redirects.
  int col_R() const { return 0; }
  int col_r(int p, int l) const { return 1 + p * num_locations + l; }
  int col_sd(int t, int l) const {
    return 1 + num_planning * num_locations + t * num_locations * num_locations + l;
  }
  int col_sr(int t, int l, int lp) const {
    return col_sd(t, 0) + num_locations + l * (num_locations - 1) + (lp < l ? lp : lp - 1);
  }
  int num_decisions() const {
    return 1 + num_planning * num_locations + total_exec() * num_locations * num_locations;
  }

  int demand_row(int t, int l) const { return t * num_locations + l; }
  int resource_row(int p) const { return total_exec() * num_locations + p; }
  int nonneg_row(int decision) const {
    return total_exec() * num_locations + num_planning + decision;
  }
};

AroInstance gen_gaussian(GaussianSpec const& spec);
std::pair<AroInstance, DemandMetadata> gen_demand_covering(DemandSpec const& spec);
AroInstance gen_affine_gap(AffineGapSpec const& spec);

// Instance for any spec kind (demand covering drops the metadata).
AroInstance generate(GeneratorSpec const& spec);

// Realizations for simulation reports: demand covering draws every base
// coordinate from the folded normal |N(0, 1/m)|; the other families sample
// uniformly inside their uncertainty set.
std::vector<Eigen::VectorXd> sample_realizations(GeneratorSpec const& spec, int n,
                                                 std::uint64_t seed);

std::vector<Eigen::VectorXd> folded_normal_realizations(int dim, int n, std::uint64_t seed);

// JSON instance files, schema_version 1: {schema_version, spec?, matrices?,
// stages, uncertainty}. Stage index lists are 1-based on disk. Files carrying
// matrices decode to the stored instance; spec-only files are regenerated
// from the embedded seed.
std::string encode_instance(AroInstance const& inst);
std::string encode_instance(AroInstance const& inst, GeneratorSpec const& spec);
std::string encode_spec_only(GeneratorSpec const& spec);

struct InstanceDocument {
  AroInstance instance;
  std::optional<GeneratorSpec> spec;
};

InstanceDocument decode_instance(std::string const& text);

// One row per realization, full double precision, 1-based column header.
void write_realizations_csv(std::ostream& os, std::vector<Eigen::VectorXd> const& realizations);

}  // namespace paro
