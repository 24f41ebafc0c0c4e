#include "paro/instances.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "paro/checks.hpp"
#include "paro/rng.hpp"

namespace paro {

namespace {

using nlohmann::json;

UncertaintySet base_set(BaseSetKind kind, int m) {
  if (kind == BaseSetKind::Hypersphere) return UncertaintySet::hypersphere(m);
  return UncertaintySet::budgeted(m, std::sqrt(static_cast<double>(m)));
}

// Contiguous stage blocks of near-equal size, earlier blocks taking the
// remainder, e.g. 10 coordinates in 3 stages -> sizes 4, 3, 3.
std::vector<std::vector<int>> contiguous_blocks(int count, int num_stages) {
  std::vector<std::vector<int>> blocks(static_cast<size_t>(num_stages));
  int const base = count / num_stages;
  int const extra = count % num_stages;
  int next = 0;
  for (int t = 0; t < num_stages; ++t) {
    int const size = base + (t < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) blocks[static_cast<size_t>(t)].push_back(next++);
  }
  return blocks;
}

}  // namespace

AroInstance gen_gaussian(GaussianSpec const& spec) {
  require(spec.m >= 2, "gaussian family needs at least two coordinates");
  require(spec.alpha >= 0.0, "gaussian family needs a non-negative cost spread");
  int const m = spec.m;
  Rng rng(spec.seed);

  Eigen::VectorXd c(m);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, m);
  double const scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; ++i) {
    // The cost gaussian is drawn even at alpha = 0 so the constraint matrix
    // is identical across alpha values for a fixed seed.
    c[i] = 1.0 + spec.alpha * std::abs(rng.gaussian());
    for (int j = 0; j < m; ++j) {
      A(i, j) = (i == j ? 1.0 : 0.0) + std::abs(rng.gaussian()) * scale;
    }
  }
  A.bottomRows(m).setIdentity();  // x >= 0, keeps the problem bounded

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * m, m);
  D.topRows(m).setIdentity();

  int const num_stages = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(m)))));
  StagePartition stages;
  stages.unc_of_stage = contiguous_blocks(m, num_stages);
  stages.dec_of_stage = stages.unc_of_stage;  // decision i rides with coordinate i

  return AroInstance{std::move(A), std::move(c), std::move(D),
                     Eigen::VectorXd::Zero(2 * m), std::move(stages),
                     base_set(spec.kind, m)};
}

std::pair<AroInstance, DemandMetadata> gen_demand_covering(DemandSpec const& spec) {
  require(spec.num_locations >= 2, "demand covering needs at least two locations");
  require(spec.num_planning >= 1 && spec.num_exec >= 1,
          "demand covering needs at least one period");
  require(spec.cost_resource >= 0.0 && spec.cost_demand >= 0.0,
          "demand covering needs non-negative costs");

  DemandMetadata meta;
  meta.num_locations = spec.num_locations;
  meta.num_planning = spec.num_planning;
  meta.num_exec = spec.num_exec;
  int const L = meta.num_locations;
  int const TE = meta.total_exec();

  Rng rng(spec.seed);
  int const grid_max = 2 * static_cast<int>(std::floor(std::sqrt(static_cast<double>(L)))) + 1;
  for (int l = 0; l < L; ++l) {
    int const x = rng.below(grid_max + 1);
    int const y = rng.below(grid_max + 1);
    meta.positions.push_back({x, y});
  }
  meta.demand.resize(L, TE);
  for (int t = 0; t < TE; ++t) {
    for (int l = 0; l < L; ++l) {
      meta.demand(l, t) = std::max(0.0, 10.0 + 2.0 * rng.gaussian());
    }
  }
  meta.delay_loss.resize(TE);
  for (int t = 0; t < TE; ++t) {
    // Delaying out of the last execution period of a planning period loses
    // twice as much.
    meta.delay_loss[t] = (t % meta.num_exec == meta.num_exec - 1) ? 0.2 : 0.1;
  }
  meta.redirect_loss.resize(L, L);
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      double const dx = meta.positions[static_cast<size_t>(a)][0] - meta.positions[static_cast<size_t>(b)][0];
      double const dy = meta.positions[static_cast<size_t>(a)][1] - meta.positions[static_cast<size_t>(b)][1];
      meta.redirect_loss(a, b) = std::max(0.0, 1.0 - 0.02 * std::sqrt(dx * dx + dy * dy));
    }
  }

  int const n = meta.num_decisions();
  int const m = meta.base_dim();
  int const rows = TE * L + meta.num_planning + n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows, m);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);

  c[meta.col_R()] = spec.cost_resource;
  for (int t = 0; t < TE; ++t) {
    for (int l = 0; l < L; ++l) {
      c[meta.col_sd(t, l)] = spec.cost_demand * meta.delay_loss[t];
      for (int lp = 0; lp < L; ++lp) {
        if (lp != l) c[meta.col_sr(t, l, lp)] = spec.cost_demand * meta.redirect_loss(l, lp);
      }
    }
  }

  // Demand rows: allocated resources plus outgoing delay/redirects cover the
  // demand plus what arrives from the previous period and other locations.
  for (int t = 0; t < TE; ++t) {
    for (int l = 0; l < L; ++l) {
      int const row = meta.demand_row(t, l);
      A(row, meta.col_r(meta.period_of(t), l)) += 1.0;
      A(row, meta.col_sd(t, l)) += 1.0;
      if (t >= 1) A(row, meta.col_sd(t - 1, l)) -= 1.0 - meta.delay_loss[t - 1];
      for (int lp = 0; lp < L; ++lp) {
        if (lp == l) continue;
        A(row, meta.col_sr(t, l, lp)) += 1.0;
        A(row, meta.col_sr(t, lp, l)) -= 1.0 - meta.redirect_loss(l, lp);
      }
      D(row, meta.p_coord(t, l)) = meta.demand(l, t);
      D(row, meta.e_coord(t, l)) = meta.demand(l, t) / 2.0;
      d[row] = meta.demand(l, t);
    }
  }
  // Resource rows: per planning period, allocations stay below the stock.
  for (int p = 0; p < meta.num_planning; ++p) {
    int const row = meta.resource_row(p);
    A(row, meta.col_R()) = 1.0;
    for (int l = 0; l < L; ++l) A(row, meta.col_r(p, l)) = -1.0;
  }
  for (int j = 0; j < n; ++j) A(meta.nonneg_row(j), j) = 1.0;

  // Stage sequence: buy resources blind; per planning period, reveal its
  // planning-level block and allocate; per execution period, reveal its
  // short-term block and decide delays/redirects.
  StagePartition stages;
  int const num_stages = 1 + meta.num_planning * (1 + meta.num_exec);
  stages.unc_of_stage.assign(static_cast<size_t>(num_stages), {});
  stages.dec_of_stage.assign(static_cast<size_t>(num_stages), {});
  stages.dec_of_stage[0].push_back(meta.col_R());
  for (int p = 0; p < meta.num_planning; ++p) {
    int const ps = 1 + p * (1 + meta.num_exec);
    for (int t = p * meta.num_exec; t < (p + 1) * meta.num_exec; ++t) {
      for (int l = 0; l < L; ++l) stages.unc_of_stage[static_cast<size_t>(ps)].push_back(meta.p_coord(t, l));
    }
    for (int l = 0; l < L; ++l) stages.dec_of_stage[static_cast<size_t>(ps)].push_back(meta.col_r(p, l));
    for (int t = p * meta.num_exec; t < (p + 1) * meta.num_exec; ++t) {
      int const es = ps + 1 + (t - p * meta.num_exec);
      for (int l = 0; l < L; ++l) stages.unc_of_stage[static_cast<size_t>(es)].push_back(meta.e_coord(t, l));
      for (int l = 0; l < L; ++l) {
        stages.dec_of_stage[static_cast<size_t>(es)].push_back(meta.col_sd(t, l));
      }
      for (int l = 0; l < L; ++l) {
        for (int lp = 0; lp < L; ++lp) {
          if (lp != l) stages.dec_of_stage[static_cast<size_t>(es)].push_back(meta.col_sr(t, l, lp));
        }
      }
    }
  }

  AroInstance inst{std::move(A), std::move(c), std::move(D), std::move(d),
                   std::move(stages), base_set(spec.kind, m)};
  return {std::move(inst), std::move(meta)};
}

AroInstance gen_affine_gap(AffineGapSpec const& spec) {
  require(spec.m >= 2, "affine-gap family needs at least two coordinates");
  int const m = spec.m;
  int const n = 1 + m;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m + 1, n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * m + 1, m);
  for (int i = 0; i < m; ++i) {
    A(i, 0) = 1.0;
    A(i, 1 + i) = 1.0;
    D(i, i) = 1.0;
    A(m + i, 1 + i) = 1.0;  // x_i >= 0
  }
  A(2 * m, 0) = 1.0;  // alpha >= 0
  Eigen::VectorXd c(n);
  c[0] = std::sqrt(static_cast<double>(m));
  c.tail(m).setOnes();

  StagePartition stages;
  stages.unc_of_stage.assign(2, {});
  stages.dec_of_stage.assign(2, {});
  stages.dec_of_stage[0].push_back(0);
  for (int k = 0; k < m; ++k) {
    stages.unc_of_stage[1].push_back(k);
    stages.dec_of_stage[1].push_back(1 + k);
  }
  return AroInstance{std::move(A), std::move(c), std::move(D),
                     Eigen::VectorXd::Zero(2 * m + 1), std::move(stages),
                     UncertaintySet::hypersphere(m)};
}

AroInstance generate(GeneratorSpec const& spec) {
  return std::visit(
      [](auto const& s) -> AroInstance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>) return gen_gaussian(s);
        else if constexpr (std::is_same_v<T, DemandSpec>) return gen_demand_covering(s).first;
        else return gen_affine_gap(s);
      },
      spec);
}

std::vector<Eigen::VectorXd> folded_normal_realizations(int dim, int n, std::uint64_t seed) {
  require(dim >= 1 && n >= 0, "invalid realization request");
  Rng rng(seed);
  double const sigma = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xi(dim);
    for (int k = 0; k < dim; ++k) xi[k] = std::abs(rng.gaussian()) * sigma;
    out.push_back(std::move(xi));
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_realizations(GeneratorSpec const& spec, int n,
                                                 std::uint64_t seed) {
  return std::visit(
      [&](auto const& s) -> std::vector<Eigen::VectorXd> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DemandSpec>) {
          DemandMetadata meta;
          meta.num_locations = s.num_locations;
          meta.num_planning = s.num_planning;
          meta.num_exec = s.num_exec;
          return folded_normal_realizations(meta.base_dim(), n, seed);
        } else if constexpr (std::is_same_v<T, GaussianSpec>) {
          return base_set(s.kind, s.m).sample(n, seed);
        } else {
          return UncertaintySet::hypersphere(s.m).sample(n, seed);
        }
      },
      spec);
}

namespace {

json matrix_to_json(Eigen::MatrixXd const& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(Eigen::VectorXd const& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json groups_to_json(std::vector<std::vector<int>> const& groups) {
  json arr = json::array();
  for (auto const& g : groups) {
    json inner = json::array();
    for (int i : g) inner.push_back(i + 1);  // 1-based on disk
    arr.push_back(std::move(inner));
  }
  return arr;
}

char const* kind_name(BaseSetKind kind) {
  return kind == BaseSetKind::Hypersphere ? "hypersphere" : "budgeted";
}

json spec_to_json(GeneratorSpec const& spec) {
  return std::visit(
      [](auto const& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianSpec>) {
          return json{{"family", "gaussian"},
                      {"m", s.m},
                      {"alpha", s.alpha},
                      {"uncertainty_kind", kind_name(s.kind)},
                      {"seed", s.seed}};
        } else if constexpr (std::is_same_v<T, DemandSpec>) {
          return json{{"family", "demand_covering"},
                      {"num_locations", s.num_locations},
                      {"num_planning", s.num_planning},
                      {"num_exec", s.num_exec},
                      {"cost_resource", s.cost_resource},
                      {"cost_demand", s.cost_demand},
                      {"uncertainty_kind", kind_name(s.kind)},
                      {"seed", s.seed}};
        } else {
          return json{{"family", "affine_gap"}, {"m", s.m}};
        }
      },
      spec);
}

json uset_to_json(UncertaintySet const& u) {
  json out{{"dim", u.dim()}};
  switch (u.kind()) {
    case SetKind::Hypersphere:
      out["kind"] = "hypersphere";
      break;
    case SetKind::Budgeted:
      out["kind"] = "budgeted";
      out["budget"] = u.budget();
      break;
    case SetKind::PNormBall:
      out["kind"] = "p_norm";
      out["p"] = u.p_exponent();
      break;
    case SetKind::Ellipsoid:
      out["kind"] = "ellipsoid";
      out["correlation"] = u.correlation();
      break;
    case SetKind::VertexPolytope: {
      out["kind"] = "vertex_polytope";
      json verts = json::array();
      for (auto const& v : u.vertices()) verts.push_back(vector_to_json(v));
      out["vertices"] = std::move(verts);
      break;
    }
  }
  return out;
}

json instance_to_json(AroInstance const& inst) {
  json doc;
  doc["schema_version"] = 1;
  doc["matrices"] = json{{"A", matrix_to_json(inst.A)},
                         {"c", vector_to_json(inst.c)},
                         {"D", matrix_to_json(inst.D)},
                         {"d", vector_to_json(inst.d)}};
  doc["stages"] = json{{"uncertainty", groups_to_json(inst.stages.unc_of_stage)},
                       {"decisions", groups_to_json(inst.stages.dec_of_stage)}};
  doc["uncertainty"] = uset_to_json(inst.uset);
  return doc;
}

[[noreturn]] void schema_error(std::string const& path, std::string const& what) {
  throw InputError("instance file: " + path + ": " + what);
}

json const& need(json const& obj, char const* key, std::string const& path) {
  if (!obj.is_object() || !obj.contains(key)) schema_error(path + "/" + key, "missing");
  return obj.at(key);
}

double need_number(json const& obj, char const* key, std::string const& path) {
  auto const& v = need(obj, key, path);
  if (!v.is_number()) schema_error(path + "/" + key, "expected a number");
  return v.get<double>();
}

Eigen::MatrixXd read_matrix(json const& arr, std::string const& path) {
  if (!arr.is_array() || arr.empty()) schema_error(path, "expected a non-empty array of rows");
  size_t const cols = arr.at(0).is_array() ? arr.at(0).size() : 0;
  if (cols == 0) schema_error(path + "/0", "expected a non-empty row");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(arr.size()), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < arr.size(); ++r) {
    auto const& row = arr.at(r);
    if (!row.is_array() || row.size() != cols) {
      schema_error(path + "/" + std::to_string(r), "row width mismatch");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!row.at(c).is_number()) {
        schema_error(path + "/" + std::to_string(r) + "/" + std::to_string(c),
                     "expected a number");
      }
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.at(c).get<double>();
    }
  }
  return M;
}

Eigen::VectorXd read_vector(json const& arr, std::string const& path) {
  if (!arr.is_array()) schema_error(path, "expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr.at(i).is_number()) schema_error(path + "/" + std::to_string(i), "expected a number");
    v[static_cast<Eigen::Index>(i)] = arr.at(i).get<double>();
  }
  return v;
}

std::vector<std::vector<int>> read_groups(json const& arr, std::string const& path, int count) {
  if (!arr.is_array()) schema_error(path, "expected an array of stage groups");
  std::vector<std::vector<int>> groups;
  for (size_t t = 0; t < arr.size(); ++t) {
    auto const& g = arr.at(t);
    if (!g.is_array()) schema_error(path + "/" + std::to_string(t), "expected an index array");
    std::vector<int> group;
    for (size_t i = 0; i < g.size(); ++i) {
      std::string const ipath = path + "/" + std::to_string(t) + "/" + std::to_string(i);
      if (!g.at(i).is_number_integer()) schema_error(ipath, "expected an integer index");
      int const one_based = g.at(i).get<int>();
      if (one_based < 1 || one_based > count) {
        schema_error(ipath, "index " + std::to_string(one_based) + " outside 1.." +
                                std::to_string(count));
      }
      group.push_back(one_based - 1);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

BaseSetKind read_base_kind(json const& obj, std::string const& path) {
  auto const& v = need(obj, "uncertainty_kind", path);
  if (v == "hypersphere") return BaseSetKind::Hypersphere;
  if (v == "budgeted") return BaseSetKind::Budgeted;
  schema_error(path + "/uncertainty_kind", "expected hypersphere or budgeted");
}

GeneratorSpec read_spec(json const& obj, std::string const& path) {
  auto const& family = need(obj, "family", path);
  if (family == "gaussian") {
    GaussianSpec s;
    s.m = static_cast<int>(need_number(obj, "m", path));
    s.alpha = need_number(obj, "alpha", path);
    s.kind = read_base_kind(obj, path);
    s.seed = need(obj, "seed", path).get<std::uint64_t>();
    return s;
  }
  if (family == "demand_covering") {
    DemandSpec s;
    s.num_locations = static_cast<int>(need_number(obj, "num_locations", path));
    s.num_planning = static_cast<int>(need_number(obj, "num_planning", path));
    s.num_exec = static_cast<int>(need_number(obj, "num_exec", path));
    s.cost_resource = need_number(obj, "cost_resource", path);
    s.cost_demand = need_number(obj, "cost_demand", path);
    s.kind = read_base_kind(obj, path);
    s.seed = need(obj, "seed", path).get<std::uint64_t>();
    return s;
  }
  if (family == "affine_gap") {
    AffineGapSpec s;
    s.m = static_cast<int>(need_number(obj, "m", path));
    return s;
  }
  schema_error(path + "/family", "unknown family");
}

UncertaintySet read_uset(json const& obj, std::string const& path) {
  auto const& kind = need(obj, "kind", path);
  int const dim = static_cast<int>(need_number(obj, "dim", path));
  if (kind == "hypersphere") return UncertaintySet::hypersphere(dim);
  if (kind == "budgeted") return UncertaintySet::budgeted(dim, need_number(obj, "budget", path));
  if (kind == "p_norm") return UncertaintySet::p_norm_ball(dim, need_number(obj, "p", path));
  if (kind == "ellipsoid") {
    return UncertaintySet::ellipsoid(dim, need_number(obj, "correlation", path));
  }
  if (kind == "vertex_polytope") {
    auto const& arr = need(obj, "vertices", path);
    if (!arr.is_array()) schema_error(path + "/vertices", "expected an array");
    std::vector<Eigen::VectorXd> verts;
    for (size_t i = 0; i < arr.size(); ++i) {
      verts.push_back(read_vector(arr.at(i), path + "/vertices/" + std::to_string(i)));
    }
    return UncertaintySet::vertex_polytope(dim, std::move(verts));
  }
  schema_error(path + "/kind", "unknown uncertainty kind");
}

}  // namespace

std::string encode_instance(AroInstance const& inst) { return instance_to_json(inst).dump(2); }

std::string encode_instance(AroInstance const& inst, GeneratorSpec const& spec) {
  json doc = instance_to_json(inst);
  doc["spec"] = spec_to_json(spec);
  return doc.dump(2);
}

std::string encode_spec_only(GeneratorSpec const& spec) {
  AroInstance const inst = generate(spec);
  json doc;
  doc["schema_version"] = 1;
  doc["spec"] = spec_to_json(spec);
  doc["stages"] = json{{"uncertainty", groups_to_json(inst.stages.unc_of_stage)},
                       {"decisions", groups_to_json(inst.stages.dec_of_stage)}};
  doc["uncertainty"] = uset_to_json(inst.uset);
  return doc.dump(2);
}

InstanceDocument decode_instance(std::string const& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (json::exception const& e) {
    throw InputError(std::string("instance file: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("instance file: top level must be an object");
  auto const& version = need(doc, "schema_version", "");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    schema_error("/schema_version", "unsupported version");
  }

  std::optional<GeneratorSpec> spec;
  if (doc.contains("spec")) spec = read_spec(doc.at("spec"), "/spec");

  if (!doc.contains("matrices")) {
    if (!spec) schema_error("/matrices", "missing (and no spec to regenerate from)");
    return InstanceDocument{generate(*spec), spec};
  }

  auto const& mats = doc.at("matrices");
  Eigen::MatrixXd A = read_matrix(need(mats, "A", "/matrices"), "/matrices/A");
  Eigen::VectorXd c = read_vector(need(mats, "c", "/matrices"), "/matrices/c");
  Eigen::MatrixXd D = read_matrix(need(mats, "D", "/matrices"), "/matrices/D");
  Eigen::VectorXd d = read_vector(need(mats, "d", "/matrices"), "/matrices/d");
  for (Eigen::Index r = 0; r < D.rows(); ++r) {
    for (Eigen::Index cidx = 0; cidx < D.cols(); ++cidx) {
      if (D(r, cidx) < 0.0) {
        schema_error("/matrices/D/" + std::to_string(r) + "/" + std::to_string(cidx),
                     "negative entry");
      }
    }
  }
  for (Eigen::Index r = 0; r < d.size(); ++r) {
    if (d[r] < 0.0) schema_error("/matrices/d/" + std::to_string(r), "negative entry");
  }

  auto const& stages_json = need(doc, "stages", "");
  StagePartition stages;
  stages.unc_of_stage = read_groups(need(stages_json, "uncertainty", "/stages"),
                                    "/stages/uncertainty", static_cast<int>(D.cols()));
  stages.dec_of_stage = read_groups(need(stages_json, "decisions", "/stages"),
                                    "/stages/decisions", static_cast<int>(A.cols()));

  UncertaintySet uset = read_uset(need(doc, "uncertainty", ""), "/uncertainty");

  AroInstance inst{std::move(A), std::move(c), std::move(D), std::move(d),
                   std::move(stages), std::move(uset)};
  auto const problems = validate_instance(inst);
  if (!problems.empty()) throw InputError("instance file: " + problems.front());
  return InstanceDocument{std::move(inst), spec};
}

void write_realizations_csv(std::ostream& os, std::vector<Eigen::VectorXd> const& realizations) {
  if (realizations.empty()) return;
  Eigen::Index const m = realizations.front().size();
  for (Eigen::Index k = 0; k < m; ++k) os << (k ? "," : "") << "xi_" << (k + 1);
  os << "\n";
  char buf[32];
  for (auto const& xi : realizations) {
    require(xi.size() == m, "realization dump: mixed dimensions");
    for (Eigen::Index k = 0; k < m; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", xi[k]);
      os << (k ? "," : "") << buf;
    }
    os << "\n";
  }
}

}  // namespace paro
