#include "fca/renorm.hpp"

#include <cmath>
#include <cstdlib>
#include <nlohmann/json.hpp>

namespace fca {

double verdict_tolerance(int64_t dim) {
  if (const char* env = std::getenv("FCA_RENORM_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return kVerdictTolPerDim * double(dim);
}

GradedOperator build_global_projection(const TileProjection& p, int lattice_size) {
  int t = p.tile.cells;
  if (lattice_size % t)
    throw std::invalid_argument("lattice size must be divisible by the tile size");
  CellLayout lay{lattice_size, 1};
  GradedOperator acc = GradedOperator::identity(lay.width());
  for (int x = 0; x * t < lattice_size; x++) {
    std::vector<int> cells(static_cast<size_t>(t));
    for (int k = 0; k < t; k++) cells[size_t(k)] = x * t + k;
    acc = op_mul(acc, embed(p.p, cells, p.tile, lay));
  }
  return acc;
}

TileProjection theorem_tile_projection(const FcaSpec& spec, const TileProjection& p) {
  if (!spec_is_margolus(spec)) return p;
  GradedOperator a = family_aligned_gate(spec);
  GradedOperator pulled = op_mul(op_mul(a.adjoint(), p.p), a);
  return make_tile_projection(pulled, p.tile.cells);
}

namespace {

double commutator_spectral_norm(const Dense& un, const GradedOperator& pi, const CellLayout& lay) {
  Dense und = un.adjoint();
  auto fwd = [&](const DenseVec& v) {
    DenseVec a = un * apply_vec(pi, lay, v);
    DenseVec b = apply_vec(pi, lay, DenseVec(un * v));
    return DenseVec(a - b);
  };
  // [UN, Pi]^dag = [Pi, UN^dag] since Pi is hermitian
  auto adj = [&](const DenseVec& v) {
    DenseVec a = apply_vec(pi, lay, DenseVec(und * v));
    DenseVec b = und * apply_vec(pi, lay, v);
    return DenseVec(a - b);
  };
  return spectral_norm_matvec(fwd, adj, lay.dim());
}

}  // namespace

RenormReport check_renormalisable_pow(const CellLayout& lay, const Dense& un,
                                      const TileProjection& p, int steps) {
  if (p.tile.cells != steps)
    throw std::invalid_argument("square blocking: tile size must equal the step count");
  if (lay.cells % p.tile.cells)
    throw std::invalid_argument("lattice size incompatible with the tile");

  RenormReport rep;
  rep.lattice_size = lay.cells;
  rep.steps = steps;

  GradedOperator pi = build_global_projection(p, lay.cells);
  rep.residual = commutator_spectral_norm(un, pi, lay);
  rep.verdict = rep.residual < verdict_tolerance(lay.dim());

  Isometry iso = build_isometry(p);
  CoarseInfo ci;
  ci.dim = iso.rank;
  ci.parity = iso.graded() ? CoarseParityKind::Graded : CoarseParityKind::Bosonic;
  if (rep.verdict) {
    int tiles = lay.cells / p.tile.cells;
    Dense us = coisometry_apply(iso, un, tiles);
    ci.unitarity_defect = unitarity_defect(us);
    rep.induced_unitary = std::move(us);
  }
  rep.coarse = ci;
  return rep;
}

RenormReport check_renormalisable(const WrappedUnitary& u, const TileProjection& p, int steps) {
  return check_renormalisable_pow(u.layout, power(u, steps).u, p, steps);
}

InducedAutomaton induced_automaton_pow(const CellLayout& lay, const Dense& un,
                                       const TileProjection& p, bool verify_equation) {
  RenormReport rep = check_renormalisable_pow(lay, un, p, p.tile.cells);
  if (!rep.verdict)
    throw std::invalid_argument("automaton is not renormalisable with this projection");

  InducedAutomaton ind;
  ind.tiles = lay.cells / p.tile.cells;
  ind.rank = p.rank;
  ind.iso = build_isometry(p);
  ind.u_coarse = *rep.induced_unitary;

  double defect = unitarity_defect(ind.u_coarse);
  if (defect > 1e-9 * double(ind.u_coarse.rows()))
    throw std::runtime_error("induced matrix failed to be unitary; defect " +
                             std::to_string(defect));

  if (verify_equation) {
    // Renormalisation equation on a generating set of the coarse algebra:
    // one-cell matrix units at two adjacent cells (the rest follows from
    // translation covariance of both sides).
    Dense w = global_isometry(ind.iso, ind.tiles);
    Dense m = un.adjoint() * w;  // fine-dim x coarse-dim
    int64_t cdim = ind.u_coarse.rows();
    double worst = 0;
    int64_t pre = 1;
    for (int x = 0; x < std::min(ind.tiles, 2); x++) {
      int64_t post = cdim / (pre * ind.rank);
      for (int i = 0; i < ind.rank; i++)
        for (int j = 0; j < ind.rank; j++) {
          Dense b = Dense::Zero(cdim, cdim);
          for (int64_t a = 0; a < pre; a++)
            b.block(a * ind.rank * post + i * post, a * ind.rank * post + j * post, post, post) =
                Dense::Identity(post, post);
          Dense lhs = m * b * m.adjoint();
          Dense sb = ind.u_coarse.adjoint() * b * ind.u_coarse;
          Dense rhs = w * sb * w.adjoint();
          worst = std::max(worst, (lhs - rhs).norm());
        }
      pre *= ind.rank;
    }
    ind.equation_residual = worst;
  }

  if (ind.rank == 2) {
    WrappedUnitary cu;
    cu.layout = ind.coarse_layout();
    cu.u = ind.u_coarse;
    ind.images = transition_images(cu, 1);
  }
  return ind;
}

InducedAutomaton induced_automaton(const WrappedUnitary& u, const TileProjection& p, int steps,
                                   bool verify_equation) {
  return induced_automaton_pow(u.layout, power(u, steps).u, p, verify_equation);
}

bool invariant_state_check(const WrappedUnitary& u, const TileProjection& p, int steps) {
  Dense un = power(u, steps).u;
  GradedOperator pi = build_global_projection(p, u.layout.cells);
  Dense pid = to_dense(pi, u.layout);
  double num = (un * pid * un.adjoint() - pid).norm();
  return num < verdict_tolerance(u.layout.dim()) * std::max(1.0, pid.norm());
}

bool brute_force_equivalence(const FcaSpec& spec, const TileProjection& p, int steps, int size_a,
                             int size_b) {
  int need = wrap_size_for(spec, steps);
  for (int s : {size_a, size_b})
    if (s < need || s % p.tile.cells)
      throw std::invalid_argument("size fails the regular-wrapping policy");
  WrappedUnitary ua = build_wrapped_unitary(spec, size_a);
  WrappedUnitary ub = build_wrapped_unitary(spec, size_b);
  RenormReport ra = check_renormalisable(ua, p, steps);
  RenormReport rb = check_renormalisable(ub, p, steps);
  if (ra.verdict != rb.verdict) return false;
  if (!ra.verdict) return true;
  InducedAutomaton ia = induced_automaton(ua, p, steps);
  InducedAutomaton ib = induced_automaton(ub, p, steps);
  if (ia.rank != ib.rank) return false;
  if (!ia.images || !ib.images) return true;  // general coarse cells: verdict agreement only
  return transition_distance(*ia.images, *ib.images) < 1e-7;
}

namespace {
std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace

std::string report_to_json(const RenormReport& r) {
  nlohmann::ordered_json j;
  j["verdict"] = r.verdict;
  j["residual"] = fmt12(r.residual);
  j["lattice_size"] = r.lattice_size;
  j["steps"] = r.steps;
  if (r.coarse) {
    j["coarse"] = {{"dim", r.coarse->dim},
                   {"parity", r.coarse->parity == CoarseParityKind::Graded ? "graded" : "bosonic"},
                   {"unitarity_defect", fmt12(r.coarse->unitarity_defect)}};
  }
  if (!r.fit_json.empty())
    j["fit"] = nlohmann::ordered_json::parse(r.fit_json);
  else
    j["fit"] = nullptr;
  return j.dump(2);
}

}  // namespace fca
