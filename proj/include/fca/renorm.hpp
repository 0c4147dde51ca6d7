#pragma once

#include <optional>
#include <string>

#include "fca/isometry.hpp"
#include "fca/projection.hpp"
#include "fca/wrapped.hpp"

namespace fca {

// Verdict tolerance is kVerdictTolPerDim * dim unless FCA_RENORM_TOL is set.
constexpr double kVerdictTolPerDim = 1e-9;
double verdict_tolerance(int64_t dim);

enum class CoarseParityKind { Bosonic, Graded };

struct CoarseInfo {
  int dim = 0;
  CoarseParityKind parity = CoarseParityKind::Bosonic;
  double unitarity_defect = 0;
};

struct RenormReport {
  bool verdict = false;
  double residual = 0;  // spectral norm of [U_T^N, Pi]
  int lattice_size = 0;
  int steps = 0;
  std::optional<CoarseInfo> coarse;
  std::optional<Dense> induced_unitary;  // present iff verdict
  std::string fit_json;                  // filled by the flow layer, may be empty
};

// Graded tensor chain of identical tile projections over the wrapped lattice.
GradedOperator build_global_projection(const TileProjection& p, int lattice_size);

// The named tile projections of two-layer automata live on the Schmidt side
// of the criterion; the commutator test takes their pull-back through the
// aligned gate. Non-Margolus automata use the projection as given.
TileProjection theorem_tile_projection(const FcaSpec& spec, const TileProjection& p);

RenormReport check_renormalisable(const WrappedUnitary& u, const TileProjection& p, int steps);

// Same check against a precomputed N-step unitary (shared across projections).
RenormReport check_renormalisable_pow(const CellLayout& lay, const Dense& un,
                                      const TileProjection& p, int steps);

struct InducedAutomaton {
  Dense u_coarse;        // rank^tiles dimensional
  int tiles = 0;
  int rank = 0;
  Isometry iso;
  // Generator images of the coarse automaton on the window [-1,0,1], present
  // when coarse cells are single modes (rank 2).
  std::optional<TransitionImages> images;
  double equation_residual = 0;  // max defect of T^N . E = E . S on cell bases

  CellLayout coarse_layout() const { return {tiles, 1}; }
};

// Requires a true verdict; throws if the induced matrix fails to be unitary.
// `verify_equation` runs the coarse-generator check of the renormalisation
// equation (skippable inside parameter sweeps).
InducedAutomaton induced_automaton(const WrappedUnitary& u, const TileProjection& p, int steps,
                                   bool verify_equation = true);
InducedAutomaton induced_automaton_pow(const CellLayout& lay, const Dense& un,
                                       const TileProjection& p, bool verify_equation = true);

// Invariant-product-state formulation; must agree with the verdict.
bool invariant_state_check(const WrappedUnitary& u, const TileProjection& p, int steps);

// Verdicts and extracted coarse rules agree across two regular wrappings.
bool brute_force_equivalence(const FcaSpec& spec, const TileProjection& p, int steps, int size_a,
                             int size_b);

std::string report_to_json(const RenormReport& r);

}  // namespace fca
