#pragma once

#include <optional>
#include <vector>

#include "fca/projection.hpp"
#include "fca/schmidt.hpp"
#include "fca/wrapped.hpp"

namespace fca {

// Composite two-cell gate of the two-step Margolus analysis: G = M2 * M1
// where M2 is the tile-aligned gate (applied first in time) and M1 the
// offset gate. Conjugation is G(O) = G^dag O G.
struct GGate {
  GradedOperator g;         // two-cell
  GradedOperator aligned;   // provenance: M2
  GradedOperator offset;    // provenance: M1
};

GGate build_G(const GradedOperator& offset_m1, const GradedOperator& aligned_m2);

// The aligned-layer conjugate of the tile projection; the orientation is
// pinned by a process-wide brute-force validation on a 10-cell wrapping.
TileProjection tile_projection_from_pi(const TileProjection& pi, const GradedOperator& aligned_m2);

struct PairEntry {
  int mu = 0, nu = 0;
  int rank = 0;
  GradedOperator left_factor;   // unit, gauge-fixed; valid when rank == 1
  GradedOperator right_factor;
  cplx scale = 0;
};

struct FactorisationReport {
  bool satisfied = false;
  SchmidtDecomposition schmidt_in;   // of P
  SchmidtDecomposition schmidt_out;  // of G^{-1} conjugate of P
  std::vector<PairEntry> pair_table;
  bool all_rank_one = false;
  bool consistent = false;           // left factor depends only on mu, right only on nu
  double reconstruction_residual = 0;
};

FactorisationReport check_factorisation(const GGate& g, const TileProjection& p);

struct SupportFactorReport {
  int dim_m = 0, dim_n = 0, dim_mt = 0, dim_nt = 0;
  bool preserved = false;
};

SupportFactorReport support_algebra_factor_test(const GGate& g, const TileProjection& p);

struct FactorPreservingForm {
  int swap_bit = 0;
  GradedOperator u1, u2;  // one-cell unitaries
  double nu = 0;
  int n = 0;
  int a = 0;
  double reconstruction_error = 0;
};

// Normal form of a factorisation-preserving two-cell gate, or nullopt when
// the gate does not preserve factorised elements.
std::optional<FactorPreservingForm> classify_factor_preserving(const GradedOperator& f);

// If conjugation by G maps A(x)I -> I(x)A~ and I(x)B -> B~(x)I, G is a swap
// up to local unitaries; returns them.
std::optional<std::pair<GradedOperator, GradedOperator>> detect_shift_renorm(const GGate& g);

// Precondition [G, swap] = 0 (throws otherwise); verifies G^2(P) = P and the
// factorisation of the joined algebra M(x)N v N(x)M.
bool swap_commuting_check(const GGate& g, const TileProjection& p);

}  // namespace fca
