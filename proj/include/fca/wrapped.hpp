#pragma once

#include <vector>

#include "fca/dense.hpp"
#include "fca/fca_spec.hpp"
#include "fca/layout.hpp"

namespace fca {

// Unitary realization of a wrapped FCA on a finite circular lattice.
// For circuit-built automata the embedded gate sequence is kept so that
// matrix powers can be formed by re-application instead of dense products.
struct WrappedUnitary {
  CellLayout layout;
  Dense u;
  std::vector<GradedOperator> gate_seq;  // application order; empty if synthesized

  // Conjugation image U^dag O U of a dense operator.
  Dense act(const Dense& o) const { return u.adjoint() * o * u; }
};

// Smallest lattice obeying the wrapping-regularity policy for N steps:
// the first multiple of N at least 4*r*N + 1, rounded up to an even size
// for two-layer (Margolus) automata.
int wrap_size_for(const FcaSpec& spec, int steps);

WrappedUnitary build_wrapped_unitary(const FcaSpec& spec, int lattice_size,
                                     bool allow_small = false);

WrappedUnitary power(const WrappedUnitary& u, int n);

// Conjugation images of the cell-0 generators, expanded on the window
// [-r, r] (as a (2r+1)-cell layout). Checks locality of the images.
struct TransitionImages {
  int radius = 1;
  CellLayout window;      // 2r+1 cells, source cell at index r
  GradedOperator img_x;
  GradedOperator img_y;
  double locality_defect = 0;
};

TransitionImages transition_images(const WrappedUnitary& u, int radius);
TransitionImages transition_images(const FcaSpec& spec);

// Compare two transition rules up to one global sign on the odd sector.
double transition_distance(const TransitionImages& a, const TransitionImages& b);

// Tile-aligned gate of a two-layer automaton (the composite that conjugates
// tile projections between the Schmidt-criterion form and the commutator
// form). Throws for non-Margolus specs.
GradedOperator family_aligned_gate(const FcaSpec& spec);


}  // namespace fca
