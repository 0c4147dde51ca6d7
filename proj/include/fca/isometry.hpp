#pragma once

#include <vector>

#include "fca/dense.hpp"
#include "fca/projection.hpp"

namespace fca {

// Isometry from the coarse cell algebra into the range of a tile projection.
// Columns of w are a parity-definite orthonormal basis of range(P), even
// vectors first, each with its dominant amplitude made real positive.
struct Isometry {
  CellLayout tile;
  int rank = 0;
  Dense w;                    // 2^{tile modes} x rank
  std::vector<int> parities;  // grade of each basis vector
  int even_count = 0;

  bool graded() const { return even_count > 0 && even_count < rank; }
  // Coarse parity operator W^dag Q_tile W, diagonal +-1.
  Dense coarse_parity() const {
    Dense q = Dense::Zero(rank, rank);
    for (int i = 0; i < rank; i++) q(i, i) = parities[size_t(i)] ? -1.0 : 1.0;
    return q;
  }
};

Isometry build_isometry(const TileProjection& p);

// Tensor-chain isometry over `tiles` repetitions.
Dense global_isometry(const Isometry& e, int tiles);

// E^dag: compress a fine-lattice operator to the coarse lattice.
Dense coisometry_apply(const Isometry& e, const Dense& fine, int tiles);

// E: embed a coarse-lattice operator into the fine lattice.
Dense isometry_apply(const Isometry& e, const Dense& coarse, int tiles);

}  // namespace fca
