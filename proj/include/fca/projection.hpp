#pragma once

#include <string>

#include "fca/graded_op.hpp"

namespace fca {

// Even projection on a tile of cells, kept as a string sum.
struct TileProjection {
  CellLayout tile;  // tile_cells cells, single mode each
  GradedOperator p;
  int rank = 0;
};

// Checks P^2 = P, P = P^dag, evenness, and integer rank; throws otherwise.
TileProjection make_tile_projection(const GradedOperator& p, int tile_cells,
                                    double tol = 1e-10);

enum class NamedProjection { Pe, Po, PL, PR, PiX, PiY };

// Table projections on a two-cell tile. `c` selects |c><c| for PL/PR;
// `sign` (+1/-1) selects the branch of PiX/PiY.
TileProjection named_projection(NamedProjection which, int c = 0, int sign = +1);

// Parse "Pe", "Po", "PL0", "PL1", "PR0", "PR1", "PiX+", "PiX-", "PiY+",
// "PiY-" or an operator literal on two cells.
TileProjection parse_projection(const std::string& text);
std::string projection_name(NamedProjection which, int c, int sign);

}  // namespace fca
