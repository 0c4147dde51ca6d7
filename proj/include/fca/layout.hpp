#pragma once

#include <cstdint>
#include <stdexcept>

namespace fca {

// Chain of `cells` cells with `modes_per_cell` fermionic modes each,
// numbered cell-major. Mode m carries the generators gamma_{2m}, gamma_{2m+1}.
struct CellLayout {
  int cells = 0;
  int modes_per_cell = 1;

  int modes() const { return cells * modes_per_cell; }
  int width() const { return 2 * modes(); }
  int64_t dim() const { return int64_t(1) << modes(); }

  int mode_index(int cell, int k = 0) const {
    if (cell < 0 || cell >= cells || k < 0 || k >= modes_per_cell)
      throw std::invalid_argument("cell/mode out of range");
    return cell * modes_per_cell + k;
  }
  // gamma index of the X (t=0) or Y (t=1) generator of mode (cell, k)
  int majorana_index(int cell, int k, int t) const { return 2 * mode_index(cell, k) + t; }

  int cell_of_mode(int m) const { return m / modes_per_cell; }
  int cell_of_gamma(int j) const { return cell_of_mode(j / 2); }

  bool operator==(const CellLayout& o) const {
    return cells == o.cells && modes_per_cell == o.modes_per_cell;
  }
};

}  // namespace fca
