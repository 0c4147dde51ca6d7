#pragma once

#include <vector>

#include "fca/fca_spec.hpp"
#include "fca/graded_op.hpp"
#include "fca/wrapped.hpp"

namespace fca {

// Linear dimension of the smallest graded algebra generated by the one-sided
// expansion coefficients of `images` over the string basis of the cells NOT
// in `side_cells`. Throws if an image is not supported on the window layout.
int support_algebra_dim(const std::vector<GradedOperator>& images, const CellLayout& window,
                        const std::vector<int>& side_cells, double tol = 1e-8);

// Information-flux index of a nearest-neighbour single-mode FCA: the support
// of T(A_0 (x) A_1) on the pair of cells the flow moves toward, normalized by
// the cell dimension. Values land in {1/2, 1/sqrt2, 1, sqrt2, 2}.
double index_of(const FcaSpec& spec);
double index_from_images(const TransitionImages& ti);

}  // namespace fca
