#include "fca/support.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "fca/wrapped.hpp"

namespace fca {

namespace {

// Orthonormal span tracker over the string-coefficient vectors of a small
// cell window; rank grows as operators are inserted.
class SpanBasis {
 public:
  explicit SpanBasis(double tol) : tol_(tol) {}

  bool insert(const GradedOperator& o) {
    Eigen::VectorXcd v = vectorize(o);
    double n0 = v.norm();
    if (n0 < 1e-14) return false;
    for (const auto& b : basis_) v -= (b.dot(v)) * b;
    if (v.norm() <= tol_ * n0) return false;
    v.normalize();
    basis_.push_back(v);
    return true;
  }

  int rank() const { return int(basis_.size()); }

  Eigen::VectorXcd vectorize(const GradedOperator& o) {
    if (dim_ == 0) dim_ = int64_t(1) << o.width();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
    for (auto& [m, a] : o.terms()) v(Eigen::Index(m)) = a;
    return v;
  }

 private:
  double tol_;
  int64_t dim_ = 0;
  std::vector<Eigen::VectorXcd> basis_;
};

}  // namespace

int support_algebra_dim(const std::vector<GradedOperator>& images, const CellLayout& window,
                        const std::vector<int>& side_cells, double tol) {
  uint64_t side_sel = 0;
  for (int c : side_cells) {
    if (c < 0 || c >= window.cells) throw std::invalid_argument("side cell out of range");
    for (int k = 0; k < window.modes_per_cell; k++) {
      side_sel |= uint64_t(3) << (2 * window.mode_index(c, k));
    }
  }
  CellLayout side{int(side_cells.size()), window.modes_per_cell};

  // Collect side coefficients of each image over the complement string basis.
  // The canonical mask splits into side/complement parts without sign only if
  // the side is a prefix or suffix block; handle the general case by
  // reordering through explicit string products.
  std::map<int, int> side_pos;  // window gamma index -> side gamma index
  {
    int nxt = 0;
    for (int c : side_cells)
      for (int k = 0; k < window.modes_per_cell; k++) {
        side_pos[window.majorana_index(c, k, 0)] = nxt++;
        side_pos[window.majorana_index(c, k, 1)] = nxt++;
      }
  }

  std::vector<GradedOperator> coeffs;
  for (const auto& img : images) {
    if (img.width() != window.width())
      throw std::invalid_argument("image not supported on the declared window");
    std::map<uint64_t, GradedOperator> by_comp;
    for (auto& [mask, amp] : img.terms()) {
      uint64_t mside = mask & side_sel;
      uint64_t mcomp = mask & ~side_sel;
      // s = (-1)^swaps * s_side * s_comp, the sign from reordering the
      // interleaved generators into side-then-complement form
      int swaps = merge_transpositions(mside, mcomp);
      uint64_t smask = 0;
      uint64_t rest = mside;
      while (rest) {
        int j = std::countr_zero(rest);
        rest &= rest - 1;
        smask |= uint64_t(1) << side_pos.at(j);
      }
      auto it = by_comp.find(mcomp);
      if (it == by_comp.end())
        it = by_comp.emplace(mcomp, GradedOperator(side.width())).first;
      it->second.add_mask(smask, amp * i_power(2 * swaps));
    }
    for (auto& [mc, op] : by_comp) coeffs.push_back(op);
  }

  SpanBasis span(tol);
  GradedOperator id = GradedOperator::identity(side.width());
  span.insert(id);
  std::vector<GradedOperator> members{id};
  for (auto& c : coeffs) {
    if (span.insert(c)) members.push_back(c);
    GradedOperator cd = c.adjoint();
    if (span.insert(cd)) members.push_back(cd);
  }

  // close under multiplication
  bool grew = true;
  while (grew) {
    grew = false;
    size_t n = members.size();
    for (size_t i = 0; i < n && !grew; i++)
      for (size_t j = 0; j < n; j++) {
        GradedOperator p = op_mul(members[i], members[j]);
        if (span.insert(p)) {
          members.push_back(p);
          grew = true;
          break;
        }
      }
  }
  return span.rank();
}

// The images of the cell pair (0,1) live on the window [-r, r+1]; the index
// reads off the support carried onto the pair the information flows toward.
double index_from_images(const TransitionImages& ti) {
  int r = ti.radius;
  CellLayout window{2 * r + 2, 1};
  std::vector<int> at0(static_cast<size_t>(ti.window.cells)), at1(static_cast<size_t>(ti.window.cells));
  for (int k = 0; k < ti.window.cells; k++) {
    at0[size_t(k)] = k;
    at1[size_t(k)] = k + 1;
  }
  std::vector<GradedOperator> images;
  for (const GradedOperator* img : {&ti.img_x, &ti.img_y}) {
    images.push_back(embed(*img, at0, ti.window, window));
    images.push_back(embed(*img, at1, ti.window, window));
  }
  std::vector<int> right_pair = {r + 1, r + 2};
  int dim_right = support_algebra_dim(images, window, right_pair);
  return std::sqrt(double(dim_right) / 4.0);
}

double index_of(const FcaSpec& spec) {
  if (spec_radius(spec) != 1)
    throw std::invalid_argument("index is implemented for nearest-neighbour automata");
  return index_from_images(transition_images(spec));
}

}  // namespace fca
