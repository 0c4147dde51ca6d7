#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <vector>

#include "fca/graded_op.hpp"

namespace fca {

constexpr double kSchmidtRelTol = 1e-8;

struct SchmidtPair {
  GradedOperator left;
  GradedOperator right;
  double weight = 0;
};

struct SchmidtDecomposition {
  int left_cells = 0;
  CellLayout left_layout, right_layout;
  std::vector<SchmidtPair> pairs;  // weights descending, factors HS-orthonormal

  GradedOperator reconstruct() const {
    CellLayout joint{left_layout.cells + right_layout.cells, left_layout.modes_per_cell};
    GradedOperator acc(joint.width());
    for (auto& p : pairs) {
      GradedOperator t = graded_tensor(p.left, left_layout, p.right, right_layout);
      t *= p.weight;
      acc += t;
    }
    return acc;
  }
};

namespace detail {

// Every canonical string splits without sign into (left part)*(right part);
// the split makes the string basis a product basis for the bipartition.
struct SectorData {
  std::vector<uint64_t> lmasks, rmasks;
  Eigen::MatrixXcd m;
};

inline std::vector<SectorData> split_sectors(const GradedOperator& o, const CellLayout& lay,
                                             int left_cells) {
  int wl = 2 * left_cells * lay.modes_per_cell;
  uint64_t lsel = (wl == 64) ? ~uint64_t(0) : ((uint64_t(1) << wl) - 1);
  // sector index: g(left) + 2*g(right)
  std::vector<std::map<uint64_t, int>> lidx(4), ridx(4);
  std::vector<std::vector<std::pair<std::pair<uint64_t, uint64_t>, cplx>>> entries(4);
  for (auto& [mask, amp] : o.terms()) {
    uint64_t ml = mask & lsel;
    uint64_t mr = mask >> wl;
    int sec = (std::popcount(ml) & 1) + 2 * (std::popcount(mr) & 1);
    if (!lidx[sec].count(ml)) lidx[sec][ml] = int(lidx[sec].size());
    if (!ridx[sec].count(mr)) ridx[sec][mr] = int(ridx[sec].size());
    entries[sec].push_back({{ml, mr}, amp});
  }
  std::vector<SectorData> out;
  for (int sec = 0; sec < 4; sec++) {
    if (entries[sec].empty()) continue;
    SectorData sd;
    sd.lmasks.resize(lidx[sec].size());
    sd.rmasks.resize(ridx[sec].size());
    for (auto& [m, i] : lidx[sec]) sd.lmasks[size_t(i)] = m;
    for (auto& [m, i] : ridx[sec]) sd.rmasks[size_t(i)] = m;
    sd.m = Eigen::MatrixXcd::Zero(Eigen::Index(sd.lmasks.size()), Eigen::Index(sd.rmasks.size()));
    for (auto& [mm, amp] : entries[sec])
      sd.m(lidx[sec][mm.first], ridx[sec][mm.second]) += amp;
    out.push_back(std::move(sd));
  }
  return out;
}

// Multiply a factor by a phase so its largest-magnitude amplitude is real
// positive; ties broken by the lowest mask.
inline cplx gauge_phase(const GradedOperator& o) {
  double best = -1;
  cplx lead = 1;
  for (auto& [m, a] : o.terms()) {
    if (std::abs(a) > best + 1e-12) {
      best = std::abs(a);
      lead = a;
    }
  }
  if (best <= 0) return 1;
  return std::conj(lead) / std::abs(lead);
}

}  // namespace detail

// Parity-sector operator Schmidt decomposition across a contiguous cut.
// The decomposed operator must be parity-homogeneous so every factor comes
// out with a definite grade.
inline SchmidtDecomposition operator_schmidt(const GradedOperator& o, const CellLayout& lay,
                                             int left_cells) {
  if (o.width() != lay.width()) throw std::invalid_argument("operator_schmidt: width mismatch");
  if (left_cells <= 0 || left_cells >= lay.cells)
    throw std::invalid_argument("operator_schmidt: cut must split the layout in two");
  if (!o.is_homogeneous())
    throw std::invalid_argument("operator_schmidt: operator must have definite parity");

  SchmidtDecomposition out;
  out.left_cells = left_cells;
  out.left_layout = {left_cells, lay.modes_per_cell};
  out.right_layout = {lay.cells - left_cells, lay.modes_per_cell};

  for (auto& sd : detail::split_sectors(o, lay, left_cells)) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sd.m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    for (Eigen::Index k = 0; k < sv.size(); k++) {
      if (sv(k) <= kPruneTol) continue;
      SchmidtPair p;
      p.weight = sv(k);
      p.left = GradedOperator(out.left_layout.width());
      p.right = GradedOperator(out.right_layout.width());
      for (Eigen::Index i = 0; i < Eigen::Index(sd.lmasks.size()); i++)
        p.left.add_mask(sd.lmasks[size_t(i)], svd.matrixU()(i, k));
      for (Eigen::Index j = 0; j < Eigen::Index(sd.rmasks.size()); j++)
        p.right.add_mask(sd.rmasks[size_t(j)], std::conj(svd.matrixV()(j, k)));
      cplx ph = detail::gauge_phase(p.left);
      p.left *= ph;
      p.right *= std::conj(ph);
      out.pairs.push_back(std::move(p));
    }
  }
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const SchmidtPair& a, const SchmidtPair& b) { return a.weight > b.weight; });
  return out;
}

inline int schmidt_rank(const GradedOperator& o, const CellLayout& lay, int left_cells,
                        double rel_tol = kSchmidtRelTol) {
  auto dec = operator_schmidt(o, lay, left_cells);
  if (dec.pairs.empty()) return 0;
  double top = dec.pairs.front().weight;
  int r = 0;
  for (auto& p : dec.pairs)
    if (p.weight > rel_tol * top) r++;
  return r;
}

// If `o` factorizes as scale * (left (x) right) with unit-norm gauge-fixed
// factors, return them; otherwise nullopt. Requires homogeneous input.
struct Rank1Factors {
  GradedOperator left, right;
  cplx scale;
};

inline std::optional<Rank1Factors> rank1_factors(const GradedOperator& o, const CellLayout& lay,
                                                 int left_cells, double rel_tol = kSchmidtRelTol) {
  if (!o.is_homogeneous()) return std::nullopt;
  auto dec = operator_schmidt(o, lay, left_cells);
  if (dec.pairs.empty()) return std::nullopt;
  double top = dec.pairs.front().weight;
  for (size_t k = 1; k < dec.pairs.size(); k++)
    if (dec.pairs[k].weight > rel_tol * top) return std::nullopt;
  Rank1Factors f;
  f.left = dec.pairs.front().left;
  f.right = dec.pairs.front().right;
  cplx ph = detail::gauge_phase(f.right);
  f.right *= ph;
  f.scale = top * std::conj(ph);
  return f;
}

}  // namespace fca
