#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "fca/graded_op.hpp"
#include "fca/layout.hpp"

namespace fca {

using Dense = Eigen::MatrixXcd;
using DenseVec = Eigen::VectorXcd;

constexpr int kDenseModeCap = 16;

// Explicit matrix in the chain-ordered (Jordan-Wigner) occupation basis.
// Mode 0 is the most significant bit of the basis index.
struct DenseOperator {
  int mode_count = 0;
  Dense mat;

  int64_t dim() const { return int64_t(1) << mode_count; }
};

namespace detail {

// Action of a canonical (phase 0) string on basis state |b>.
// Returns the target state and accumulates the i^k coefficient.
struct StringAction {
  int64_t target;
  int phase_exp;  // mod 4
};

inline StringAction string_on_basis(int modes, uint64_t mask, int64_t b) {
  StringAction r{b, 0};
  // Apply generators in descending index order (rightmost factor acts first).
  for (int m = modes - 1; m >= 0; m--) {
    uint64_t pair = (mask >> (2 * m)) & 3;
    if (!pair) continue;
    // chain sign over modes < m
    int chain = 0;
    for (int p = 0; p < m; p++) chain += int((r.target >> (modes - 1 - p)) & 1);
    int64_t bit = int64_t(1) << (modes - 1 - m);
    // gamma_{2m+1} (Y) first if both present
    if (pair & 2) {
      r.phase_exp += 2 * chain;
      r.phase_exp += (r.target & bit) ? 3 : 1;  // Y|1> = -i|0>, Y|0> = i|1>
      r.target ^= bit;
    }
    if (pair & 1) {
      r.phase_exp += 2 * chain;  // chain unchanged below mode m by the flip above
      r.target ^= bit;
    }
    r.phase_exp &= 3;
  }
  return r;
}

}  // namespace detail

inline void check_dense_cap(const CellLayout& lay) {
  if (lay.modes() > kDenseModeCap)
    throw std::invalid_argument("dense representation capped at " +
                                std::to_string(kDenseModeCap) + " modes");
}

inline Dense to_dense(const GradedOperator& o, const CellLayout& lay) {
  if (o.width() != lay.width()) throw std::invalid_argument("to_dense: width mismatch");
  check_dense_cap(lay);
  int64_t d = lay.dim();
  Dense m = Dense::Zero(d, d);
  for (auto& [mask, amp] : o.terms()) {
    for (int64_t b = 0; b < d; b++) {
      auto act = detail::string_on_basis(lay.modes(), mask, b);
      m(act.target, b) += amp * i_power(act.phase_exp);
    }
  }
  return m;
}

// Expand a dense matrix over the string basis; cost 8^modes, so meant for
// small windows (tiles, coarse lattices).
inline GradedOperator from_dense(const Dense& m, const CellLayout& lay) {
  if (m.rows() != lay.dim() || m.cols() != lay.dim())
    throw std::invalid_argument("from_dense: dimension mismatch");
  if (lay.modes() > 10) throw std::invalid_argument("from_dense capped at 10 modes");
  int64_t d = lay.dim();
  GradedOperator o(lay.width());
  uint64_t nstrings = uint64_t(1) << lay.width();
  for (uint64_t mask = 0; mask < nstrings; mask++) {
    cplx c = 0;
    for (int64_t b = 0; b < d; b++) {
      auto act = detail::string_on_basis(lay.modes(), mask, b);
      c += std::conj(i_power(act.phase_exp)) * m(act.target, b);
    }
    c /= double(d);
    if (std::abs(c) > kPruneTol) o.add_mask(mask, c);
  }
  return o;
}

// M <- dense(op) * M without forming dense(op); op is a sparse string sum.
inline void apply_left(Dense& m, const GradedOperator& op, const CellLayout& lay) {
  int64_t d = lay.dim();
  if (m.rows() != d) throw std::invalid_argument("apply_left: dimension mismatch");
  Dense out = Dense::Zero(m.rows(), m.cols());
  std::vector<int64_t> to(static_cast<size_t>(d));
  std::vector<cplx> cf(static_cast<size_t>(d));
  for (auto& [mask, amp] : op.terms()) {
    for (int64_t b = 0; b < d; b++) {
      auto act = detail::string_on_basis(lay.modes(), mask, b);
      to[size_t(b)] = act.target;
      cf[size_t(b)] = amp * i_power(act.phase_exp);
    }
    for (Eigen::Index j = 0; j < m.cols(); j++)
      for (int64_t b = 0; b < d; b++) out(to[size_t(b)], j) += cf[size_t(b)] * m(b, j);
  }
  m.swap(out);
}

inline DenseVec apply_vec(const GradedOperator& op, const CellLayout& lay, const DenseVec& v) {
  int64_t d = lay.dim();
  DenseVec out = DenseVec::Zero(d);
  for (auto& [mask, amp] : op.terms()) {
    for (int64_t b = 0; b < d; b++) {
      auto act = detail::string_on_basis(lay.modes(), mask, b);
      out(act.target) += amp * i_power(act.phase_exp) * v(b);
    }
  }
  return out;
}

// Heisenberg conjugation U^dag O U.
inline Dense conjugate(const Dense& u, const Dense& o) { return u.adjoint() * o * u; }

inline double unitarity_defect(const Dense& u) {
  return (u.adjoint() * u - Dense::Identity(u.rows(), u.cols())).norm();
}

// Largest singular value by power iteration on A^dag A with a fixed seed;
// avoids a full SVD at dimensions in the thousands.
inline double spectral_norm_matvec(
    const std::function<DenseVec(const DenseVec&)>& apply,
    const std::function<DenseVec(const DenseVec&)>& apply_adj, int64_t dim,
    int max_iter = 300, double rel_tol = 1e-9) {
  std::mt19937 rng(12345);
  std::normal_distribution<double> nd;
  DenseVec v(dim);
  for (int64_t i = 0; i < dim; i++) v(i) = cplx(nd(rng), nd(rng));
  v.normalize();
  double prev = 0;
  for (int it = 0; it < max_iter; it++) {
    DenseVec w = apply_adj(apply(v));
    double lam = w.norm();
    if (lam < 1e-300) return 0.0;
    v = w / lam;
    double sigma = std::sqrt(lam);
    if (it > 2 && std::abs(sigma - prev) <= rel_tol * std::max(sigma, 1e-30)) return sigma;
    prev = sigma;
  }
  return prev;
}

inline double spectral_norm(const Dense& a, int max_iter = 300, double rel_tol = 1e-9) {
  if (a.rows() <= 256) {
    Eigen::JacobiSVD<Dense> svd(a);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  }
  return spectral_norm_matvec([&](const DenseVec& v) { return DenseVec(a * v); },
                              [&](const DenseVec& v) { return DenseVec(a.adjoint() * v); },
                              a.rows(), max_iter, rel_tol);
}

// Coefficients of O on strings supported inside `window` (other cells
// identity); also reports how much of O lives outside that window.
struct LocalExpansion {
  GradedOperator op;     // on the window layout
  double outside_norm;   // HS norm of the remainder
};

inline LocalExpansion extract_local(const Dense& o, const CellLayout& lay,
                                    const std::vector<int>& window) {
  CellLayout wlay{int(window.size()), lay.modes_per_cell};
  int64_t d = lay.dim();
  double total2 = o.squaredNorm() / double(d);
  GradedOperator out(wlay.width());
  double captured2 = 0;
  uint64_t nstrings = uint64_t(1) << wlay.width();
  std::vector<int> wcells(window.begin(), window.end());
  for (uint64_t wmask = 0; wmask < nstrings; wmask++) {
    GradedOperator ws = GradedOperator::from_string({wlay.width(), wmask, 0});
    GradedOperator gs = embed(ws, wcells, wlay, lay);
    // gs has a single term; compute <gs, O>_HS directly
    auto [gmask, gamp] = *gs.terms().begin();
    cplx c = 0;
    for (int64_t b = 0; b < d; b++) {
      auto act = detail::string_on_basis(lay.modes(), gmask, b);
      c += std::conj(gamp * i_power(act.phase_exp)) * o(act.target, b);
    }
    c /= double(d);
    if (std::abs(c) > kPruneTol) out.add_mask(wmask, c);
    captured2 += std::norm(c);
  }
  double rem = total2 - captured2;
  return {out, std::sqrt(std::max(0.0, rem))};
}

}  // namespace fca
