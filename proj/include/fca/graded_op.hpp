#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fca/layout.hpp"
#include "fca/majorana.hpp"

namespace fca {

using cplx = std::complex<double>;

constexpr double kPruneTol = 1e-12;

inline cplx i_power(int k) {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[((k % 4) + 4) & 3];
}

// Sparse complex linear combination of Majorana strings. Terms are keyed by
// the canonical mask; the i^phase of each string is folded into the amplitude,
// so the stored strings all have phase_exp = 0.
class GradedOperator {
 public:
  GradedOperator() = default;
  explicit GradedOperator(int width) : width_(width) {}

  int width() const { return width_; }
  const std::map<uint64_t, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  static GradedOperator identity(int width) {
    GradedOperator o(width);
    o.terms_[0] = 1.0;
    return o;
  }

  static GradedOperator from_string(const MajoranaString& s, cplx amp = 1.0) {
    GradedOperator o(s.width);
    o.add_string(s, amp);
    return o;
  }

  void add_string(const MajoranaString& s, cplx amp) {
    if (s.width != width_) throw std::invalid_argument("width mismatch");
    add_mask(s.mask, amp * i_power(s.phase_exp));
  }

  void add_mask(uint64_t mask, cplx amp) {
    auto it = terms_.find(mask);
    if (it == terms_.end()) {
      if (std::abs(amp) > kPruneTol) terms_[mask] = amp;
    } else {
      it->second += amp;
      if (std::abs(it->second) <= kPruneTol) terms_.erase(it);
    }
  }

  cplx coeff(uint64_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? cplx(0) : it->second;
  }

  GradedOperator& operator+=(const GradedOperator& o) {
    check_width(o);
    for (auto& [m, a] : o.terms_) add_mask(m, a);
    return *this;
  }
  GradedOperator& operator-=(const GradedOperator& o) {
    check_width(o);
    for (auto& [m, a] : o.terms_) add_mask(m, -a);
    return *this;
  }
  GradedOperator& operator*=(cplx c) {
    if (std::abs(c) <= kPruneTol) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, a] : terms_) a *= c;
    return *this;
  }

  friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
  friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
  friend GradedOperator operator*(cplx c, GradedOperator a) { return a *= c; }

  // Parity of a homogeneous operator; throws on mixed input, naming offenders.
  int parity() const {
    if (terms_.empty()) return 0;
    int g = std::popcount(terms_.begin()->first) & 1;
    for (auto& [m, a] : terms_) {
      if ((std::popcount(m) & 1) != g) {
        throw std::invalid_argument(
            "mixed-parity operator: strings " + to_text({width_, terms_.begin()->first, 0}) +
            " and " + to_text({width_, m, 0}) + " have different grades");
      }
    }
    return g;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int g = std::popcount(terms_.begin()->first) & 1;
    for (auto& [m, a] : terms_)
      if ((std::popcount(m) & 1) != g) return false;
    return true;
  }

  // Normalized trace: the amplitude of the identity string.
  cplx tracial_state() const { return coeff(0); }

  GradedOperator adjoint() const {
    GradedOperator r(width_);
    for (auto& [m, a] : terms_) {
      MajoranaString s{width_, m, 0};
      MajoranaString sd = adjoint_string(s);
      r.add_mask(sd.mask, std::conj(a) * i_power(sd.phase_exp));
    }
    return r;
  }

  // Hilbert-Schmidt inner product <a,b> = Tr(a^dag b)/dim; strings are an
  // orthonormal basis for it.
  friend cplx hs_inner(const GradedOperator& a, const GradedOperator& b) {
    a.check_width(b);
    cplx s = 0;
    const GradedOperator* small = a.terms_.size() <= b.terms_.size() ? &a : &b;
    const GradedOperator* big = small == &a ? &b : &a;
    for (auto& [m, amp] : small->terms_) {
      cplx other = big->coeff(m);
      s += (small == &a) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return s;
  }

  double hs_norm() const {
    double s = 0;
    for (auto& [m, a] : terms_) s += std::norm(a);
    return std::sqrt(s);
  }

  void check_width(const GradedOperator& o) const {
    if (o.width_ != width_) throw std::invalid_argument("GradedOperator width mismatch");
  }

 private:
  int width_ = 0;
  std::map<uint64_t, cplx> terms_;
};

inline GradedOperator op_mul(const GradedOperator& a, const GradedOperator& b) {
  a.check_width(b);
  GradedOperator r(a.width());
  for (auto& [ma, ca] : a.terms()) {
    MajoranaString sa{a.width(), ma, 0};
    for (auto& [mb, cb] : b.terms()) {
      MajoranaString p = mul_strings(sa, {b.width(), mb, 0});
      r.add_mask(p.mask, ca * cb * i_power(p.phase_exp));
    }
  }
  return r;
}

inline GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
  return op_mul(a, b);
}

// ab - (-1)^{g(a)g(b)} ba for homogeneous a, b.
inline GradedOperator op_graded_commutator(const GradedOperator& a, const GradedOperator& b) {
  int ga = a.parity();
  int gb = b.parity();
  GradedOperator ab = op_mul(a, b);
  GradedOperator ba = op_mul(b, a);
  return (ga != 0 && gb != 0) ? ab + ba : ab - ba;
}

inline int parity_of(const GradedOperator& o) { return o.parity(); }
inline cplx tracial_state(const GradedOperator& o) { return o.tracial_state(); }

// Single-cell generators promoted to a layout.
inline GradedOperator majorana_x(const CellLayout& lay, int cell, int k = 0) {
  return GradedOperator::from_string(gamma_string(lay.width(), lay.majorana_index(cell, k, 0)));
}
inline GradedOperator majorana_y(const CellLayout& lay, int cell, int k = 0) {
  return GradedOperator::from_string(gamma_string(lay.width(), lay.majorana_index(cell, k, 1)));
}
// Z = -i X Y
inline GradedOperator majorana_z(const CellLayout& lay, int cell, int k = 0) {
  GradedOperator o = op_mul(majorana_x(lay, cell, k), majorana_y(lay, cell, k));
  return cplx(0, -1) * o;
}

// Parity operator of a cell set: product of Z over every mode.
inline GradedOperator parity_operator(const CellLayout& lay, const std::vector<int>& cells) {
  GradedOperator q = GradedOperator::identity(lay.width());
  for (int c : cells)
    for (int k = 0; k < lay.modes_per_cell; k++) q = op_mul(q, majorana_z(lay, c, k));
  return q;
}

inline GradedOperator parity_operator(const CellLayout& lay) {
  std::vector<int> all(lay.cells);
  for (int c = 0; c < lay.cells; c++) all[c] = c;
  return parity_operator(lay, all);
}

// Relabel an operator on `source` cells into `target` layout, sending source
// cell c to target cell source_cells[c]. Signs are produced by re-multiplying
// the relabeled generators in their original order.
inline GradedOperator embed(const GradedOperator& o, const std::vector<int>& source_cells,
                            const CellLayout& source, const CellLayout& target) {
  if (int(source_cells.size()) != source.cells)
    throw std::invalid_argument("embed: cell map size must match source layout");
  if (source.modes_per_cell != target.modes_per_cell)
    throw std::invalid_argument("embed: modes per cell must match");
  uint64_t seen = 0;
  for (int c : source_cells) {
    if (c < 0 || c >= target.cells) throw std::invalid_argument("embed: target cell out of range");
    if (seen & (uint64_t(1) << c)) throw std::invalid_argument("embed: overlapping target cells");
    seen |= uint64_t(1) << c;
  }
  GradedOperator r(target.width());
  for (auto& [mask, amp] : o.terms()) {
    MajoranaString acc = identity_string(target.width());
    uint64_t rest = mask;
    while (rest) {
      int j = std::countr_zero(rest);
      rest &= rest - 1;
      int cell = source.cell_of_gamma(j);
      int within = j - 2 * source.mode_index(cell, 0);
      int k = within / 2;
      int t = within % 2;
      int jt = target.majorana_index(source_cells[size_t(cell)], k, t);
      acc = mul_strings(acc, gamma_string(target.width(), jt));
    }
    r.add_mask(acc.mask, amp * i_power(acc.phase_exp));
  }
  return r;
}

// Graded tensor product realized as ordered embedding: a on the first
// a_cells cells, b on the rest.
inline GradedOperator graded_tensor(const GradedOperator& a, const CellLayout& la,
                                    const GradedOperator& b, const CellLayout& lb) {
  CellLayout joint{la.cells + lb.cells, la.modes_per_cell};
  std::vector<int> ca(la.cells), cb(lb.cells);
  for (int i = 0; i < la.cells; i++) ca[i] = i;
  for (int i = 0; i < lb.cells; i++) cb[i] = la.cells + i;
  return op_mul(embed(a, ca, la, joint), embed(b, cb, lb, joint));
}

}  // namespace fca
