#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fca {

// A signed, ordered product of Majorana generators gamma_j, j in [0, width).
// Canonical form: generators in ascending index order (encoded as a bit mask,
// each generator appearing at most once) times an overall factor i^phase_exp.
struct MajoranaString {
  int width = 0;
  uint64_t mask = 0;
  uint8_t phase_exp = 0;  // mod 4

  int grade() const { return std::popcount(mask) & 1; }

  bool operator==(const MajoranaString& o) const {
    return width == o.width && mask == o.mask && phase_exp == o.phase_exp;
  }
};

inline MajoranaString identity_string(int width) { return {width, 0, 0}; }

inline MajoranaString gamma_string(int width, int j) {
  if (j < 0 || j >= width) throw std::invalid_argument("gamma index out of range");
  return {width, uint64_t(1) << j, 0};
}

// Number of transpositions needed to move every generator of `b` left past
// the generators of `a` that have a strictly larger index.
inline int merge_transpositions(uint64_t a, uint64_t b) {
  int count = 0;
  uint64_t rest = b;
  while (rest) {
    int j = std::countr_zero(rest);
    rest &= rest - 1;
    count += std::popcount(a >> (j + 1));
  }
  return count;
}

// Product a*b, reordered to canonical ascending form. gamma_j^2 = I collapses
// repeated generators; every anticommutation contributes a factor -1 = i^2.
inline MajoranaString mul_strings(const MajoranaString& a, const MajoranaString& b) {
  if (a.width != b.width) throw std::invalid_argument("MajoranaString width mismatch");
  MajoranaString r;
  r.width = a.width;
  r.mask = a.mask ^ b.mask;
  int swaps = merge_transpositions(a.mask, b.mask);
  r.phase_exp = uint8_t((a.phase_exp + b.phase_exp + 2 * swaps) & 3);
  return r;
}

// Hermitian adjoint: reversing k generators costs k(k-1)/2 transpositions,
// and i^k conjugates to i^{-k}.
inline MajoranaString adjoint_string(const MajoranaString& s) {
  MajoranaString r = s;
  int k = std::popcount(s.mask);
  int ph = -int(s.phase_exp) + k * (k - 1);
  r.phase_exp = uint8_t(((ph % 4) + 4) & 3);
  return r;
}

inline std::string to_text(const MajoranaString& s) {
  static const char* ph[4] = {"", "i*", "-", "-i*"};
  std::string out = ph[s.phase_exp];
  if (s.mask == 0) return out + "1";
  uint64_t rest = s.mask;
  while (rest) {
    int j = std::countr_zero(rest);
    rest &= rest - 1;
    out += "g" + std::to_string(j);
  }
  return out;
}

}  // namespace fca
