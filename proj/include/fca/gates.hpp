#pragma once

#include <cmath>

#include "fca/graded_op.hpp"

namespace fca {

// Two-cell and one-cell gate library. All gates are returned as string sums
// on their own small layout (2 cells or 1 cell, single mode each).

inline CellLayout two_cell_layout() { return {2, 1}; }
inline CellLayout one_cell_layout() { return {1, 1}; }

// C_phi = exp(i phi n (x) n), diagonal diag(1,1,1,e^{i phi}).
inline GradedOperator gate_controlled_phase(double phi) {
  CellLayout lay = two_cell_layout();
  cplx e = std::exp(cplx(0, phi));
  GradedOperator g(lay.width());
  GradedOperator z0 = majorana_z(lay, 0), z1 = majorana_z(lay, 1);
  g += (cplx(3, 0) + e) * 0.25 * GradedOperator::identity(lay.width());
  g += (cplx(1, 0) - e) * 0.25 * (z0 + z1);
  g += (e - cplx(1, 0)) * 0.25 * op_mul(z0, z1);
  return g;
}

// S_{X,Y} = exp((pi/4) X (x) Y) = (I + X (x) Y)/sqrt(2).
inline GradedOperator gate_majorana_swap() {
  CellLayout lay = two_cell_layout();
  double r = 1.0 / std::sqrt(2.0);
  GradedOperator g = r * GradedOperator::identity(lay.width());
  g += r * op_mul(majorana_x(lay, 0), majorana_y(lay, 1));
  return g;
}

// Fermionic swap: exp((pi/4) X(x)X) exp((pi/4) Y(x)Y)
//               = (I(x)I + X(x)X + Y(x)Y + Z(x)Z)/2.
inline GradedOperator gate_fermionic_swap() {
  CellLayout lay = two_cell_layout();
  GradedOperator g = 0.5 * GradedOperator::identity(lay.width());
  g += 0.5 * op_mul(majorana_x(lay, 0), majorana_x(lay, 1));
  g += 0.5 * op_mul(majorana_y(lay, 0), majorana_y(lay, 1));
  g += 0.5 * op_mul(majorana_z(lay, 0), majorana_z(lay, 1));
  return g;
}

enum class CellwiseKind { EvenPhase, OddRotation };

// Even: exp(i theta Z). Odd: cos(theta) X + sin(theta) Y.
inline GradedOperator gate_cellwise(CellwiseKind kind, double theta) {
  CellLayout lay = one_cell_layout();
  if (kind == CellwiseKind::EvenPhase) {
    GradedOperator g = cplx(std::cos(theta), 0) * GradedOperator::identity(lay.width());
    g += cplx(0, std::sin(theta)) * majorana_z(lay, 0);
    return g;
  }
  GradedOperator g = cplx(std::cos(theta), 0) * majorana_x(lay, 0);
  g += cplx(std::sin(theta), 0) * majorana_y(lay, 0);
  return g;
}

// gamma-rotation exp((pi/4) g_a g_b): conjugation sends g_a -> g_b, g_b -> -g_a.
inline GradedOperator gamma_rotation(int width, int a, int b) {
  double r = 1.0 / std::sqrt(2.0);
  GradedOperator g = r * GradedOperator::identity(width);
  MajoranaString p = mul_strings(gamma_string(width, a), gamma_string(width, b));
  g.add_mask(p.mask, r * i_power(p.phase_exp));
  return g;
}

// U^dag O U in the string algebra.
inline GradedOperator conjugate_op(const GradedOperator& u, const GradedOperator& o) {
  return op_mul(op_mul(u.adjoint(), o), u);
}

// The exact graded swap map on two single-mode cells:
// A (x) B -> (-1)^{g(A)g(B)} B (x) A. Note that conjugation by the
// fermionic-swap gate realizes this only up to a one-sided odd-sector sign.
inline GradedOperator swap_two_cells(const GradedOperator& o) {
  if (o.width() != 4) throw std::invalid_argument("swap_two_cells: two-cell operators only");
  GradedOperator out(4);
  for (auto& [m, a] : o.terms()) {
    uint64_t ml = m & 3, mr = m >> 2;
    int sign = (std::popcount(ml) & 1) && (std::popcount(mr) & 1) ? -1 : 1;
    out.add_mask((ml << 2) | mr, double(sign) * a);
  }
  return out;
}

inline bool is_unitary_op(const GradedOperator& u, double tol = 1e-10) {
  GradedOperator p = op_mul(u.adjoint(), u);
  GradedOperator d = p - GradedOperator::identity(u.width());
  return d.hs_norm() < tol;
}

}  // namespace fca
