#include "fca/wrapped.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fca/gates.hpp"

namespace fca {

namespace {

GradedOperator embed_bond_gate(const GradedOperator& g, int a, int b, const CellLayout& lay) {
  return embed(g, {a, b}, two_cell_layout(), lay);
}

GradedOperator embed_cell_gate(const GradedOperator& g, int c, const CellLayout& lay) {
  return embed(g, {c}, one_cell_layout(), lay);
}

// Aligned gates on (2x, 2x+1) enter the sequence first (rightmost in the
// product, first to act on kets), then the offset gates on (2x+1, 2x+2).
std::vector<GradedOperator> margolus_sequence(const GradedOperator& aligned,
                                              const GradedOperator& offset,
                                              const CellLayout& lay) {
  if (lay.cells % 2) throw std::invalid_argument("Margolus circuits need an even lattice");
  std::vector<GradedOperator> seq;
  for (int x = 0; 2 * x < lay.cells; x++)
    seq.push_back(embed_bond_gate(aligned, 2 * x, 2 * x + 1, lay));
  for (int x = 0; 2 * x < lay.cells; x++)
    seq.push_back(embed_bond_gate(offset, 2 * x + 1, (2 * x + 2) % lay.cells, lay));
  return seq;
}

// Chain of gamma rotations realizing the cycle c0 -> c1 -> ... -> ck -> c0 on
// generators. The wrap-around sign is pushed onto the whole odd sector by the
// leading single-generator gate, so the result is the ideal automorphism
// composed with the global parity twist (a physically irrelevant sign).
std::vector<GradedOperator> gamma_cycle_sequence(const std::vector<int>& cycle, int width) {
  std::vector<GradedOperator> seq;
  seq.push_back(GradedOperator::from_string(gamma_string(width, cycle.front())));
  for (size_t i = 0; i + 1 < cycle.size(); i++)
    seq.push_back(gamma_rotation(width, cycle[i], cycle[i + 1]));
  return seq;
}

std::vector<int> majorana_shift_cycle(int cells, int dir) {
  int w = 2 * cells;
  std::vector<int> cycle;
  if (dir > 0) {
    // gamma_j -> gamma_{j+1}
    cycle.resize(size_t(w));
    std::iota(cycle.begin(), cycle.end(), 0);
  } else {
    // X_x -> Y_x, Y_x -> X_{x-1}: follow 2x -> 2x+1 -> 2x-2 -> ...
    int j = 0;
    for (int i = 0; i < w; i++) {
      cycle.push_back(j);
      j = (j % 2 == 0) ? j + 1 : ((j - 3) % w + w) % w;
    }
  }
  return cycle;
}

Dense apply_sequence(const std::vector<GradedOperator>& seq, const CellLayout& lay, int passes) {
  Dense u = Dense::Identity(lay.dim(), lay.dim());
  for (int p = 0; p < passes; p++)
    for (const auto& g : seq) apply_left(u, g, lay);
  return u;
}

// Inner-unitary recovery for an automorphism given multiplicatively by its
// generator images: V = sum_k alpha(B_k) B_k^dag over B_k = (X-walk)|f><f|
// collapses to <f|U|f> U^dag, which polar decomposition normalizes.
Dense synthesize_intertwiner(const std::vector<Dense>& img_x, const std::vector<Dense>& img_y,
                             const CellLayout& lay) {
  int n = lay.modes();
  int64_t d = lay.dim();
  std::vector<Dense> img_z(static_cast<size_t>(n));
  for (int m = 0; m < n; m++) img_z[size_t(m)] = cplx(0, -1) * img_x[size_t(m)] * img_y[size_t(m)];

  for (int64_t f1 = 0; f1 < d; f1++) {
    // alpha(|f1><f1|) = prod_m (I +- alpha(Z_m))/2
    Dense mf = Dense::Identity(d, d);
    for (int m = 0; m < n; m++) {
      double sgn = ((f1 >> (n - 1 - m)) & 1) ? -1.0 : 1.0;
      mf = 0.5 * (mf + sgn * mf * img_z[size_t(m)]);
    }
    // The bra fiducial need not equal the ket one: an odd intertwiner has no
    // diagonal in any parity basis, so f2 must also range over flipped states.
    std::vector<int64_t> bras = {f1};
    for (int m = 0; m < n; m++) bras.push_back(f1 ^ (int64_t(1) << (n - 1 - m)));

    for (int64_t f2 : bras) {
      DenseVec w = mf.col(f2);
      if (w.norm() * std::sqrt(double(d)) < 1e-6) continue;

      Dense v = Dense::Zero(d, d);
      // Gray walk over the X-strings connecting f1 to every k.
      DenseVec vk = w;
      int64_t state = f1;
      double zeta = 1.0;
      v.col(f1) += zeta * vk;
      int64_t prev_gray = 0;
      for (int64_t g = 1; g < d; g++) {
        int64_t gray = g ^ (g >> 1);
        int flip = std::countr_zero(uint64_t(gray ^ prev_gray));
        prev_gray = gray;
        int mode = n - 1 - flip;  // bit position -> mode index
        vk = img_x[size_t(mode)] * vk;
        // chain sign of X_mode on the current basis state
        int chain = 0;
        for (int p = 0; p < mode; p++) chain += int((state >> (n - 1 - p)) & 1);
        zeta *= (chain % 2) ? -1.0 : 1.0;
        state ^= int64_t(1) << (n - 1 - mode);
        v.col(state) += zeta * vk;
      }

      double norm = v.norm() / std::sqrt(double(d));
      if (norm < 1e-6) continue;
      Eigen::BDCSVD<Dense> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Dense unit = svd.matrixU() * svd.matrixV().adjoint();
      return unit.adjoint();
    }
  }
  throw std::runtime_error("intertwiner synthesis failed for every fiducial state");
}

}  // namespace

int wrap_size_for(const FcaSpec& spec, int steps) {
  if (steps < 1) throw std::invalid_argument("wrap_size_for: steps must be >= 1");
  int r = spec_radius(spec);
  int base = 4 * r * steps + 1;
  int stride = steps;
  if (spec_is_margolus(spec)) stride = std::lcm(steps, 2);
  return ((base + stride - 1) / stride) * stride;
}

WrappedUnitary build_wrapped_unitary(const FcaSpec& spec, int lattice_size, bool allow_small) {
  FcaSpec s = validate_spec(spec);
  if (!allow_small && lattice_size < wrap_size_for(s, 1))
    throw std::invalid_argument("lattice below the regular-wrapping policy size");
  if (spec_is_margolus(s) && lattice_size % 2)
    throw std::invalid_argument("two-layer circuits need an even lattice");
  CellLayout lay{lattice_size, 1};
  check_dense_cap(lay);

  WrappedUnitary out;
  out.layout = lay;

  if (auto* sw = std::get_if<SwFamily>(&s)) {
    GradedOperator cphi = gate_controlled_phase(sw->phi);
    GradedOperator u1 = gate_cellwise(sw->cellwise.kind, sw->cellwise.theta);
    GradedOperator uu = graded_tensor(u1, one_cell_layout(), u1, one_cell_layout());
    out.gate_seq = margolus_sequence(op_mul(cphi, uu), cphi, lay);
  } else if (auto* fk = std::get_if<ForkingFamily>(&s)) {
    GradedOperator sxy = gate_majorana_swap();
    GradedOperator u1 = gate_cellwise(fk->cellwise.kind, fk->cellwise.theta);
    GradedOperator uu = graded_tensor(u1, one_cell_layout(), u1, one_cell_layout());
    out.gate_seq = margolus_sequence(op_mul(sxy, uu), sxy, lay);
  } else if (auto* cr = std::get_if<CircuitSpec>(&s)) {
    out.gate_seq = margolus_sequence(cr->aligned, cr->offset, lay);
  } else if (auto* sh = std::get_if<ShiftFamily>(&s)) {
    auto cyc = majorana_shift_cycle(lattice_size, sh->dir);
    auto seq = gamma_cycle_sequence(cyc, lay.width());
    out.gate_seq = seq;  // two Majorana half-steps; the parity twists cancel
    out.gate_seq.insert(out.gate_seq.end(), seq.begin(), seq.end());
  } else if (auto* ms = std::get_if<MajoranaShiftFamily>(&s)) {
    GradedOperator cw = gate_cellwise(CellwiseKind::EvenPhase, -ms->theta / 2);
    for (int c = 0; c < lattice_size; c++) out.gate_seq.push_back(embed_cell_gate(cw, c, lay));
    auto seq = gamma_cycle_sequence(majorana_shift_cycle(lattice_size, ms->dir), lay.width());
    out.gate_seq.insert(out.gate_seq.end(), seq.begin(), seq.end());
  } else if (auto* gm = std::get_if<GeneratorMapSpec>(&s)) {
    CellLayout window{2 * gm->radius + 1, 1};
    std::vector<Dense> ix(static_cast<size_t>(lattice_size)), iy(static_cast<size_t>(lattice_size));
    for (int c = 0; c < lattice_size; c++) {
      std::vector<int> cells(static_cast<size_t>(window.cells));
      for (int k = 0; k < window.cells; k++)
        cells[size_t(k)] = ((c + k - gm->radius) % lattice_size + lattice_size) % lattice_size;
      ix[size_t(c)] = to_dense(embed(gm->img_x, cells, window, lay), lay);
      iy[size_t(c)] = to_dense(embed(gm->img_y, cells, window, lay), lay);
    }
    out.u = synthesize_intertwiner(ix, iy, lay);
    return out;
  }

  out.u = apply_sequence(out.gate_seq, lay, 1);
  return out;
}

WrappedUnitary power(const WrappedUnitary& u, int n) {
  if (n < 1) throw std::invalid_argument("power: n must be >= 1");
  WrappedUnitary out;
  out.layout = u.layout;
  out.gate_seq = u.gate_seq;
  if (!u.gate_seq.empty()) {
    out.u = apply_sequence(u.gate_seq, u.layout, n);
  } else {
    out.u = u.u;
    for (int k = 1; k < n; k++) out.u = u.u * out.u;
  }
  if (n != 1) out.gate_seq.clear();
  return out;
}

TransitionImages transition_images(const WrappedUnitary& u, int radius) {
  int L = u.layout.cells;
  if (L < 2 * radius + 1) throw std::invalid_argument("lattice too small for the window");
  TransitionImages t;
  t.radius = radius;
  t.window = CellLayout{2 * radius + 1, 1};
  std::vector<int> window(static_cast<size_t>(t.window.cells));
  for (int k = 0; k < t.window.cells; k++) window[size_t(k)] = ((k - radius) % L + L) % L;

  Dense x0 = to_dense(majorana_x(u.layout, 0), u.layout);
  Dense y0 = to_dense(majorana_y(u.layout, 0), u.layout);
  auto ex = extract_local(u.act(x0), u.layout, window);
  auto ey = extract_local(u.act(y0), u.layout, window);
  t.img_x = ex.op;
  t.img_y = ey.op;
  t.locality_defect = std::max(ex.outside_norm, ey.outside_norm);
  return t;
}

namespace {

// Restrict an operator on the 5-cell window [-2,2] to [-1,1].
TransitionImages restrict_images(const GradedOperator& ix, const GradedOperator& iy) {
  CellLayout big{5, 1}, small{3, 1};
  TransitionImages t;
  t.radius = 1;
  t.window = small;
  double defect2 = 0;
  auto shrink = [&](const GradedOperator& o) {
    GradedOperator out(small.width());
    uint64_t keep = ((uint64_t(1) << 6) - 1) << 2;  // gammas of cells 1..3
    for (auto& [m, a] : o.terms()) {
      if ((m & ~keep) == 0)
        out.add_mask(m >> 2, a);
      else
        defect2 += std::norm(a);
    }
    return out;
  };
  t.img_x = shrink(ix);
  t.img_y = shrink(iy);
  t.locality_defect = std::sqrt(defect2);
  return t;
}

// String-algebra images for the Margolus families: the offset gates act
// innermost, then the aligned gates.
TransitionImages margolus_local_images(const GradedOperator& aligned,
                                       const GradedOperator& offset) {
  CellLayout win{5, 1};
  CellLayout two = two_cell_layout();
  GradedOperator off_a = embed(offset, {1, 2}, two, win);
  GradedOperator off_b = embed(offset, {3, 4}, two, win);
  GradedOperator al_a = embed(aligned, {0, 1}, two, win);
  GradedOperator al_b = embed(aligned, {2, 3}, two, win);
  auto image = [&](GradedOperator o) {
    o = conjugate_op(off_a, o);
    o = conjugate_op(off_b, o);
    o = conjugate_op(al_a, o);
    o = conjugate_op(al_b, o);
    return o;
  };
  return restrict_images(image(majorana_x(win, 2)), image(majorana_y(win, 2)));
}

}  // namespace

TransitionImages transition_images(const FcaSpec& spec) {
  FcaSpec s = validate_spec(spec);
  if (auto* sw = std::get_if<SwFamily>(&s)) {
    GradedOperator cphi = gate_controlled_phase(sw->phi);
    GradedOperator u1 = gate_cellwise(sw->cellwise.kind, sw->cellwise.theta);
    GradedOperator uu = graded_tensor(u1, one_cell_layout(), u1, one_cell_layout());
    return margolus_local_images(op_mul(cphi, uu), cphi);
  }
  if (auto* fk = std::get_if<ForkingFamily>(&s)) {
    GradedOperator sxy = gate_majorana_swap();
    GradedOperator u1 = gate_cellwise(fk->cellwise.kind, fk->cellwise.theta);
    GradedOperator uu = graded_tensor(u1, one_cell_layout(), u1, one_cell_layout());
    return margolus_local_images(op_mul(sxy, uu), sxy);
  }
  if (auto* sh = std::get_if<ShiftFamily>(&s)) {
    TransitionImages t;
    t.radius = 1;
    t.window = CellLayout{3, 1};
    t.img_x = majorana_x(t.window, 1 + sh->dir);
    t.img_y = majorana_y(t.window, 1 + sh->dir);
    return t;
  }
  if (auto* ms = std::get_if<MajoranaShiftFamily>(&s)) {
    TransitionImages t;
    t.radius = 1;
    t.window = CellLayout{3, 1};
    double c = std::cos(ms->theta), sn = std::sin(ms->theta);
    t.img_x = cplx(-sn, 0) * majorana_x(t.window, 1) + cplx(c, 0) * majorana_y(t.window, 1);
    t.img_y = cplx(c, 0) * majorana_x(t.window, 1 + ms->dir) +
              cplx(sn, 0) * majorana_y(t.window, 1 + ms->dir);
    return t;
  }
  // circuits can have a skewed two-cell causal cone; generator maps carry
  // their own radius
  int radius = std::holds_alternative<CircuitSpec>(s) ? 2 : spec_radius(s);
  WrappedUnitary u = build_wrapped_unitary(s, std::max(wrap_size_for(s, 1), 2 * radius + 2));
  return transition_images(u, radius);
}

GradedOperator family_aligned_gate(const FcaSpec& spec) {
  FcaSpec s = validate_spec(spec);
  if (auto* sw = std::get_if<SwFamily>(&s)) {
    GradedOperator u1 = gate_cellwise(sw->cellwise.kind, sw->cellwise.theta);
    return op_mul(gate_controlled_phase(sw->phi),
                  graded_tensor(u1, one_cell_layout(), u1, one_cell_layout()));
  }
  if (auto* fk = std::get_if<ForkingFamily>(&s)) {
    GradedOperator u1 = gate_cellwise(fk->cellwise.kind, fk->cellwise.theta);
    return op_mul(gate_majorana_swap(),
                  graded_tensor(u1, one_cell_layout(), u1, one_cell_layout()));
  }
  if (auto* cr = std::get_if<CircuitSpec>(&s)) return cr->aligned;
  throw std::invalid_argument("only two-layer automata have an aligned gate");
}

double transition_distance(const TransitionImages& a, const TransitionImages& b) {
  if (a.radius != b.radius) throw std::invalid_argument("transition_distance: radius mismatch");
  double best = 1e300;
  for (double eps : {1.0, -1.0}) {
    GradedOperator dx = a.img_x - eps * b.img_x;
    GradedOperator dy = a.img_y - eps * b.img_y;
    best = std::min(best, std::max(dx.hs_norm(), dy.hs_norm()));
  }
  return best;
}

}  // namespace fca
