#include <doctest.h>

#include <numbers>

#include "fca/renorm.hpp"

using namespace fca;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("table spot checks of the commutator criterion") {
  WrappedUnitary sw = build_wrapped_unitary(SwFamily{kPi / 2, {CellwiseKind::EvenPhase, 0.3}}, 10);
  RenormReport r1 = check_renormalisable(sw, parse_projection("Pe"), 2);
  CHECK(r1.verdict);
  CHECK(r1.residual < verdict_tolerance(1 << 10));
  CHECK(r1.coarse->parity == CoarseParityKind::Bosonic);
  CHECK(r1.induced_unitary.has_value());
  CHECK(r1.coarse->unitarity_defect < 1e-10);

  WrappedUnitary fk =
      build_wrapped_unitary(ForkingFamily{{CellwiseKind::EvenPhase, kPi / 8}}, 10);
  RenormReport r2 = check_renormalisable(fk, parse_projection("Pe"), 2);
  CHECK(!r2.verdict);
  CHECK(r2.residual > 1e-3);
  CHECK(!r2.induced_unitary.has_value());

  WrappedUnitary sh = build_wrapped_unitary(ShiftFamily{1}, 10);
  CHECK(check_renormalisable(sh, parse_projection("PiY-"), 2).verdict);
}

TEST_CASE("invariant product state agrees with the verdict") {
  struct Case {
    FcaSpec spec;
    const char* proj;
  };
  Case cases[] = {
      {SwFamily{kPi / 2, {CellwiseKind::EvenPhase, 0.3}}, "Pe"},
      {SwFamily{0.8, {CellwiseKind::OddRotation, 1.1}}, "PiX+"},
      {ForkingFamily{{CellwiseKind::EvenPhase, kPi / 8}}, "Po"},
      {ForkingFamily{{CellwiseKind::OddRotation, kPi / 4}}, "PR0"},
      {ShiftFamily{-1}, "PL1"},
      {MajoranaShiftFamily{1, kPi / 2}, "PiX+"},
  };
  for (auto& c : cases) {
    WrappedUnitary u = build_wrapped_unitary(c.spec, 10);
    TileProjection p = parse_projection(c.proj);
    CHECK(invariant_state_check(u, p, 2) == check_renormalisable(u, p, 2).verdict);
  }
}

TEST_CASE("induced automaton satisfies the renormalisation equation") {
  WrappedUnitary u = build_wrapped_unitary(SwFamily{1.2, {CellwiseKind::EvenPhase, 0.45}}, 10);
  InducedAutomaton ind = induced_automaton(u, parse_projection("Po"), 2);
  CHECK(ind.rank == 2);
  CHECK(ind.tiles == 5);
  CHECK(ind.equation_residual < 1e-8);
  CHECK(ind.images.has_value());

  CHECK_THROWS_AS(
      induced_automaton(build_wrapped_unitary(ForkingFamily{{CellwiseKind::EvenPhase, 0.4}}, 10),
                        parse_projection("Pe"), 2),
      std::invalid_argument);
}

TEST_CASE("full-tile projection gives a coarse cell of dimension four") {
  GradedOperator full = GradedOperator::identity(4);
  TileProjection pid = make_tile_projection(full, 2);
  WrappedUnitary u = build_wrapped_unitary(SwFamily{0.9, {CellwiseKind::EvenPhase, 0.2}}, 10);
  InducedAutomaton ind = induced_automaton(u, pid, 2);
  CHECK(ind.rank == 4);
  CHECK(!ind.images.has_value());  // family fitting is skipped for general cells
  CHECK(ind.equation_residual < 1e-8);
}

TEST_CASE("basis choice covariance") {
  WrappedUnitary u = build_wrapped_unitary(SwFamily{1.2, {CellwiseKind::EvenPhase, 0.45}}, 10);
  TileProjection po = parse_projection("Po");
  Dense un = power(u, 2).u;
  InducedAutomaton ind = induced_automaton_pow(u.layout, un, po, false);

  // compose the isometry with a coarse cell-wise unitary
  Dense v(2, 2);
  v << cplx(0.6, 0.3), cplx(-0.736, 0.0529), cplx(0.736, 0.0529), cplx(0.6, -0.3);
  Dense vv = v;
  vv.col(0).normalize();
  vv.col(1) -= vv.col(0) * (vv.col(0).adjoint() * vv.col(1));
  vv.col(1).normalize();
  Isometry twisted = ind.iso;
  twisted.w = twisted.w * vv;

  // same projection realized, so the verdict cannot change and the induced
  // automaton is the cell-wise conjugate of the original
  Dense w = global_isometry(twisted, ind.tiles);
  Dense us2 = w.adjoint() * un * w;
  CHECK(unitarity_defect(us2) < 1e-9);
  Dense vfull = Dense::Identity(1, 1);
  for (int t = 0; t < ind.tiles; t++) {
    Dense next(vfull.rows() * 2, vfull.cols() * 2);
    for (Eigen::Index i = 0; i < vfull.rows(); i++)
      for (Eigen::Index j = 0; j < vfull.cols(); j++)
        next.block(2 * i, 2 * j, 2, 2) = vfull(i, j) * vv;
    vfull.swap(next);
  }
  CHECK((us2 - vfull.adjoint() * ind.u_coarse * vfull).norm() < 1e-9);
}

TEST_CASE("wrapping independence across sizes 10 and 12") {
  CHECK(brute_force_equivalence(SwFamily{kPi / 2, {CellwiseKind::EvenPhase, 0.3}},
                                parse_projection("Pe"), 2, 10, 12));
  CHECK(brute_force_equivalence(ForkingFamily{{CellwiseKind::EvenPhase, kPi / 8}},
                                parse_projection("Pe"), 2, 10, 12));
}

TEST_CASE("precondition failures") {
  WrappedUnitary u = build_wrapped_unitary(SwFamily{0.5, {CellwiseKind::EvenPhase, 0.2}}, 10);
  TileProjection pe = parse_projection("Pe");
  CHECK_THROWS_AS(check_renormalisable(u, pe, 3), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_equivalence(SwFamily{0.5, {CellwiseKind::EvenPhase, 0.2}}, pe, 2,
                                          8, 12),
                  std::invalid_argument);
}

TEST_CASE("report serialization carries the schema fields") {
  WrappedUnitary u = build_wrapped_unitary(ShiftFamily{1}, 10);
  RenormReport rep = check_renormalisable(u, parse_projection("PR0"), 2);
  std::string j = report_to_json(rep);
  CHECK(j.find("\"verdict\"") != std::string::npos);
  CHECK(j.find("\"residual\"") != std::string::npos);
  CHECK(j.find("\"lattice_size\"") != std::string::npos);
  CHECK(j.find("\"coarse\"") != std::string::npos);
  CHECK(j.find("\"parity\"") != std::string::npos);
  CHECK(j.find("\"fit\"") != std::string::npos);
}
