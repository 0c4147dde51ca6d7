#include <doctest.h>

#include <numbers>

#include "fca/flow.hpp"

using namespace fca;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("flow point reduction and equality") {
  FlowPoint a{FlowFamily::SW, 2 * kPi + 0.4, kPi / 2 + 0.1, CellwiseKind::EvenPhase, 0};
  FlowPoint r = a.reduced();
  CHECK(r.phi == doctest::Approx(0.4));
  CHECK(r.theta == doctest::Approx(0.1));  // cell-wise angle mod pi/2
  CHECK(a.same_as(r));

  FlowPoint b{FlowFamily::SW, 0.4, 0.1 + kPi / 2, CellwiseKind::EvenPhase, 0};
  CHECK(a.same_as(b));
  FlowPoint c{FlowFamily::SW, 0.4, 0.3, CellwiseKind::EvenPhase, 0};
  CHECK(!a.same_as(c));
  FlowPoint d{FlowFamily::SW, 0.4, 0.1, CellwiseKind::OddRotation, 0};
  CHECK(!a.same_as(d));
}

TEST_CASE("spec round trip") {
  FlowPoint pt{FlowFamily::Forking, 0, 0.7, CellwiseKind::OddRotation, 0};
  FcaSpec s = spec_of(pt);
  CHECK(flow_point_of(s).same_as(pt));
  CHECK(flow_point_of(SwFamily{0, {CellwiseKind::EvenPhase, 0.2}}).family ==
        FlowFamily::CellwiseOnly);
  FlowPoint un;
  un.family = FlowFamily::Unclassified;
  CHECK_THROWS_AS(spec_of(un), std::invalid_argument);
}

TEST_CASE("flow steps reproduce the classified coarse automata") {
  // SW even: phi' = 2 phi through Pe, -2 phi through Po
  FlowPoint sw{FlowFamily::SW, 0.9, 0.3, CellwiseKind::EvenPhase, 0};
  FlowStepResult pe = flow_step(sw, parse_projection("Pe"));
  REQUIRE(pe.renormalisable);
  CHECK(pe.point.family == FlowFamily::SW);
  CHECK(pe.point.phi == doctest::Approx(1.8));
  CHECK(pe.coarse_parity == CoarseParityKind::Bosonic);

  FlowStepResult po = flow_step(sw, parse_projection("Po"));
  REQUIRE(po.renormalisable);
  CHECK(po.point.phi == doctest::Approx(2 * kPi - 1.8));

  FlowStepResult pr = flow_step(sw, parse_projection("PR0"));
  REQUIRE(pr.renormalisable);
  CHECK(pr.point.family == FlowFamily::CellwiseOnly);
  CHECK(pr.coarse_parity == CoarseParityKind::Graded);

  CHECK(!flow_step(sw, parse_projection("PiX+")).renormalisable);

  // forking quarter-turn points renormalise to shifts
  FlowPoint fk{FlowFamily::Forking, 0, kPi / 4, CellwiseKind::EvenPhase, 0};
  FlowStepResult fr = flow_step(fk, parse_projection("PR1"));
  REQUIRE(fr.renormalisable);
  CHECK(fr.point.family == FlowFamily::Shift);
  CHECK(fr.point.dir == -1);
  FlowStepResult fl = flow_step(fk, parse_projection("PL0"));
  REQUIRE(fl.renormalisable);
  CHECK(fl.point.dir == 1);

  // Majorana shift through PiX becomes a plain shift; PiY bosonizes it away
  FlowPoint ms{FlowFamily::MajoranaShift, 0, kPi / 2, CellwiseKind::EvenPhase, 1};
  FlowStepResult mx = flow_step(ms, parse_projection("PiX-"));
  REQUIRE(mx.renormalisable);
  CHECK(mx.point.family == FlowFamily::Shift);
  CHECK(mx.point.dir == 1);
  FlowStepResult my = flow_step(ms, parse_projection("PiY+"));
  REQUIRE(my.renormalisable);
  CHECK(my.point.family == FlowFamily::CellwiseOnly);

  // shifts are fixed under any projection, including the bosonizing ones
  FlowPoint sh{FlowFamily::Shift, 0, 0, CellwiseKind::EvenPhase, 1};
  FlowStepResult ss = flow_step(sh, parse_projection("Pe"));
  REQUIRE(ss.renormalisable);
  CHECK(ss.point.family == FlowFamily::Shift);
  CHECK(ss.point.dir == 1);
}

TEST_CASE("orbits terminate in fixed points or failures") {
  // the nontrivial fixed line of the Po flow sits at phi = +-2 pi/3
  FlowPoint start{FlowFamily::SW, 2 * kPi / 3, 2 * kPi / 3, CellwiseKind::EvenPhase, 0};
  FlowOrbit orb = flow_orbit(start, parse_projection("Po"), 8);
  CHECK(orb.terminal == OrbitTerminal::FixedPoint);
  CHECK(orb.cycle_length == 1);
  const FlowPoint& fp = orb.points.back();
  bool on_line = std::abs(fp.phi - 2 * kPi / 3) < 1e-7 || std::abs(fp.phi - 4 * kPi / 3) < 1e-7;
  CHECK(on_line);
  FlowStepResult again = flow_step(fp, parse_projection("Po"));
  REQUIRE(again.renormalisable);
  CHECK(again.point.same_as(fp));

  // shifts are immediate fixed points
  FlowOrbit sh = flow_orbit({FlowFamily::Shift, 0, 0, CellwiseKind::EvenPhase, 1},
                            parse_projection("PR0"), 4);
  CHECK(sh.terminal == OrbitTerminal::FixedPoint);
  CHECK(sh.points.size() == 2);

  // non-renormalisable start
  FlowOrbit bad = flow_orbit({FlowFamily::Forking, 0, kPi / 8, CellwiseKind::EvenPhase, 0},
                             parse_projection("Pe"), 4);
  CHECK(bad.terminal == OrbitTerminal::NotRenormalisable);
  CHECK(bad.failed_step == 0);
}

TEST_CASE("orbit of the generic Po flow walks into the fixed line") {
  FlowOrbit orb = flow_orbit({FlowFamily::SW, kPi / 3, 0, CellwiseKind::EvenPhase, 0},
                             parse_projection("Po"), 8);
  CHECK(orb.terminal == OrbitTerminal::FixedPoint);
  // phi: pi/3 -> -2pi/3 = 4pi/3, then fixed
  CHECK(orb.points[1].phi == doctest::Approx(4 * kPi / 3));
}
