#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fca/fca_spec.hpp"
#include "fca/projection.hpp"
#include "fca/renorm.hpp"

namespace fca {

enum class FlowFamily { SW, Forking, Shift, MajoranaShift, CellwiseOnly, Unclassified };

// A point of the renormalisation flow: a classified automaton with reduced
// parameters (angles in [0, 2pi), cell-wise kind recorded where it applies).
struct FlowPoint {
  FlowFamily family = FlowFamily::Unclassified;
  double phi = 0;
  double theta = 0;
  CellwiseKind cellwise = CellwiseKind::EvenPhase;
  int dir = 0;  // shifts / Majorana shifts

  FlowPoint reduced() const;
  bool same_as(const FlowPoint& o, double tol = 1e-7) const;
  std::string text() const;
};

FlowPoint flow_point_of(const FcaSpec& spec);
FcaSpec spec_of(const FlowPoint& pt);

// Classify an induced coarse automaton from its generator images. The index
// selects the family branch; parameters are extracted from image amplitudes
// and verified against the rebuilt candidate within `tol`.
FlowPoint fit_family(const InducedAutomaton& ind, double tol = 1e-7);

struct FlowStepResult {
  bool renormalisable = false;
  double residual = 0;
  FlowPoint point;              // valid when renormalisable
  CoarseParityKind coarse_parity = CoarseParityKind::Bosonic;
};

// One (2, Pi)-renormalisation step at the policy lattice size. Decides by the
// commutator criterion and classifies the induced automaton; Table data is
// never consulted.
FlowStepResult flow_step(const FlowPoint& pt, const TileProjection& proj);

enum class OrbitTerminal { FixedPoint, Cycle, NotRenormalisable, Unclassified, MaxIter };

struct FlowOrbit {
  std::vector<FlowPoint> points;  // includes the start
  OrbitTerminal terminal = OrbitTerminal::MaxIter;
  int cycle_length = 0;
  int failed_step = -1;
};

FlowOrbit flow_orbit(const FlowPoint& start, const TileProjection& proj, int max_iter);

struct SweepCell {
  std::string family_row;
  std::string projection;
  double phi = 0, theta = 0;
  bool renormalisable = false;
  bool expected_renormalisable = false;
  bool excluded = false;     // trivial / excluded parameter point
  bool pass = false;
  std::string fitted;
  std::string expected;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  int passed = 0, failed = 0;
  std::string to_json() const;
  std::string to_text() const;
};

// Grid sweep of every classified family row against the table projections;
// grid points are offset by pi/16 to avoid the excluded values.
SweepReport table_sweep(int grid, int threads = 0);

std::string flow_family_name(FlowFamily f);

}  // namespace fca
