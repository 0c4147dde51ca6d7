// fcar: build wrapped fermionic cellular automata, decide renormalisability,
// compute indices, iterate the renormalisation flow, and run the table sweep.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "fca/fdfc.hpp"
#include "fca/flow.hpp"
#include "fca/literals.hpp"
#include "fca/renorm.hpp"
#include "fca/schmidt.hpp"
#include "fca/support.hpp"

using namespace fca;
using json = nlohmann::ordered_json;

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_fca_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }
  return arg;
}

json point_json(const FlowPoint& p) {
  json j;
  j["family"] = flow_family_name(p.family);
  if (p.family == FlowFamily::Shift || p.family == FlowFamily::MajoranaShift) j["dir"] = p.dir;
  if (p.family == FlowFamily::SW) j["phi"] = fmt12(p.phi);
  if (p.family == FlowFamily::SW || p.family == FlowFamily::Forking ||
      p.family == FlowFamily::CellwiseOnly) {
    j["theta"] = fmt12(p.theta);
    j["cellwise"] = p.cellwise == CellwiseKind::EvenPhase ? "even_phase" : "odd_rotation";
  }
  if (p.family == FlowFamily::MajoranaShift) j["theta"] = fmt12(p.theta);
  return j;
}

struct CommonOpts {
  std::string fca_arg;
  std::string proj_arg = "Pe";
  int steps = 2;
  int size = 0;
  std::string out = "json";
  bool unsafe_wrapping = false;
};

int resolve_size(const FcaSpec& spec, const CommonOpts& o) {
  int policy = wrap_size_for(spec, o.steps);
  if (o.size == 0) return policy;
  if (o.size < policy && !o.unsafe_wrapping)
    throw std::invalid_argument("requested lattice below the wrapping policy (" +
                                std::to_string(policy) + " cells); pass --unsafe-wrapping");
  return o.size;
}

int run_check(const CommonOpts& o, bool with_fit) {
  FcaSpec spec = spec_from_json_text(read_fca_arg(o.fca_arg));
  TileProjection proj = theorem_tile_projection(spec, parse_projection(o.proj_arg));
  int size = resolve_size(spec, o);
  WrappedUnitary u = build_wrapped_unitary(spec, size, o.unsafe_wrapping);
  Dense un = power(u, o.steps).u;
  RenormReport rep = check_renormalisable_pow(u.layout, un, proj, o.steps);

  bool fit_warning = false;
  if (rep.verdict && with_fit) {
    InducedAutomaton ind = induced_automaton_pow(u.layout, un, proj, true);
    FlowPoint pt = fit_family(ind);
    if (pt.family == FlowFamily::Unclassified) {
      fit_warning = true;
    } else {
      rep.fit_json = point_json(pt).dump();
    }
  }

  if (o.out == "json") {
    std::cout << report_to_json(rep) << "\n";
  } else {
    std::cout << (rep.verdict ? "renormalisable" : "not renormalisable")
              << "  residual=" << fmt12(rep.residual) << "  lattice=" << rep.lattice_size << "\n";
    if (!rep.fit_json.empty()) std::cout << "coarse automaton: " << rep.fit_json << "\n";
  }
  if (fit_warning)
    std::cerr << "warning: induced automaton does not match any classified family\n";
  return rep.verdict ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermionic cellular automata: wrapped builds, renormalisation, flow"};
  app.require_subcommand(1);

  CommonOpts o;
  double phi = 0, theta = 0;
  std::string family = "sw", kind = "even", emit_orbit;
  int dir = 1, grid = 8, max_iter = 16, cut = 1, threads = 0;
  std::string op_literal;

  auto add_common = [&](CLI::App* c, bool needs_fca) {
    auto* f = c->add_option("--fca", o.fca_arg, "automaton spec: JSON file or inline JSON");
    if (needs_fca) f->required();
    c->add_option("--proj", o.proj_arg, "tile projection: name (Pe, Po, PL0, PR1, PiX+, ...) or operator literal");
    c->add_option("--steps", o.steps, "coarse-grained time steps N (default 2)");
    c->add_option("--size", o.size, "lattice override (validated against the wrapping policy)");
    c->add_option("--out", o.out, "report format: json or text");
    c->add_flag("--unsafe-wrapping", o.unsafe_wrapping, "allow lattices below the policy size");
  };

  auto* c_check = app.add_subcommand("check", "decide (N,Pi)-renormalisability");
  add_common(c_check, true);
  auto* c_renorm = app.add_subcommand("renorm", "check and extract the renormalised automaton");
  add_common(c_renorm, true);
  auto* c_index = app.add_subcommand("index", "information-flux index of the automaton");
  add_common(c_index, true);

  auto* c_flow = app.add_subcommand("flow", "iterate the renormalisation flow");
  add_common(c_flow, false);
  c_flow->add_option("--family", family, "sw | forking | shift | majorana_shift");
  c_flow->add_option("--phi", phi, "controlled-phase angle (radians)");
  c_flow->add_option("--theta", theta, "cell-wise angle (radians)");
  c_flow->add_option("--kind", kind, "cell-wise gate kind: even | odd");
  c_flow->add_option("--dir", dir, "shift direction +1/-1");
  c_flow->add_option("--max-iter", max_iter, "iteration cap");
  c_flow->add_option("--emit-orbit", emit_orbit, "write orbit points as CSV");

  auto* c_table = app.add_subcommand("table", "sweep every family row against the projections");
  c_table->add_option("--grid", grid, "grid points per angle (default 8)");
  c_table->add_option("--threads", threads, "worker threads (default: hardware)");
  c_table->add_option("--out", o.out, "report format: json or text");

  auto* c_schmidt = app.add_subcommand("schmidt", "operator Schmidt decomposition across a cut");
  c_schmidt->add_option("--proj", o.proj_arg, "projection name or operator literal");
  c_schmidt->add_option("--op", op_literal, "explicit operator literal (cells joined by @)");
  c_schmidt->add_option("--cut", cut, "cells left of the cut (default 1)");
  c_schmidt->add_option("--out", o.out, "report format: json or text");

  try {
    app.parse(argc, argv);

    if (*c_check) return run_check(o, false);
    if (*c_renorm) return run_check(o, true);

    if (*c_index) {
      FcaSpec spec = spec_from_json_text(read_fca_arg(o.fca_arg));
      double ind = index_of(spec);
      if (o.out == "json")
        std::cout << json{{"index", fmt12(ind)}}.dump(2) << "\n";
      else
        std::cout << fmt12(ind) << "\n";
      return 0;
    }

    if (*c_flow) {
      FlowPoint start;
      if (!o.fca_arg.empty()) {
        start = flow_point_of(spec_from_json_text(read_fca_arg(o.fca_arg)));
      } else {
        CellwiseKind k = kind == "odd" ? CellwiseKind::OddRotation : CellwiseKind::EvenPhase;
        if (family == "sw")
          start = flow_point_of(SwFamily{phi, {k, theta}});
        else if (family == "forking")
          start = flow_point_of(ForkingFamily{{k, theta}});
        else if (family == "shift")
          start = flow_point_of(ShiftFamily{dir});
        else if (family == "majorana_shift")
          start = flow_point_of(MajoranaShiftFamily{dir, theta});
        else
          throw std::invalid_argument("unknown family: " + family);
      }
      TileProjection proj = parse_projection(o.proj_arg);
      FlowOrbit orb = flow_orbit(start, proj, max_iter);

      if (!emit_orbit.empty()) {
        std::ofstream csv(emit_orbit);
        csv << "step,family,phi,theta\n";
        for (size_t i = 0; i < orb.points.size(); i++) {
          const FlowPoint& p = orb.points[i];
          csv << i << "," << flow_family_name(p.family) << "," << fmt12(p.phi) << ","
              << fmt12(p.theta) << "\n";
        }
      }
      json j;
      switch (orb.terminal) {
        case OrbitTerminal::FixedPoint: j["terminal"] = "fixed_point"; break;
        case OrbitTerminal::Cycle: j["terminal"] = "cycle"; break;
        case OrbitTerminal::NotRenormalisable: j["terminal"] = "not_renormalisable"; break;
        case OrbitTerminal::Unclassified: j["terminal"] = "unclassified"; break;
        case OrbitTerminal::MaxIter: j["terminal"] = "max_iter"; break;
      }
      if (orb.cycle_length) j["cycle_length"] = orb.cycle_length;
      if (orb.failed_step >= 0) j["failed_step"] = orb.failed_step;
      json pts = json::array();
      for (auto& p : orb.points) pts.push_back(point_json(p));
      j["points"] = pts;
      if (o.out == "json")
        std::cout << j.dump(2) << "\n";
      else {
        for (size_t i = 0; i < orb.points.size(); i++)
          std::cout << i << ": " << orb.points[i].text() << "\n";
        std::cout << "terminal: " << j["terminal"].get<std::string>() << "\n";
      }
      return 0;
    }

    if (*c_table) {
      SweepReport rep = table_sweep(grid, threads);
      if (o.out == "json")
        std::cout << rep.to_json() << "\n";
      else
        std::cout << rep.to_text();
      return rep.failed == 0 ? 0 : 1;
    }

    if (*c_schmidt) {
      GradedOperator op =
          op_literal.empty() ? parse_projection(o.proj_arg).p : parse_operator_literal(op_literal);
      CellLayout lay{op.width() / 2, 1};
      SchmidtDecomposition dec = operator_schmidt(op, lay, cut);
      json j;
      j["rank"] = int(dec.pairs.size());
      json ws = json::array();
      for (auto& p : dec.pairs) ws.push_back(fmt12(p.weight));
      j["weights"] = ws;
      if (o.out == "json")
        std::cout << j.dump(2) << "\n";
      else {
        std::cout << "rank " << dec.pairs.size() << ", weights:";
        for (auto& p : dec.pairs) std::cout << " " << fmt12(p.weight);
        std::cout << "\n";
      }
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
