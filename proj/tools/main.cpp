// bldgraph: batch front-end for the exact checkers, lifting and convergence
// certificates. Every command writes JSON (to --out, or stdout) and reports
// its verdict through the exit status:
//
//   0 pass, 1 fail, 2 precondition or topology failure, 64 usage or input
//   error, 65 budget exceeded, 70 the --oracle cross-check disagreed.

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace bldgraph::cli;

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for bounded length distortion and related conditions on metric graph maps"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--out", g.out, "Output file (directory for fixtures and winding-demo)");
  app.add_flag("--no-timing", g.no_timing, "Leave the timing field out of reports");
  app.add_flag("--oracle", g.oracle, "Cross-check exact verdicts with the dyadic brute-force oracle");
  app.add_option("--budget-nodes", g.budget_nodes, "Node budget of the quasi-isometry search")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-lifts", g.budget_lifts, "Maximum number of enumerated lifts")->check(CLI::PositiveNumber);
  app.add_option("--budget-walks", g.budget_walks, "Random walks sampled by --oracle")->check(CLI::PositiveNumber);
  app.add_option("--budget-net", g.budget_net, "Maximum net size for quasi-isometry checks")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-grid", g.budget_grid, "Oracle grid steps per shortest edge")->check(CLI::PositiveNumber);

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Decide one property at a given constant");
  c_check->add_option("--map", check.map, "Map file (.gm.json)")->required();
  c_check->add_option("--property", check.property, "bld, lq, radial, radial-pointwise, coradial or lipschitz")
      ->required();
  c_check->add_option("--L", check.L, "The constant, as p/q")->required();

  MapArgs characterize;
  auto* c_char = app.add_subcommand("characterize", "Topology and the four minimal constants");
  c_char->add_option("--map", characterize.map, "Map file (.gm.json)")->required();

  MinConstantArgs minc;
  auto* c_min = app.add_subcommand("min-constant", "Least constant for one property");
  c_min->add_option("--map", minc.map, "Map file (.gm.json)")->required();
  c_min->add_option("--property", minc.property, "Property name")->required();

  LiftArgs lift;
  auto* c_lift = app.add_subcommand("lift", "Lift a walk in the target through the map");
  c_lift->add_option("--map", lift.map, "Map file (.gm.json)")->required();
  c_lift->add_option("--walk", lift.walk, "Walk file in the target (.walk.json)")->required();
  c_lift->add_option("--start", lift.start, "Start point in the source: vertex, edge@offset or point JSON");
  c_lift->add_flag("--all", lift.all, "Enumerate every lift instead of the deterministic one");

  TransportArgs transport;
  auto* c_tr = app.add_subcommand("transport", "Pair the fibers over two points");
  c_tr->add_option("--map", transport.map, "Map file (.gm.json)")->required();
  c_tr->add_option("--x", transport.x, "Target point")->required();
  c_tr->add_option("--y", transport.y, "Target point")->required();
  c_tr->add_option("--L", transport.L, "BLD constant of the map")->required();

  QiCheckArgs qic;
  auto* c_qic = app.add_subcommand("qi-check", "Check an ε-quasi-isometry witness");
  c_qic->add_option("--witness", qic.witness, "Witness file (.qi.json)");
  c_qic->add_option("--map", qic.map, "Tabulate a map as the witness instead");
  c_qic->add_option("--epsilon", qic.epsilon, "ε for --map");
  c_qic->add_option("--delta", qic.delta, "Net step for --map (default ε/8)");
  c_qic->add_option("--base", qic.base, "Source basepoint for --map");
  c_qic->add_flag("--minimal", qic.minimal, "Also report the least ε the witness passes");

  QiSearchArgs qis;
  auto* c_qis = app.add_subcommand("qi-search", "Search for an ε-quasi-isometry between two graphs");
  c_qis->add_option("--source", qis.source, "Source graph (.mg.json)")->required();
  c_qis->add_option("--target", qis.target, "Target graph (.mg.json)")->required();
  c_qis->add_option("--epsilon", qis.epsilon, "ε")->required();
  c_qis->add_option("--delta", qis.delta, "Net step (default ε/8)");
  c_qis->add_option("--source-base", qis.source_base, "Source basepoint");
  c_qis->add_option("--target-base", qis.target_base, "Target basepoint");

  ConvergeArgs conv;
  auto* c_conv = app.add_subcommand("converge", "Verify a convergence certificate");
  c_conv->add_option("--cert", conv.cert, "Certificate manifest (.cert.json)")->required();
  c_conv->add_option("--harness", conv.harness, "Also test the limit: lq or bld");
  c_conv->add_option("--L", conv.L, "Constant for --harness");

  WindingArgs wind;
  auto* c_wind = app.add_subcommand("winding-demo", "Write and verify the winding-map certificate");
  c_wind->add_option("--k-max", wind.k_max, "Number of packages");
  c_wind->add_option("--m", wind.m, "Edges of the target cycle");

  auto* c_fix = app.add_subcommand("fixtures", "Write the canonical maps and walks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (c_check->parsed()) return cmd_check(g, check);
  if (c_char->parsed()) return cmd_characterize(g, characterize);
  if (c_min->parsed()) return cmd_min_constant(g, minc);
  if (c_lift->parsed()) return cmd_lift(g, lift);
  if (c_tr->parsed()) return cmd_transport(g, transport);
  if (c_qic->parsed()) return cmd_qi_check(g, qic);
  if (c_qis->parsed()) return cmd_qi_search(g, qis);
  if (c_conv->parsed()) return cmd_converge(g, conv);
  if (c_wind->parsed()) return cmd_winding_demo(g, wind);
  if (c_fix->parsed()) return cmd_fixtures(g);
  std::cerr << app.help();
  return kUsage;
}
