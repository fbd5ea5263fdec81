#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace bldgraph::cli {

enum Exit : int {
  kPass = 0,
  kFail = 1,
  kPrecondition = 2,
  kUsage = 64,
  kBudget = 65,
  kOracleMismatch = 70,
};

struct Globals {
  std::string out;
  bool no_timing = false;
  bool oracle = false;
  std::size_t budget_nodes = 1000000;
  std::size_t budget_lifts = 100000;
  std::size_t budget_walks = 100;
  std::size_t budget_net = 20000;
  long budget_grid = 64;
};

struct CheckArgs {
  std::string map, property, L;
};
struct MapArgs {
  std::string map;
};
struct MinConstantArgs {
  std::string map, property;
};
struct LiftArgs {
  std::string map, walk, start;
  bool all = false;
};
struct TransportArgs {
  std::string map, x, y, L;
};
struct QiCheckArgs {
  std::string witness, map, epsilon, delta, base;
  bool minimal = false;
};
struct QiSearchArgs {
  std::string source, target, epsilon, delta, source_base, target_base;
};
struct ConvergeArgs {
  std::string cert, harness, L = "1";
};
struct WindingArgs {
  int k_max = 3;
  int m = 4;
};

int cmd_check(const Globals& g, const CheckArgs& a);
int cmd_characterize(const Globals& g, const MapArgs& a);
int cmd_min_constant(const Globals& g, const MinConstantArgs& a);
int cmd_lift(const Globals& g, const LiftArgs& a);
int cmd_transport(const Globals& g, const TransportArgs& a);
int cmd_qi_check(const Globals& g, const QiCheckArgs& a);
int cmd_qi_search(const Globals& g, const QiSearchArgs& a);
int cmd_converge(const Globals& g, const ConvergeArgs& a);
int cmd_winding_demo(const Globals& g, const WindingArgs& a);
int cmd_fixtures(const Globals& g);

}  // namespace bldgraph::cli
