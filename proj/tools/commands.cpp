#include "commands.hpp"

#include "bldgraph/checkers.hpp"
#include "bldgraph/convergence.hpp"
#include "bldgraph/fixtures.hpp"
#include "bldgraph/io.hpp"
#include "bldgraph/lifting.hpp"
#include "bldgraph/oracle.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

namespace bldgraph::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty())
    std::cout << text;
  else
    write_text(g.out, text);
}

void emit(const Globals& g, const json& j) { emit(g, j.dump(2) + "\n"); }

Rational rational_arg(const std::string& name, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument&) {
    throw Usage("--" + name + " expects a rational such as 3/2, got \"" + text + "\"");
  }
}

Property property_arg(const std::string& text) {
  const auto p = parse_property(text);
  if (!p) throw Usage("unknown property \"" + text + "\"");
  return *p;
}

/// A point as JSON, as `edge@offset`, or as a vertex name.
GraphPoint point_arg(const MetricGraph& g, const std::string& text) {
  if (!text.empty() && text.front() == '{') return point_from_json(g, text);
  try {
    if (const auto at = text.find('@'); at != std::string::npos)
      return g.point(g.edge_by_name(text.substr(0, at)), rational_arg("point", text.substr(at + 1)));
    return GraphPoint::at_vertex(g.vertex_by_name(text));
  } catch (const GraphError& e) {
    throw Usage(std::string("bad point \"") + text + "\": " + e.what());
  }
}

GraphPoint base_of(const MetricGraph& g, const std::string& text) {
  if (!text.empty()) return point_arg(g, text);
  return g.basepoint().value_or(GraphPoint::at_vertex(VertexId{0}));
}

template <class F>
auto timed(F&& f, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  auto result = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

json constant_json(const std::optional<Rational>& c) { return c ? json(c->str()) : json("none"); }

/// Exact length distortion on sampled walks, as a second opinion on a
/// passing radial or BLD verdict.
bool walks_within(const GraphMap& f, const Rational& L, std::size_t count) {
  std::mt19937 rng(1);
  const MetricGraph& x = f.source();
  if (x.edge_count() == 0) return true;
  for (std::size_t k = 0; k < count; ++k) {
    const VertexId v{static_cast<std::uint32_t>(rng() % x.vertex_count())};
    const Walk w = random_walk(rng, x, GraphPoint::at_vertex(v), 6);
    const Rational len = walk_length(x, w);
    const Rational img = walk_length(f.target(), image_walk(f, w));
    if (img > L * len || img * L < len) return false;
  }
  return true;
}

int run(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const GraphError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int cmd_check(const Globals& g, const CheckArgs& a) {
  return run([&] {
    const GraphMap f = read_map(a.map);
    const Property p = property_arg(a.property);
    const Rational L = rational_arg("L", a.L);
    double seconds = 0;
    PropertyReport r;
    try {
      r = timed([&] { return check(f, p, L); }, seconds);
    } catch (const PreconditionError& e) {
      json out{{"property", std::string(property_name(p))},
               {"verdict", "precondition"},
               {"constant", {{"given", L.str()}}},
               {"detail", e.what()},
               {"topology",
                {{"open", is_open(f).holds}, {"discrete", is_discrete(f).holds}, {"branched_cover", is_branched_cover(f)}}}};
      emit(g, out);
      std::cerr << "precondition failed: " << e.what() << "\n";
      return int(kPrecondition);
    }
    json out = json::parse(report_to_json(f, r, g.no_timing ? std::nullopt : std::optional<double>(seconds)));
    int code = r.verdict ? kPass : kFail;
    if (!r.verdict && p == Property::BLD && !r.topology.branched_cover) code = kPrecondition;

    if (g.oracle) {
      const DyadicOracle o(f, g.budget_grid);
      const bool ov = o.check(p, L);
      json oj{{"grid_divisions", g.budget_grid}, {"verdict", ov ? "pass" : "fail"}, {"agrees", ov == r.verdict}};
      if (r.verdict && (p == Property::Radial || p == Property::BLD)) {
        const bool ok = walks_within(f, L, g.budget_walks);
        oj["walks_checked"] = g.budget_walks;
        oj["walks_within_bounds"] = ok;
        if (!ok) code = kOracleMismatch;
      }
      if (ov != r.verdict) code = kOracleMismatch;
      out["oracle"] = oj;
    }
    emit(g, out);
    return code;
  });
}

int cmd_characterize(const Globals& g, const MapArgs& a) {
  return run([&] {
    const GraphMap f = read_map(a.map);
    double seconds = 0;
    const Characterization c = timed([&] { return characterize(f); }, seconds);
    auto show = [](const std::optional<Rational>& v, bool applies) {
      return !applies ? std::string("n/a") : (v ? v->str() : std::string("none"));
    };
    std::cout << "bld\tlq\tradial\tcoradial\n"
              << show(c.bld, c.bld_applies) << "\t" << show(c.lq, true) << "\t" << show(c.radial, true) << "\t"
              << show(c.coradial, c.coradial_applies) << "\n";
    int code = kPass;
    json out = json::parse(characterization_to_json(c, g.no_timing ? std::nullopt : std::optional<double>(seconds)));
    if (g.oracle) {
      const DyadicOracle o(f, g.budget_grid);
      const bool agrees = (!c.bld_applies || o.constant(Property::BLD) == c.bld) && o.constant(Property::LQ) == c.lq &&
                          o.constant(Property::Radial) == c.radial &&
                          (!c.coradial_applies || o.constant(Property::Coradial) == c.coradial) &&
                          o.open() == c.open.holds && o.discrete() == c.discrete.holds;
      out["oracle"] = {{"grid_divisions", g.budget_grid},
                       {"constants",
                        {{"bld", constant_json(o.constant(Property::BLD))},
                         {"lq", constant_json(o.constant(Property::LQ))},
                         {"radial", constant_json(o.constant(Property::Radial))},
                         {"coradial", constant_json(o.constant(Property::Coradial))}}},
                       {"agrees", agrees}};
      if (!agrees) code = kOracleMismatch;
    }
    if (!g.out.empty()) write_text(g.out, out.dump(2) + "\n");
    return code;
  });
}

int cmd_min_constant(const Globals& g, const MinConstantArgs& a) {
  return run([&] {
    const GraphMap f = read_map(a.map);
    const Property p = property_arg(a.property);
    const auto c = min_constant(f, p);
    json out{{"property", std::string(property_name(p))}, {"minimal", constant_json(c)}};
    int code = c ? kPass : kFail;
    if (g.oracle) {
      const auto oc = DyadicOracle(f, g.budget_grid).constant(p);
      out["oracle"] = {{"grid_divisions", g.budget_grid}, {"minimal", constant_json(oc)}, {"agrees", oc == c}};
      if (oc != c) code = kOracleMismatch;
    }
    emit(g, out);
    return code;
  });
}

int cmd_lift(const Globals& g, const LiftArgs& a) {
  return run([&] {
    const GraphMap f = read_map(a.map);
    const Walk beta = read_walk(a.walk, f.target());
    if (!a.all) {
      if (a.start.empty()) throw Usage("lift needs --start unless --all is given");
      const Lift l = total_lift(f, beta, point_arg(f.source(), a.start));
      if (!verify_lift(f, l.path, beta)) return int(kFail);
      emit(g, lift_to_json(f, l));
      return int(kPass);
    }
    std::optional<std::vector<GraphPoint>> starts;
    if (!a.start.empty()) starts = std::vector<GraphPoint>{point_arg(f.source(), a.start)};
    const LiftSet ls = all_maximal_lifts(f, beta, starts, g.budget_lifts);
    if (ls.truncated) throw BudgetError("more than " + std::to_string(g.budget_lifts) + " lifts");
    json lifts = json::array();
    for (const auto& l : ls.lifts) lifts.push_back(json::parse(lift_to_json(f, l)));
    emit(g, json{{"count", ls.lifts.size()}, {"lifts", lifts}});
    return int(kPass);
  });
}

int cmd_transport(const Globals& g, const TransportArgs& a) {
  return run([&] {
    const GraphMap f = read_map(a.map);
    const FiberTransport t =
        fiber_transport(f, point_arg(f.target(), a.x), point_arg(f.target(), a.y), rational_arg("L", a.L));
    emit(g, transport_to_json(f, t));
    return int(t.bijective && t.within_bound ? kPass : kFail);
  });
}

int cmd_qi_check(const Globals& g, const QiCheckArgs& a) {
  return run([&] {
    std::optional<QuasiIsometryWitness> w;
    if (!a.witness.empty()) {
      if (!a.map.empty()) throw Usage("give either --witness or --map, not both");
      w = read_witness(a.witness);
    } else {
      if (a.map.empty() || a.epsilon.empty()) throw Usage("qi-check needs --witness, or --map with --epsilon");
      const GraphMap f = read_map(a.map);
      const Rational eps = rational_arg("epsilon", a.epsilon);
      const Rational delta = a.delta.empty() ? eps / 8 : rational_arg("delta", a.delta);
      const GraphPoint x0 = base_of(f.source(), a.base);
      const PointedSpace src{f.source(), x0};
      if (ball_net(src, 1 / eps, delta).size() > g.budget_net)
        throw BudgetError("the net exceeds " + std::to_string(g.budget_net) + " points");
      w = make_witness(src, PointedSpace{f.target(), f.eval(x0)}, eps, delta,
                       [&](const GraphPoint& p) { return f.eval(p); });
    }
    if (w->net.size() > g.budget_net) throw BudgetError("the net exceeds " + std::to_string(g.budget_net) + " points");
    const QiVerdict v = check_quasi_isometry(*w);
    json out = json::parse(qi_verdict_to_json(*w, v));
    if (a.minimal) {
      const QiEpsilon m = min_qi_epsilon(*w);
      out["minimal_epsilon"] = {{"value", m.value.str()}, {"attained", m.attained}};
    }
    emit(g, out);
    return int(v.passes ? kPass : kFail);
  });
}

int cmd_qi_search(const Globals& g, const QiSearchArgs& a) {
  return run([&] {
    const MetricGraph x = read_graph(a.source), y = read_graph(a.target);
    const Rational eps = rational_arg("epsilon", a.epsilon);
    const Rational delta = a.delta.empty() ? eps / 8 : rational_arg("delta", a.delta);
    const PointedSpace src{x, base_of(x, a.source_base)}, tgt{y, base_of(y, a.target_base)};
    if (ball_net(src, 1 / eps, delta).size() > g.budget_net)
      throw BudgetError("the net exceeds " + std::to_string(g.budget_net) + " points");
    const QiSearchResult res = search_quasi_isometry(src, tgt, eps, delta, g.budget_nodes);
    json summary{{"epsilon", eps.str()},
                 {"delta", delta.str()},
                 {"found", res.witness.has_value()},
                 {"nodes", res.nodes},
                 {"unreachable", res.unreachable},
                 {"note", res.note}};
    if (res.witness && !g.out.empty()) {
      write_witness(g.out, *res.witness);
      summary["witness"] = g.out;
    }
    std::cout << summary.dump(2) << "\n";
    return int(res.witness ? kPass : kFail);
  });
}

int cmd_converge(const Globals& g, const ConvergeArgs& a) {
  return run([&] {
    const ConvergenceCertificate c = read_certificate(a.cert);
    const ConvergenceReport r = check_package_convergence(c);
    json out = json::parse(convergence_report_to_json(r));
    int code = r.converges ? kPass : kFail;
    if (!a.harness.empty() && r.converges) {
      const Rational L = rational_arg("L", a.L);
      LimitReport lr;
      if (a.harness == "lq")
        lr = lq_limit_harness(c, L);
      else if (a.harness == "bld")
        lr = bld_limit_harness(c, L);
      else
        throw Usage("--harness expects lq or bld");
      out["harness"] = {{"property", a.harness},
                        {"L", L.str()},
                        {"hypotheses_hold", lr.hypotheses_hold},
                        {"applicable", lr.applicable},
                        {"limit_passes", lr.limit_passes},
                        {"note", lr.note}};
      code = !lr.applicable ? kPrecondition : (lr.limit_passes ? kPass : kFail);
    }
    emit(g, out);
    return code;
  });
}

int cmd_winding_demo(const Globals& g, const WindingArgs& a) {
  return run([&] {
    if (a.k_max < 1 || a.m < 1) throw Usage("--k-max and --m must be positive");
    const fs::path dir = g.out.empty() ? fs::path("winding-demo") : fs::path(g.out);
    const ConvergenceCertificate c = winding_demo(a.k_max, a.m);
    const fs::path manifest = write_certificate(dir, "winding", c);
    const ConvergenceReport r = check_package_convergence(c);
    json out = json::parse(convergence_report_to_json(r));
    out["certificate"] = manifest.string();
    std::cout << out.dump(2) << "\n";
    return int(r.converges ? kPass : kFail);
  });
}

int cmd_fixtures(const Globals& g) {
  return run([&] {
    const fs::path dir = g.out.empty() ? fs::path("fixtures") : fs::path(g.out);
    const std::pair<const char*, GraphMap> maps[] = {
        {"identity_i3", identity_map(path_graph(3))}, {"identity_c4", identity_map(cycle_graph(4, 1))},
        {"w2", winding_map(2, 3)},                    {"w3", winding_map(3, 3)},
        {"tent", tent_map()},                         {"speed2", speed2_map()},
        {"fold", fold_map()},                         {"const", const_map()}};
    json files = json::array();
    for (const auto& [name, f] : maps) {
      const fs::path p = dir / (std::string(name) + ".gm.json");
      write_map(p, f);
      files.push_back(p.string());
    }
    // Base walks for lifting: a full loop around C_3 and the edge of I_1.
    const MetricGraph c3 = cycle_graph(3, 1);
    Walk loop{GraphPoint::at_vertex(VertexId{0}), {}};
    for (std::uint32_t e = 0; e < 3; ++e) loop.segments.push_back(Segment{EdgeId{e}, 0, 1});
    write_walk(dir / "c3_loop.walk.json", c3, loop);
    write_walk(dir / "i1_edge.walk.json", path_graph(1),
               Walk{GraphPoint::at_vertex(VertexId{0}), {Segment{EdgeId{0}, 0, 1}}});
    files.push_back((dir / "c3_loop.walk.json").string());
    files.push_back((dir / "i1_edge.walk.json").string());
    std::cout << json{{"written", files}}.dump(2) << "\n";
    return int(kPass);
  });
}

}  // namespace bldgraph::cli
