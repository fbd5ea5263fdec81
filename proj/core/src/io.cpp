#include "bldgraph/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace bldgraph {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field \"") + key + "\" has the wrong type");
  }
}

const json& sub(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Rational rat(const json& j) {
  if (!j.is_string()) throw FormatError("rationals are written as strings");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw FormatError("not a rational: " + j.get<std::string>());
  }
}

Rational rat(const json& j, const char* key) { return rat(sub(j, key)); }

json opt_rat(const std::optional<Rational>& r) { return r ? json(r->str()) : json(nullptr); }

std::optional<Rational> opt_rat(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return rat(j.at(key));
}

json point(const MetricGraph& g, const GraphPoint& p) {
  if (p.is_vertex()) return json{{"vertex", g.vertex_name(p.vertex())}};
  return json{{"edge", g.edge(p.edge()).name}, {"offset", p.offset().str()}};
}

GraphPoint point(const MetricGraph& g, const json& j) {
  try {
    if (j.contains("vertex")) return GraphPoint::at_vertex(g.vertex_by_name(field<std::string>(j, "vertex")));
    return g.point(g.edge_by_name(field<std::string>(j, "edge")), rat(j, "offset"));
  } catch (const GraphError& e) {
    throw FormatError(std::string("bad point: ") + e.what());
  }
}

json graph(const MetricGraph& g) {
  json vs = json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) vs.push_back(g.vertex_name(VertexId{static_cast<std::uint32_t>(v)}));
  json es = json::array();
  for (const auto& e : g.edges())
    es.push_back({{"id", e.name}, {"from", g.vertex_name(e.u)}, {"to", g.vertex_name(e.v)}, {"len", e.length.str()}});
  json out{{"vertices", vs}, {"edges", es}};
  if (auto bp = g.basepoint()) {
    if (!bp->is_vertex()) throw FormatError("only vertex basepoints can be written");
    out["basepoint"] = g.vertex_name(bp->vertex());
  }
  return out;
}

MetricGraph graph(const json& j) {
  GraphSpec spec;
  spec.vertices = field<std::vector<std::string>>(j, "vertices");
  for (const auto& e : sub(j, "edges"))
    spec.edges.push_back({field<std::string>(e, "id"), field<std::string>(e, "from"), field<std::string>(e, "to"),
                          rat(e, "len")});
  if (j.contains("basepoint")) spec.basepoint = field<std::string>(j, "basepoint");
  try {
    return MetricGraph::build(spec);
  } catch (const GraphError& e) {
    throw FormatError(std::string("bad graph: ") + e.what());
  }
}

json map(const GraphMap& f, const std::string& source_file, const std::string& target_file) {
  const MetricGraph& x = f.source();
  const MetricGraph& y = f.target();
  json vm = json::object();
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    const VertexId id{static_cast<std::uint32_t>(v)};
    vm[x.vertex_name(id)] = y.vertex_name(f.vertex_image(id));
  }
  json em = json::object();
  for (std::size_t e = 0; e < x.edge_count(); ++e) {
    const EdgeId id{static_cast<std::uint32_t>(e)};
    json walk = json::array();
    for (const auto& p : f.pieces(id)) {
      const Rational& len = y.edge(p.target).length;
      const bool forward = p.increasing();
      if ((forward && (p.a0.sign() != 0 || p.a1 != len)) || (!forward && (p.a1.sign() != 0 || p.a0 != len)))
        throw FormatError("edge " + x.edge(id).name + " covers part of a target edge; subdivide the target first");
      walk.push_back({{"edge", y.edge(p.target).name}, {"dir", forward ? "+" : "-"}});
    }
    em[x.edge(id).name] = walk;
  }
  return json{{"source", source_file}, {"target", target_file}, {"vertex_map", vm}, {"edge_map", em}};
}

GraphMap map(const json& j, const MetricGraph& x, const MetricGraph& y) {
  MapSpec spec;
  for (const auto& [k, v] : sub(j, "vertex_map").items()) {
    if (!v.is_string()) throw FormatError("vertex_map values are vertex names");
    spec.vertex_map.push_back({k, v.get<std::string>()});
  }
  for (const auto& [k, v] : sub(j, "edge_map").items()) {
    std::vector<std::pair<std::string, bool>> walk;
    for (const auto& step : v) {
      const auto dir = field<std::string>(step, "dir");
      if (dir != "+" && dir != "-") throw FormatError("dir must be \"+\" or \"-\"");
      walk.push_back({field<std::string>(step, "edge"), dir == "+"});
    }
    spec.edge_map.push_back({k, std::move(walk)});
  }
  try {
    return build_map(x, y, spec);
  } catch (const GraphError& e) {
    throw FormatError(std::string("bad map: ") + e.what());
  }
}

json walk(const MetricGraph& g, const Walk& w) {
  json segs = json::array();
  for (const auto& s : w.segments) segs.push_back({{"edge", g.edge(s.edge).name}, {"from", s.from.str()}, {"to", s.to.str()}});
  return json{{"start", point(g, w.start)}, {"segments", segs}};
}

Walk walk(const MetricGraph& g, const json& j) {
  Walk w{point(g, sub(j, "start")), {}};
  try {
    for (const auto& s : sub(j, "segments"))
      w.segments.push_back(Segment{g.edge_by_name(field<std::string>(s, "edge")), rat(s, "from"), rat(s, "to")});
    validate_walk(g, w);
  } catch (const GraphError& e) {
    throw FormatError(std::string("bad walk: ") + e.what());
  }
  return w;
}

json topology(const TopologyFlags& t) {
  return json{{"open", t.open}, {"discrete", t.discrete}, {"branched_cover", t.branched_cover}};
}

json witness_body(const QuasiIsometryWitness& w, const std::string& source_file, const std::string& target_file) {
  json net = json::array();
  for (std::size_t i = 0; i < w.net.size(); ++i)
    net.push_back({{"name", "n" + std::to_string(i)},
                   {"point", point(w.source.graph, w.net[i])},
                   {"image", point(w.target.graph, w.image[i])}});
  return json{{"source", source_file},
              {"source_base", point(w.source.graph, w.source.base)},
              {"target", target_file},
              {"target_base", point(w.target.graph, w.target.base)},
              {"epsilon", w.epsilon.str()},
              {"delta", w.delta.str()},
              {"domain_radius", opt_rat(w.domain_radius)},
              {"net", net}};
}

QuasiIsometryWitness witness_body(const json& j, const PointedSpace& source, const PointedSpace& target) {
  QuasiIsometryWitness w{source, target, rat(j, "epsilon"), rat(j, "delta"), opt_rat(j, "domain_radius"), {}, {}};
  for (const auto& n : sub(j, "net")) {
    w.net.push_back(point(source.graph, sub(n, "point")));
    w.image.push_back(point(target.graph, sub(n, "image")));
  }
  return w;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

fs::path sibling(const fs::path& file, const std::string& suffix) {
  std::string stem = file.filename().string();
  for (const char* ext : {".gm.json", ".qi.json"})
    if (stem.size() > std::string_view(ext).size() && stem.ends_with(ext)) {
      stem.resize(stem.size() - std::string_view(ext).size());
      break;
    }
  return file.parent_path() / (stem + suffix);
}

/// Loads graph files once per path.
class GraphCache {
 public:
  const MetricGraph& get(const fs::path& p) {
    const std::string key = fs::weakly_canonical(p).string();
    auto it = graphs_.find(key);
    if (it == graphs_.end()) it = graphs_.emplace(key, read_graph(p)).first;
    return it->second;
  }

 private:
  std::map<std::string, MetricGraph> graphs_;
};

GraphMap load_map(const fs::path& path, GraphCache& cache) {
  const json j = parse(read_text(path));
  const fs::path dir = path.parent_path();
  return map(j, cache.get(dir / field<std::string>(j, "source")), cache.get(dir / field<std::string>(j, "target")));
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

std::string graph_to_json(const MetricGraph& g) { return dump(graph(g)); }
MetricGraph graph_from_json(std::string_view text) { return graph(parse(text)); }
MetricGraph read_graph(const fs::path& path) { return graph_from_json(read_text(path)); }
void write_graph(const fs::path& path, const MetricGraph& g) { write_text(path, graph_to_json(g)); }

std::string point_to_json(const MetricGraph& g, const GraphPoint& p) { return point(g, p).dump(); }
GraphPoint point_from_json(const MetricGraph& g, std::string_view text) { return point(g, parse(text)); }

std::string map_to_json(const GraphMap& f, const std::string& source_file, const std::string& target_file) {
  return dump(map(f, source_file, target_file));
}

GraphMap map_from_json(std::string_view text, const MetricGraph& x, const MetricGraph& y) {
  return map(parse(text), x, y);
}

GraphMap read_map(const fs::path& path) {
  GraphCache cache;
  return load_map(path, cache);
}

void write_map(const fs::path& path, const GraphMap& f) {
  const fs::path src = sibling(path, ".source.mg.json"), tgt = sibling(path, ".target.mg.json");
  write_graph(src, f.source());
  write_graph(tgt, f.target());
  write_text(path, map_to_json(f, src.filename().string(), tgt.filename().string()));
}

std::string walk_to_json(const MetricGraph& g, const Walk& w) { return dump(walk(g, w)); }
Walk walk_from_json(const MetricGraph& g, std::string_view text) { return walk(g, parse(text)); }
Walk read_walk(const fs::path& path, const MetricGraph& g) { return walk_from_json(g, read_text(path)); }
void write_walk(const fs::path& path, const MetricGraph& g, const Walk& w) { write_text(path, walk_to_json(g, w)); }

std::string report_to_json(const GraphMap& f, const PropertyReport& r, std::optional<double> seconds) {
  const MetricGraph& x = f.source();
  json w = nullptr;
  if (r.witness) {
    w = json{{"center", point(x, r.witness->center)},
             {"radius", opt_rat(r.witness->radius)},
             {"point", r.witness->point ? point(r.witness->point_in_target ? f.target() : x, *r.witness->point)
                                        : json(nullptr)},
             {"point_space", r.witness->point_in_target ? "target" : "source"},
             {"inequality", r.witness->inequality}};
  }
  json out{{"property", std::string(property_name(r.property))},
           {"verdict", r.verdict ? "pass" : "fail"},
           {"constant", {{"given", opt_rat(r.L)}, {"minimal", opt_rat(r.minimal)}}},
           {"witness", w},
           {"topology", topology(r.topology)},
           {"r0", opt_rat(r.r0)}};
  if (seconds) out["timing_seconds"] = *seconds;
  return dump(out);
}

PropertyReport report_from_json(const GraphMap& f, std::string_view text) {
  const json j = parse(text);
  PropertyReport r;
  const auto prop = parse_property(field<std::string>(j, "property"));
  if (!prop) throw FormatError("unknown property");
  r.property = *prop;
  const auto verdict = field<std::string>(j, "verdict");
  if (verdict != "pass" && verdict != "fail") throw FormatError("verdict must be \"pass\" or \"fail\"");
  r.verdict = verdict == "pass";
  r.L = opt_rat(sub(j, "constant"), "given");
  r.minimal = opt_rat(sub(j, "constant"), "minimal");
  const json& w = sub(j, "witness");
  if (!w.is_null()) {
    Witness wi{point(f.source(), sub(w, "center")), opt_rat(w, "radius"), std::nullopt,
               field<std::string>(w, "inequality"), field<std::string>(w, "point_space") == "target"};
    if (!sub(w, "point").is_null()) wi.point = point(wi.point_in_target ? f.target() : f.source(), w.at("point"));
    r.witness = std::move(wi);
  }
  const json& t = sub(j, "topology");
  r.topology = TopologyFlags{field<bool>(t, "open"), field<bool>(t, "discrete"), field<bool>(t, "branched_cover")};
  r.r0 = opt_rat(j, "r0");
  return r;
}

std::string characterization_to_json(const Characterization& c, std::optional<double> seconds) {
  auto constant = [](const std::optional<Rational>& v, bool applies) -> json {
    if (!applies) return "n/a";
    return v ? json(v->str()) : json("none");
  };
  json out{{"topology", {{"open", c.open.holds}, {"discrete", c.discrete.holds}, {"branched_cover", c.branched_cover}}},
           {"lipschitz", c.lipschitz.str()},
           {"constants",
            {{"bld", constant(c.bld, c.bld_applies)},
             {"lq", constant(c.lq, true)},
             {"radial", constant(c.radial, true)},
             {"coradial", constant(c.coradial, c.coradial_applies)}}},
           {"equivalence_certified", c.equivalence_certified},
           {"notes", c.notes}};
  if (seconds) out["timing_seconds"] = *seconds;
  return dump(out);
}

std::string lift_to_json(const GraphMap& f, const Lift& lift) {
  json out = walk(f.source(), lift.path);
  out["total"] = lift.total;
  out["choices"] = lift.choices;
  return dump(out);
}

std::string transport_to_json(const GraphMap& f, const FiberTransport& t) {
  json pairs = json::array();
  for (std::size_t i = 0; i < t.pairing.size(); ++i)
    pairs.push_back({{"from", point(f.source(), t.source_fiber[i])},
                     {"to", point(f.source(), t.target_fiber[t.pairing[i]])},
                     {"distance", t.distances[i].str()}});
  return dump(json{{"x", point(f.target(), t.x)},
                   {"y", point(f.target(), t.y)},
                   {"bound", t.bound.str()},
                   {"bijective", t.bijective},
                   {"within_bound", t.within_bound},
                   {"pairs", pairs}});
}

std::string qi_verdict_to_json(const QuasiIsometryWitness& w, const QiVerdict& v) {
  json pair = nullptr;
  if (v.pair) pair = json::array({point(w.source.graph, v.pair->first), point(w.source.graph, v.pair->second)});
  return dump(json{{"epsilon", w.epsilon.str()},
                   {"delta", w.delta.str()},
                   {"net_size", w.net.size()},
                   {"verdict", v.passes ? "pass" : "fail"},
                   {"violated", v.violated.empty() ? json(nullptr) : json(v.violated)},
                   {"detail", v.detail},
                   {"max_distortion", v.max_distortion.str()},
                   {"worst_pair", pair},
                   {"radius", opt_rat(v.radius)}});
}

std::string convergence_report_to_json(const ConvergenceReport& r) {
  return dump(json{{"verdict", r.converges ? "pass" : "fail"},
                   {"failures", r.failures},
                   {"worst_epsilon_ratio", r.worst_epsilon_ratio.str()},
                   {"worst_tail", r.worst_tail.str()},
                   {"epsilons_nonincreasing", r.epsilons_nonincreasing}});
}

std::string witness_to_json(const QuasiIsometryWitness& w, const std::string& source_file,
                            const std::string& target_file) {
  return dump(witness_body(w, source_file, target_file));
}

QuasiIsometryWitness witness_from_json(std::string_view text, const PointedSpace& source, const PointedSpace& target) {
  return witness_body(parse(text), source, target);
}

QuasiIsometryWitness read_witness(const fs::path& path) {
  const json j = parse(read_text(path));
  const fs::path dir = path.parent_path();
  const MetricGraph x = read_graph(dir / field<std::string>(j, "source"));
  const MetricGraph y = read_graph(dir / field<std::string>(j, "target"));
  const PointedSpace s{x, point(x, sub(j, "source_base"))}, t{y, point(y, sub(j, "target_base"))};
  return witness_body(j, s, t);
}

void write_witness(const fs::path& path, const QuasiIsometryWitness& w) {
  const fs::path src = sibling(path, ".source.mg.json"), tgt = sibling(path, ".target.mg.json");
  write_graph(src, w.source.graph);
  write_graph(tgt, w.target.graph);
  write_text(path, witness_to_json(w, src.filename().string(), tgt.filename().string()));
}

// A certificate directory holds, per package stem, a map file with its two
// graph files and a package file with the basepoints. Witness files refer to
// those graph files instead of repeating them.
fs::path write_certificate(const fs::path& dir, const std::string& name, const ConvergenceCertificate& c) {
  struct Files {
    std::string source, target;
  };
  auto write_package = [&](const MappingPackage& p, const std::string& stem) {
    write_map(dir / (stem + ".gm.json"), p.map);
    write_text(dir / (stem + ".pkg.json"),
               dump(json{{"map", stem + ".gm.json"},
                         {"source_base", point(p.source.graph, p.source.base)},
                         {"target_base", point(p.target.graph, p.target.base)}}));
    return Files{stem + ".source.mg.json", stem + ".target.mg.json"};
  };

  const Files limit = write_package(c.limit, "limit");
  std::vector<Files> pkgs;
  json packages = json::array();
  for (std::size_t i = 0; i < c.packages.size(); ++i) {
    const std::string stem = "package_" + std::to_string(i + 1);
    pkgs.push_back(write_package(c.packages[i], stem));
    packages.push_back(stem + ".pkg.json");
  }

  json radii = json::array();
  for (const auto& r : c.radii) radii.push_back(r.str());

  json eps = json::array(), maps = json::array();
  for (const auto& m : c.maps) {
    if (m.index < 1 || m.index > c.packages.size()) throw FormatError("scheduled maps refer to a missing package");
    const auto r_pos = std::find(c.radii.begin(), c.radii.end(), m.r) - c.radii.begin();
    const std::string stem = "maps/i" + std::to_string(m.index) + "_r" + std::to_string(r_pos);
    const Files& p = pkgs[m.index - 1];
    write_text(dir / (stem + "_g.qi.json"), witness_to_json(m.g, "../" + p.source, "../" + limit.source));
    write_text(dir / (stem + "_h.qi.json"), witness_to_json(m.h, "../" + p.target, "../" + limit.target));
    eps.push_back({{"i", m.index}, {"r", m.r.str()}, {"epsilon", m.epsilon.str()}});
    maps.push_back({{"i", m.index}, {"r", m.r.str()}, {"g", stem + "_g.qi.json"}, {"h", stem + "_h.qi.json"}});
  }

  json samples = json::array();
  for (const auto& s : c.samples) {
    json terms = json::array();
    for (const auto& [i, a] : s.terms) {
      if (i < 1 || i > c.packages.size()) throw FormatError("sample term refers to a missing package");
      terms.push_back({{"i", i}, {"point", point(c.packages[i - 1].source.graph, a)}});
    }
    samples.push_back({{"a", point(c.limit.source.graph, s.a)}, {"r", s.r.str()}, {"terms", terms}});
  }

  const fs::path manifest = dir / (name + ".cert.json");
  write_text(manifest, dump(json{{"rate", c.rate.str()},
                                 {"limit", "limit.pkg.json"},
                                 {"packages", packages},
                                 {"radii", radii},
                                 {"epsilons", eps},
                                 {"maps", maps},
                                 {"samples", samples}}));
  return manifest;
}

ConvergenceCertificate read_certificate(const fs::path& manifest) {
  const json j = parse(read_text(manifest));
  const fs::path dir = manifest.parent_path();
  GraphCache cache;

  auto read_package = [&](const fs::path& path) {
    const json p = parse(read_text(path));
    const GraphMap f = load_map(path.parent_path() / field<std::string>(p, "map"), cache);
    return MappingPackage{{f.source(), point(f.source(), sub(p, "source_base"))},
                          {f.target(), point(f.target(), sub(p, "target_base"))},
                          f};
  };

  ConvergenceCertificate c{{}, read_package(dir / field<std::string>(j, "limit")), {}, {}, {}, rat(j, "rate")};
  for (const auto& p : sub(j, "packages")) {
    if (!p.is_string()) throw FormatError("package entries are file names");
    c.packages.push_back(read_package(dir / p.get<std::string>()));
  }
  for (const auto& r : sub(j, "radii")) c.radii.push_back(rat(r));

  auto package_at = [&](std::size_t i) -> const MappingPackage& {
    if (i < 1 || i > c.packages.size()) throw FormatError("index " + std::to_string(i) + " names no package");
    return c.packages[i - 1];
  };
  std::map<std::pair<std::size_t, Rational>, Rational> eps;
  for (const auto& e : sub(j, "epsilons")) eps[{field<std::size_t>(e, "i"), rat(e, "r")}] = rat(e, "epsilon");

  for (const auto& m : sub(j, "maps")) {
    const auto i = field<std::size_t>(m, "i");
    const Rational r = rat(m, "r");
    const auto it = eps.find({i, r});
    if (it == eps.end()) throw FormatError("no ε for i = " + std::to_string(i) + ", r = " + r.str());
    const MappingPackage& p = package_at(i);
    auto load = [&](const char* key, const PointedSpace& from, const PointedSpace& to) {
      const fs::path path = dir / field<std::string>(m, key);
      const json w = parse(read_text(path));
      // Witnesses point at the package graph files; check that they agree.
      const MetricGraph& gs = cache.get(path.parent_path() / field<std::string>(w, "source"));
      const MetricGraph& gt = cache.get(path.parent_path() / field<std::string>(w, "target"));
      if (graph_to_json(gs) != graph_to_json(from.graph) || graph_to_json(gt) != graph_to_json(to.graph))
        throw FormatError(path.string() + " refers to graphs other than its package's");
      return witness_body(w, PointedSpace{from.graph, point(from.graph, sub(w, "source_base"))},
                          PointedSpace{to.graph, point(to.graph, sub(w, "target_base"))});
    };
    c.maps.push_back(ScheduledMaps{i, r, it->second, load("g", p.source, c.limit.source),
                                   load("h", p.target, c.limit.target)});
  }

  for (const auto& s : sub(j, "samples")) {
    SampleSequence seq{point(c.limit.source.graph, sub(s, "a")), rat(s, "r"), {}};
    for (const auto& t : sub(s, "terms")) {
      const auto i = field<std::size_t>(t, "i");
      seq.terms.push_back({i, point(package_at(i).source.graph, sub(t, "point"))});
    }
    c.samples.push_back(std::move(seq));
  }
  return c;
}

}  // namespace bldgraph
