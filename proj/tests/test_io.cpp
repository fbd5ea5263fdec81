#include "doctest.h"

#include "bldgraph/fixtures.hpp"
#include "bldgraph/io.hpp"

#include <filesystem>
#include <random>

using namespace bldgraph;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("bldgraph_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string map_text(const GraphMap& f) { return map_to_json(f, "x", "y"); }

}  // namespace

TEST_CASE("graph files round-trip") {
  const MetricGraph g = MetricGraph::build(
      {{"a", "m", "b"}, {{"e1", "a", "m", Rational(3, 7)}, {"e2", "m", "b", 2}, {"e3", "b", "b", Rational(1, 2)}}, "m"});
  const std::string text = graph_to_json(g);
  CHECK(graph_to_json(graph_from_json(text)) == text);
  CHECK(text.find("\"3/7\"") != std::string::npos);
  CHECK(graph_from_json(text).basepoint() == GraphPoint::at_vertex(VertexId{1}));

  const GraphPoint p = g.point(EdgeId{0}, Rational(1, 5));
  CHECK(point_from_json(g, point_to_json(g, p)) == p);
  CHECK(point_from_json(g, R"({"edge":"e2","offset":"0"})") == GraphPoint::at_vertex(VertexId{1}));

  CHECK_THROWS_AS(graph_from_json("{"), FormatError);
  CHECK_THROWS_AS(graph_from_json(R"({"vertices":["a"],"edges":[{"id":"e","from":"a","to":"z","len":"1"}]})"),
                  FormatError);
  CHECK_THROWS_AS(graph_from_json(R"({"vertices":["a"],"edges":[{"id":"e","from":"a","to":"a","len":"0.5"}]})"),
                  FormatError);
  CHECK_THROWS_AS(point_from_json(g, R"({"edge":"e1","offset":"1"})"), FormatError);
}

TEST_CASE("map files round-trip with their graphs") {
  TempDir tmp;
  for (const GraphMap& f : {winding_map(2, 3), winding_map(3, 3), tent_map(), fold_map(), speed2_map(), const_map(),
                            identity_map(cycle_graph(4, 1))}) {
    const fs::path p = tmp.path / "sub" / "m.gm.json";
    write_map(p, f);
    CHECK(fs::exists(tmp.path / "sub" / "m.source.mg.json"));
    const GraphMap back = read_map(p);
    CHECK(map_text(back) == map_text(f));
    for (const auto& c : candidate_centers(f)) CHECK(back.eval(c) == f.eval(c));
  }
  // The collapsed edges of CONST are written as empty walks.
  CHECK(map_text(const_map()).find("\"e1\": []") != std::string::npos);
  CHECK_THROWS_AS(map_from_json(R"({"vertex_map":{},"edge_map":{}})", path_graph(1), path_graph(1)), FormatError);
}

TEST_CASE("walks and lifts round-trip") {
  std::mt19937 rng(7);
  const MetricGraph g = cycle_graph(3, Rational(2, 3));
  for (int k = 0; k < 20; ++k) {
    const Walk w = random_walk(rng, g, GraphPoint::at_vertex(VertexId{0}), 6);
    CHECK(walk_from_json(g, walk_to_json(g, w)) == w);
  }
  CHECK_THROWS_AS(walk_from_json(g, R"({"start":{"vertex":"v0"},"segments":[{"edge":"e2","from":"0","to":"1/3"}]})"),
                  FormatError);
}

TEST_CASE("reports round-trip") {
  for (const GraphMap& f : {fold_map(), tent_map(), speed2_map(), const_map(), winding_map(2, 3)})
    for (const Property p : {Property::LQ, Property::Radial, Property::Lipschitz}) {
      const PropertyReport r = check(f, p, 1);
      const std::string text = report_to_json(f, r);
      CHECK(report_to_json(f, report_from_json(f, text)) == text);
      CHECK(text.find("timing") == std::string::npos);
      CHECK(report_to_json(f, r, 0.5).find("timing_seconds") != std::string::npos);
    }
  const PropertyReport fail = check_lq(fold_map(), 1);
  REQUIRE(fail.witness);
  const PropertyReport back = report_from_json(fold_map(), report_to_json(fold_map(), fail));
  CHECK_FALSE(back.verdict);
  CHECK(back.witness->center == fail.witness->center);
  CHECK(back.witness->inequality == fail.witness->inequality);
}

TEST_CASE("witness and certificate files round-trip") {
  TempDir tmp;
  const PointedSpace c{cycle_graph(4, 1), GraphPoint::at_vertex(VertexId{0})};
  const auto w = make_witness(c, c, Rational(1, 2), Rational(1, 8), [](const GraphPoint& p) { return p; });
  write_witness(tmp.path / "id.qi.json", w);
  const auto wb = read_witness(tmp.path / "id.qi.json");
  CHECK(wb.net == w.net);
  CHECK(wb.image == w.image);
  CHECK(wb.epsilon == w.epsilon);
  CHECK(check_quasi_isometry(wb).passes);

  const ConvergenceCertificate cert = winding_demo(3, 4);
  const fs::path manifest = write_certificate(tmp.path / "demo", "winding", cert);
  const ConvergenceCertificate back = read_certificate(manifest);
  REQUIRE(back.maps.size() == cert.maps.size());
  CHECK(back.radii == cert.radii);
  CHECK(back.rate == cert.rate);
  for (std::size_t k = 0; k < cert.maps.size(); ++k) {
    CHECK(back.maps[k].epsilon == cert.maps[k].epsilon);
    CHECK(back.maps[k].g.image == cert.maps[k].g.image);
    CHECK(back.maps[k].h.net == cert.maps[k].h.net);
  }
  CHECK(convergence_report_to_json(check_package_convergence(back)) ==
        convergence_report_to_json(check_package_convergence(cert)));
  CHECK(check_package_convergence(back).converges);

  // Writing the re-read certificate reproduces the manifest byte for byte.
  const fs::path again = write_certificate(tmp.path / "again", "winding", back);
  CHECK(read_text(again) == read_text(manifest));
}
