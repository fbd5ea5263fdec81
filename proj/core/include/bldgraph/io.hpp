#pragma once

// JSON file formats. Rationals are written as "p/q" or integer strings and
// points as {"vertex": name} or {"edge": name, "offset": "p/q"}.
//
//   .mg.json      graph
//   .gm.json      map; names its source and target graph files relative to itself
//   .walk.json    walk
//   .report.json  check results
//   .qi.json      ε-quasi-isometry witness on a named net
//   .pkg.json     pointed mapping package
//   .cert.json    convergence certificate manifest
//
// Every writer produces output that the matching reader turns back into an
// equal value. Output is deterministic: keys appear in a fixed order.

#include "bldgraph/checkers.hpp"
#include "bldgraph/convergence.hpp"
#include "bldgraph/lifting.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bldgraph {

/// Malformed or inconsistent file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_text(const std::filesystem::path& path, std::string_view text);

std::string graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(std::string_view text);
MetricGraph read_graph(const std::filesystem::path& path);
void write_graph(const std::filesystem::path& path, const MetricGraph& g);

std::string point_to_json(const MetricGraph& g, const GraphPoint& p);
GraphPoint point_from_json(const MetricGraph& g, std::string_view text);

/// Throws FormatError when some piece covers only part of a target edge,
/// which the map format cannot express.
std::string map_to_json(const GraphMap& f, const std::string& source_file, const std::string& target_file);
GraphMap map_from_json(std::string_view text, const MetricGraph& x, const MetricGraph& y);
GraphMap read_map(const std::filesystem::path& path);
/// Writes the map and, next to it, `<stem>.source.mg.json` and
/// `<stem>.target.mg.json`, where the map file is `<stem>.gm.json`.
void write_map(const std::filesystem::path& path, const GraphMap& f);

std::string walk_to_json(const MetricGraph& g, const Walk& w);
Walk walk_from_json(const MetricGraph& g, std::string_view text);
Walk read_walk(const std::filesystem::path& path, const MetricGraph& g);
void write_walk(const std::filesystem::path& path, const MetricGraph& g, const Walk& w);

/// Witness points are written in the source graph of f. `seconds` adds a
/// timing field.
std::string report_to_json(const GraphMap& f, const PropertyReport& r, std::optional<double> seconds = std::nullopt);
PropertyReport report_from_json(const GraphMap& f, std::string_view text);

std::string characterization_to_json(const Characterization& c, std::optional<double> seconds = std::nullopt);
std::string lift_to_json(const GraphMap& f, const Lift& lift);
std::string transport_to_json(const GraphMap& f, const FiberTransport& t);
std::string qi_verdict_to_json(const QuasiIsometryWitness& w, const QiVerdict& v);
std::string convergence_report_to_json(const ConvergenceReport& r);

/// The witness file names its graph files; they are resolved relative to it.
std::string witness_to_json(const QuasiIsometryWitness& w, const std::string& source_file,
                            const std::string& target_file);
QuasiIsometryWitness witness_from_json(std::string_view text, const PointedSpace& source, const PointedSpace& target);
QuasiIsometryWitness read_witness(const std::filesystem::path& path);
/// Writes the witness and its two graph files `<stem>.source.mg.json` and
/// `<stem>.target.mg.json`.
void write_witness(const std::filesystem::path& path, const QuasiIsometryWitness& w);

/// Writes the manifest `<dir>/<name>.cert.json` with one file per package,
/// map and graph beside it; returns the manifest path.
std::filesystem::path write_certificate(const std::filesystem::path& dir, const std::string& name,
                                        const ConvergenceCertificate& c);
ConvergenceCertificate read_certificate(const std::filesystem::path& manifest);

}  // namespace bldgraph
