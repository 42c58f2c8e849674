#pragma once

#include <iosfwd>
#include <string>

#include "iic/closure.hpp"
#include "iic/estimate.hpp"
#include "iic/graph.hpp"
#include "iic/seeds.hpp"

namespace iic {

/// Canonical on-disk graph schema:
/// {"n": int, "directed": [[j,i],...], "bidirected": [[a,b],...],
///  "labels": {"0":"Z",...}?}
MixedGraph graph_from_json(const std::string& text);
std::string graph_to_json(const MixedGraph& g);

/// SeedSpec schema: {"iv": [["Z","T","Y"],...], "intervened": ["PKA",...],
/// "ng_rule": false, "prior": [{"edge":["j","i"], "value": 0.8}]}
/// Node references resolve through graph labels, falling back to indices.
SeedSpec seedspec_from_json(const std::string& text, const MixedGraph& g);
std::string seedspec_to_json(const SeedSpec& spec, const MixedGraph& g);

std::string witness_to_json(const MixedGraph& g, const Witness& w);

/// classify output: one row per edge `edge,status,rule,iteration,witness_sources`.
void write_result_csv(std::ostream& os, const MixedGraph& g, const ClosureResult& res,
                      uint64_t rng_seed, const std::string& config);

/// data CSV: header = node labels (+ optional __regime), one row per sample.
Dataset dataset_from_csv(std::istream& is, const MixedGraph& g);
void dataset_to_csv(std::ostream& os, const MixedGraph& g, const Dataset& d);

std::string read_stream_or_file(const std::string& path_or_dash);  // "-" reads stdin

}  // namespace iic
