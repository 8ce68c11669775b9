// json_io.hpp — the JSON graph-spec format and report serialization. Field
// names are pinned in docs/spec-format.md; numbers are IEEE doubles in
// decimal.
#pragma once
#include <string>

#include <json.hpp>

#include "chainspec/capacity.hpp"
#include "chainspec/criteria.hpp"
#include "chainspec/graph.hpp"
#include "chainspec/harmonic.hpp"
#include "chainspec/liouville.hpp"

namespace chainspec {

nlohmann::json sequence_to_json(const SequenceSpec& s);
SequenceSpec sequence_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const GraphSpec& g);
GraphSpec graph_from_json(const nlohmann::json& j);

// ParseError with line/column context on malformed input.
GraphSpec load_graph(const std::string& path);
void save_graph(const GraphSpec& g, const std::string& path);

nlohmann::json series_to_json(const SeriesVerdict& v);
nlohmann::json report_to_json(const PropertyReport& r); // schema chainspec/1
PropertyReport report_from_json(const nlohmann::json& j);
nlohmann::json capacity_to_json(const CapacityRecord& r);
nlohmann::json comparison_to_json(const CapacityComparison& c);

// witness export: {"index": value} pairs plus metadata (C, residual, l2)
nlohmann::json witness_to_json(const HarmonicSolution& v, std::int64_t window,
                               double residual);
nlohmann::json green_to_json(const GreenFunction& g);

} // namespace chainspec
