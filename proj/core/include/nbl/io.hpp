#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nbl/check.hpp"
#include "nbl/detectability.hpp"
#include "nbl/graph.hpp"
#include "nbl/identifiability.hpp"
#include "nbl/likelihood.hpp"
#include "nbl/simulation.hpp"
#include "nbl/trace.hpp"

namespace nbl::io {

using Json = nlohmann::ordered_json;

// Graph: {"n": 4, "edges": [[from, to], ...]} with 1-based labels.
DirectedGraph graph_from_json(const Json& j);
Json graph_to_json(const DirectedGraph& g);
DirectedGraph load_graph(const std::filesystem::path& path);

// Model: {"hypotheses": [...], "agents": [{"signals": [...],
//         "likelihood": {"<hypothesis>": [p_w, ...]}}]}.
LikelihoodModel model_from_json(const Json& j);
Json model_to_json(const LikelihoodModel& model);
LikelihoodModel load_model(const std::filesystem::path& path);

// Config: graph / model inline or as graph_file / model_file (relative to
// the config's directory), f, theta_star (label or 1-based index), T, seed,
// adversary {mode, dmax, crash_plan [{agent, t, phase, k}],
// edge_delays [{from, to, delay}], starved [agents]}.
SimulationConfig config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json config_to_json(const SimulationConfig& config);
SimulationConfig load_config(const std::filesystem::path& path);

// Trace JSON-lines: a header line {"kind": "header", ...} with the graph,
// model, crash iterations and final beliefs, then one line per (t, agent in N[t])
// {"t", "agent", "alive", "quorum", "signal", "log_belief"[, "crash_phase"]}.
struct TraceFile {
  ExecutionTrace trace;
  LikelihoodModel model;
};
void write_trace(std::ostream& out, const ExecutionTrace& trace, const LikelihoodModel& model);
void save_trace(const std::filesystem::path& path, const ExecutionTrace& trace,
                const LikelihoodModel& model);
TraceFile read_trace(std::istream& in);
TraceFile load_trace(const std::filesystem::path& path);

Json to_json(const DetectabilityReport& report);
Json to_json(const IdentifiabilityReport& report, const LikelihoodModel& model);
Json to_json(const CheckResult& check);
Json to_json(const ReducedGraph& graph);

// Writes text atomically enough for our purposes; throws Error on failure.
void write_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);

// Doubles as JSON, mapping infinities to the strings "inf" / "-inf".
Json number(double value);

}  // namespace nbl::io
