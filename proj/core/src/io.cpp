#include "nbl/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nbl/errors.hpp"

namespace nbl::io {
namespace {

const Json& require(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(what + " is missing \"" + std::string(key) + "\"");
  }
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

NodeId node_label(const Json& j, int n, const std::string& what) {
  const int label = get_as<int>(j, what);
  if (label < 1 || label > n) {
    throw ConfigError(what + ": node label " + std::to_string(label) + " is outside 1.." +
                      std::to_string(n));
  }
  return label - 1;
}

double as_double(const Json& j, const std::string& what) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  return get_as<double>(j, what);
}

int hypothesis_from_json(const Json& j, const LikelihoodModel& model, const std::string& what) {
  if (j.is_string()) return model.hypothesis_index(j.get<std::string>());
  const int label = get_as<int>(j, what);
  if (label < 1 || label > model.num_hypotheses()) {
    throw ConfigError(what + ": hypothesis index " + std::to_string(label) + " is out of range");
  }
  return label - 1;
}

Json parse(std::istream& in, const std::string& what) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Json belief_json(const LogBelief& b) {
  Json arr = Json::array();
  for (double v : b) arr.push_back(v);
  return arr;
}

LogBelief belief_from(const Json& j, const std::string& what) {
  LogBelief b;
  for (const auto& v : j) b.push_back(as_double(v, what));
  return b;
}

}  // namespace

Json number(double value) {
  if (std::isinf(value)) return value > 0 ? Json("inf") : Json("-inf");
  if (std::isnan(value)) return Json("nan");
  return Json(value);
}

DirectedGraph graph_from_json(const Json& j) {
  const int n = get_as<int>(require(j, "n", "graph"), "graph.n");
  if (n < 1) throw ConfigError("graph.n must be positive");
  std::vector<Edge> edges;
  const auto& list = require(j, "edges", "graph");
  if (!list.is_array()) throw ConfigError("graph.edges must be an array");
  for (const auto& e : list) {
    if (e.is_array() && e.size() == 2) {
      edges.push_back({node_label(e[0], n, "graph.edges"), node_label(e[1], n, "graph.edges")});
    } else if (e.is_object()) {
      edges.push_back({node_label(require(e, "from", "edge"), n, "graph.edges"),
                       node_label(require(e, "to", "edge"), n, "graph.edges")});
    } else {
      throw ConfigError("graph.edges entries must be [from, to] pairs");
    }
  }
  return DirectedGraph(n, edges);
}

Json graph_to_json(const DirectedGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back(Json::array({e.from + 1, e.to + 1}));
  return Json{{"n", g.size()}, {"edges", edges}};
}

LikelihoodModel model_from_json(const Json& j) {
  const auto hyps = get_as<std::vector<std::string>>(require(j, "hypotheses", "model"),
                                                     "model.hypotheses");
  std::vector<AgentLikelihood> agents;
  const auto& list = require(j, "agents", "model");
  if (!list.is_array()) throw ConfigError("model.agents must be an array");
  for (std::size_t a = 0; a < list.size(); ++a) {
    const std::string what = "model.agents[" + std::to_string(a) + "]";
    AgentLikelihood al;
    al.signals = get_as<std::vector<std::string>>(require(list[a], "signals", what), what);
    const auto& table = require(list[a], "likelihood", what);
    for (const auto& h : hyps) {
      if (!table.contains(h)) throw ConfigError(what + " has no likelihood row for '" + h + "'");
      al.table.push_back(get_as<std::vector<double>>(table.at(h), what));
    }
    agents.push_back(std::move(al));
  }
  return LikelihoodModel(hyps, std::move(agents));
}

Json model_to_json(const LikelihoodModel& model) {
  Json agents = Json::array();
  for (int a = 0; a < model.num_agents(); ++a) {
    Json table = Json::object();
    for (int h = 0; h < model.num_hypotheses(); ++h) {
      Json row = Json::array();
      for (double p : model.distribution(a, h)) row.push_back(p);
      table[model.hypothesis(h)] = row;
    }
    agents.push_back(Json{{"signals", model.agent(a).signals}, {"likelihood", table}});
  }
  return Json{{"hypotheses", model.hypotheses()}, {"agents", agents}};
}

SimulationConfig config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  auto resolve = [&](const Json& p) {
    std::filesystem::path path = get_as<std::string>(p, "file path");
    return path.is_absolute() ? path : base_dir / path;
  };
  const DirectedGraph graph = j.contains("graph_file") ? load_graph(resolve(j.at("graph_file")))
                                                       : graph_from_json(require(j, "graph", "config"));
  LikelihoodModel model = j.contains("model_file") ? load_model(resolve(j.at("model_file")))
                                                   : model_from_json(require(j, "model", "config"));
  const int n = graph.size();

  AdversarySchedule adv;
  if (j.contains("adversary")) {
    const auto& a = j.at("adversary");
    if (a.contains("mode")) adv.mode = delay_mode_from_string(get_as<std::string>(a.at("mode"), "mode"));
    if (a.contains("dmax")) adv.dmax = as_double(a.at("dmax"), "adversary.dmax");
    if (a.contains("crash_plan")) {
      for (const auto& c : a.at("crash_plan")) {
        CrashEvent ev;
        ev.agent = node_label(require(c, "agent", "crash"), n, "crash_plan");
        ev.iteration = get_as<int>(require(c, "t", "crash"), "crash_plan.t");
        ev.phase = crash_phase_from_string(get_as<std::string>(require(c, "phase", "crash"), "phase"));
        if (c.contains("k")) ev.updated_hypotheses = get_as<int>(c.at("k"), "crash_plan.k");
        adv.crash_plan.push_back(ev);
      }
    }
    if (a.contains("edge_delays")) {
      for (const auto& d : a.at("edge_delays")) {
        adv.edge_delays.push_back({node_label(require(d, "from", "edge delay"), n, "edge_delays"),
                                   node_label(require(d, "to", "edge delay"), n, "edge_delays"),
                                   as_double(require(d, "delay", "edge delay"), "delay")});
      }
    }
    if (a.contains("starved")) {
      for (const auto& s : a.at("starved")) adv.starved_senders.push_back(node_label(s, n, "starved"));
    }
  }

  const int theta_star = j.contains("theta_star")
                             ? hypothesis_from_json(j.at("theta_star"), model, "theta_star")
                             : 0;
  SimulationConfig cfg{graph,
                       get_as<int>(require(j, "f", "config"), "f"),
                       std::move(model),
                       theta_star,
                       j.contains("T") ? get_as<int>(j.at("T"), "T") : 5000,
                       j.contains("seed") ? get_as<std::uint64_t>(j.at("seed"), "seed") : 0,
                       std::move(adv)};
  cfg.validate();
  return cfg;
}

Json config_to_json(const SimulationConfig& config) {
  Json crashes = Json::array();
  for (const auto& c : config.adversary.crash_plan) {
    Json e{{"agent", c.agent + 1}, {"t", c.iteration}, {"phase", to_string(c.phase)}};
    if (c.phase == CrashPhase::mid_update) e["k"] = c.updated_hypotheses;
    crashes.push_back(e);
  }
  Json delays = Json::array();
  for (const auto& d : config.adversary.edge_delays) {
    delays.push_back(Json{{"from", d.from + 1}, {"to", d.to + 1}, {"delay", d.delay}});
  }
  Json starved = Json::array();
  for (NodeId s : config.adversary.starved_senders) starved.push_back(s + 1);
  return Json{{"graph", graph_to_json(config.graph)},
              {"model", model_to_json(config.model)},
              {"f", config.f},
              {"theta_star", config.model.hypothesis(config.theta_star)},
              {"T", config.iterations},
              {"seed", config.seed},
              {"adversary",
               Json{{"mode", to_string(config.adversary.mode)},
                    {"dmax", config.adversary.dmax},
                    {"crash_plan", crashes},
                    {"edge_delays", delays},
                    {"starved", starved}}}};
}

DirectedGraph load_graph(const std::filesystem::path& path) {
  return graph_from_json(read_json_file(path));
}

LikelihoodModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path));
}

SimulationConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path), path.parent_path());
}

void write_trace(std::ostream& out, const ExecutionTrace& trace, const LikelihoodModel& model) {
  Json crash = Json::array();
  for (int c : trace.crash_iteration) crash.push_back(c == kNeverCrashes ? Json(nullptr) : Json(c));
  Json finals = Json::array();
  for (const auto& b : trace.final_beliefs) finals.push_back(belief_json(b));
  Json header{{"kind", "header"},
              {"graph", graph_to_json(trace.graph)},
              {"model", model_to_json(model)},
              {"f", trace.f},
              {"theta_star", model.hypothesis(trace.theta_star)},
              {"T", trace.iterations},
              {"seed", trace.seed},
              {"crash_iteration", crash},
              {"initial_belief", belief_json(trace.initial_belief)},
              {"final_beliefs", finals}};
  out << header.dump() << '\n';
  for (const auto& rec : trace.records) {
    for (const auto& s : rec.steps) {
      Json quorum = Json::array();
      for (NodeId q : s.quorum) quorum.push_back(q + 1);
      Json line{{"t", rec.t},
                {"agent", s.agent + 1},
                {"alive", s.completed},
                {"quorum", quorum},
                {"signal", s.signal ? Json(model.agent(s.agent).signals[*s.signal]) : Json(nullptr)},
                {"log_belief", belief_json(s.log_belief)}};
      if (s.crash_phase) line["crash_phase"] = to_string(*s.crash_phase);
      out << line.dump() << '\n';
    }
  }
}

void save_trace(const std::filesystem::path& path, const ExecutionTrace& trace,
                const LikelihoodModel& model) {
  std::ostringstream buf;
  write_trace(buf, trace, model);
  write_file(path, buf.str());
}

TraceFile read_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&](Json& out) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out = Json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
      }
      return true;
    }
    return false;
  };

  Json header;
  if (!next(header) || !header.is_object() || header.value("kind", "") != "header") {
    throw ParseError("trace must start with a header line");
  }
  try {
    LikelihoodModel model = model_from_json(header.at("model"));
    DirectedGraph graph = graph_from_json(header.at("graph"));
    const int n = graph.size();
    const int T = header.at("T").get<int>();
    if (T < 0) throw ParseError("trace header has negative T");
    std::vector<int> crash;
    for (const auto& c : header.at("crash_iteration")) crash.push_back(c.is_null() ? kNeverCrashes : c.get<int>());
    ExecutionTrace trace{graph,
                         header.at("f").get<int>(),
                         model.num_hypotheses(),
                         hypothesis_from_json(header.at("theta_star"), model, "theta_star"),
                         T,
                         header.at("seed").get<std::uint64_t>(),
                         std::move(crash),
                         std::vector<IterationRecord>(static_cast<std::size_t>(T)),
                         belief_from(header.at("initial_belief"), "initial_belief"),
                         {}};
    for (const auto& b : header.at("final_beliefs")) trace.final_beliefs.push_back(belief_from(b, "final_beliefs"));
    for (int t = 1; t <= T; ++t) trace.records[t - 1].t = t;

    Json rec;
    while (next(rec)) {
      const std::string where = "trace line " + std::to_string(line_no);
      const int t = rec.at("t").get<int>();
      if (t < 1 || t > T) throw ParseError(where + ": iteration out of range");
      AgentStep s;
      s.agent = rec.at("agent").get<int>() - 1;
      if (s.agent < 0 || s.agent >= n) throw ParseError(where + ": agent out of range");
      s.completed = rec.at("alive").get<bool>();
      for (const auto& q : rec.at("quorum")) s.quorum.push_back(q.get<int>() - 1);
      if (!rec.at("signal").is_null()) {
        s.signal = model.signal_index(s.agent, rec.at("signal").get<std::string>());
      }
      s.log_belief = belief_from(rec.at("log_belief"), where);
      if (rec.contains("crash_phase")) s.crash_phase = crash_phase_from_string(rec.at("crash_phase").get<std::string>());
      trace.records[t - 1].steps.push_back(std::move(s));
    }
    for (auto& r : trace.records) {
      std::stable_sort(r.steps.begin(), r.steps.end(),
                       [](const AgentStep& a, const AgentStep& b) { return a.agent < b.agent; });
    }
    return TraceFile{std::move(trace), std::move(model)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed trace: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("malformed trace: ") + e.what());
  }
}

TraceFile load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_trace(in);
}

Json to_json(const ReducedGraph& graph) {
  Json nodes = Json::array();
  for (NodeId i : members(graph.graph.nodes)) nodes.push_back(i + 1);
  Json edges = Json::array();
  for (NodeId i : members(graph.graph.nodes)) {
    for (NodeId j : members(graph.graph.in[i])) edges.push_back(Json::array({j + 1, i + 1}));
  }
  return Json{{"nodes", nodes}, {"edges", edges}};
}

Json to_json(const DetectabilityReport& r) {
  Json out{{"n", r.n},
           {"f", r.f},
           {"condition1", r.condition1_holds},
           {"condition2", r.condition2_holds},
           {"chi", r.chi},
           {"gamma", r.gamma},
           {"xi", r.xi()},
           {"xi_power", number(r.xi_power())},
           {"log_xi_power", number(r.log_xi_power())}};
  if (r.condition1_witness) out["condition1_witness"] = to_json(*r.condition1_witness);
  if (r.condition2_witness) {
    out["condition2_witness"] = Json{{"L", format_set(r.condition2_witness->left)},
                                     {"R", format_set(r.condition2_witness->right)},
                                     {"C", format_set(r.condition2_witness->center)}};
  }
  return out;
}

Json to_json(const IdentifiabilityReport& r, const LikelihoodModel& model) {
  Json out{{"failure_free_identifiable", r.failure_free_ok},
           {"assumption1", r.assumption1_ok},
           {"C0", number(r.c0)},
           {"C1", number(r.c1)}};
  if (r.failure_free_witness) {
    out["failure_free_witness"] = Json{{"truth", model.hypothesis(r.failure_free_witness->truth)},
                                       {"alternative", model.hypothesis(r.failure_free_witness->alternative)}};
  }
  if (r.assumption1_witness) {
    const auto& w = *r.assumption1_witness;
    out["assumption1_witness"] = Json{{"truth", model.hypothesis(w.pair.truth)},
                                      {"alternative", model.hypothesis(w.pair.alternative)},
                                      {"reduced_graph", w.reduced_graph},
                                      {"source", format_set(w.source)}};
  }
  return out;
}

Json to_json(const CheckResult& c) {
  return Json{{"name", c.name},
              {"passed", c.passed},
              {"worst_margin", number(c.worst_margin)},
              {"evaluations", c.evaluations},
              {"witnesses", c.witnesses}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse(in, path.string());
}

}  // namespace nbl::io
