#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nbl/check.hpp"
#include "nbl/detectability.hpp"
#include "nbl/identifiability.hpp"
#include "nbl/io.hpp"
#include "nbl/reduced_graph.hpp"
#include "nbl/simulation.hpp"
#include "nbl/trace.hpp"

namespace nbl {

// Names accepted by --checks, in report order.
struct CheckSelection {
  bool lemma1 = false;    // Hajnal-type bound and monotonicity of the coefficients
  bool lemma2 = false;    // restricted submultiplicativity
  bool block_eta = false; // overlap of crash-free blocks
  bool thm2 = false;      // consensus bound on backward products
  bool prop1 = false;     // reduced-graph dominance of A[t]
  bool prop2 = false;     // zeros outside N[t] and restricted row sums
  bool prop3 = false;     // limit row estimate
  bool lemma4 = false;    // source-component mass of the limit row
  bool psi = false;       // pseudo-belief identity and log-ratio recursion
  bool thm3 = false;      // drift / fluctuation decomposition

  static CheckSelection all();
  static CheckSelection none() { return {}; }
  // "all", "none", "" or a comma-separated list of the names above.
  static CheckSelection parse(const std::string& text);
  bool empty() const;
};

// Graph-level quantities shared by every trace of one (graph, f, model).
struct AnalysisContext {
  ReducedGraphCatalog catalog;
  DetectabilityReport detect;
  std::optional<IdentifiabilityReport> ident;  // absent when Condition 1 fails
};

AnalysisContext make_context(const DirectedGraph& g, int f, const LikelihoodModel& model,
                             const EnumerationLimits& limits = {});

struct AnalysisOptions {
  CheckSelection checks = CheckSelection::all();
  int lemma2_triples = 64;
  EnumerationLimits limits;
};

struct VerificationReport {
  std::vector<std::string> trace_problems;  // structural invariant violations
  std::vector<CheckResult> checks;
  std::vector<std::string> skipped;         // checks whose preconditions did not hold
  // Per alternative hypothesis theta != theta*: psi_T^i / T for survivors
  // and the -C1 xi^(n chi) / 2 reference, when thm3 ran.
  std::vector<std::vector<double>> final_rates;
  double rate_bound = 0.0;
  bool rate_ok = true;

  bool passed() const;
  io::Json to_json() const;
};

VerificationReport analyze_trace(const ExecutionTrace& trace, const LikelihoodModel& model,
                                 const AnalysisContext& context, const AnalysisOptions& options);
VerificationReport analyze_trace(const ExecutionTrace& trace, const LikelihoodModel& model,
                                 const AnalysisOptions& options);
VerificationReport analyze_trace_file(const std::filesystem::path& trace_path,
                                      const AnalysisOptions& options);

struct BatchSpec {
  SimulationConfig base;   // seed k of the batch uses base.seed + k
  int seeds = 1;
  std::filesystem::path out_dir;  // empty: keep everything in memory
  AnalysisOptions analysis;
  double threshold = 0.99;
  bool gate = true;        // refuse to run unless Condition 1 and Assumption 1 hold
  unsigned threads = 0;    // 0: hardware concurrency
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool converged = false;
  double min_mu = 0.0;           // over agents alive at the end
  double max_mu = 0.0;
  std::vector<double> final_mu;  // every agent, crashed ones at their last state
  VerificationReport report;
};

struct CheckAggregate {
  std::string name;
  bool passed = true;
  double worst_margin = 0.0;
  std::size_t failures = 0;
};

struct BatchSummary {
  bool refused = false;
  std::string refusal;
  int iterations = 0;
  double threshold = 0.99;
  std::vector<SeedOutcome> runs;
  double convergence_rate = 0.0;
  std::vector<CheckAggregate> checks;
  bool invariants_ok = true;  // no trace problem and every check passed
};

// Runs, analyzes and (with out_dir) persists each seed:
//   <out>/seed_<s>/trace.jsonl, report.json, trajectory.csv
// then writes <out>/summary.csv and <out>/summary.json.
BatchSummary run_batch(const BatchSpec& spec);

// summary.csv: seed,T,converged,min_mu,mu_1..mu_n; summary.json: aggregates.
void report_metrics(const BatchSummary& summary, const std::filesystem::path& out_dir);

// t,agent,mu_theta_star for every t >= 1 and agent in N-bar[t].
std::string trajectory_csv(const ExecutionTrace& trace);

// Exit statuses shared by the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitCheckFailed = 2,
  kExitNotConverged = 3,
  kExitGateRefused = 4,
};

}  // namespace nbl
