// nblsim: simulate, analyze and batch-run the crash-tolerant learning protocol.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nbl/detectability.hpp"
#include "nbl/engine.hpp"
#include "nbl/errors.hpp"
#include "nbl/harness.hpp"
#include "nbl/identifiability.hpp"
#include "nbl/io.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_simulate(const fs::path& config_path, std::optional<std::uint64_t> seed,
                 std::optional<int> iterations, const fs::path& out, const std::string& checks) {
  nbl::SimulationConfig cfg = nbl::io::load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (iterations) cfg.iterations = *iterations;
  const nbl::ExecutionTrace trace = nbl::run_execution(cfg);
  nbl::io::save_trace(out / "trace.jsonl", trace, cfg.model);
  nbl::io::write_file(out / "trajectory.csv", nbl::trajectory_csv(trace));

  nbl::BatchSummary summary;
  summary.iterations = trace.iterations;
  nbl::SeedOutcome run;
  run.seed = cfg.seed;
  run.converged = nbl::converged(trace, cfg.theta_star, summary.threshold);
  run.min_mu = 1.0;
  for (nbl::NodeId i = 0; i < trace.agent_count(); ++i) {
    const double mu = nbl::probability(trace.final_beliefs[i], cfg.theta_star);
    run.final_mu.push_back(mu);
    if (trace.in_end_set(i, trace.iterations)) run.min_mu = std::min(run.min_mu, mu);
  }
  nbl::AnalysisOptions opts;
  opts.checks = nbl::CheckSelection::parse(checks);
  run.report = nbl::analyze_trace(trace, cfg.model, opts);
  const bool ok = run.report.passed();
  nbl::io::write_file(out / "report.json", run.report.to_json().dump(2) + "\n");
  summary.runs.push_back(std::move(run));
  summary.convergence_rate = summary.runs.front().converged ? 1.0 : 0.0;
  nbl::report_metrics(summary, out);
  std::cout << "seed " << cfg.seed << ": min mu(theta*) = " << summary.runs.front().min_mu
            << (summary.runs.front().converged ? " (converged)" : "") << '\n';
  return ok ? nbl::kExitOk : nbl::kExitCheckFailed;
}

int cmd_analyze(const fs::path& trace_path, const std::string& checks, const fs::path& out) {
  nbl::AnalysisOptions opts;
  opts.checks = nbl::CheckSelection::parse(checks);
  const nbl::VerificationReport rep = nbl::analyze_trace_file(trace_path, opts);
  const std::string text = rep.to_json().dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    nbl::io::write_file(out, text);
  }
  return rep.passed() ? nbl::kExitOk : nbl::kExitCheckFailed;
}

int cmd_batch(const fs::path& config_path, int seeds, const fs::path& out, double threshold,
              std::optional<int> iterations, const std::string& checks, bool no_gate,
              double min_rate, unsigned threads) {
  nbl::AnalysisOptions analysis;
  analysis.checks = nbl::CheckSelection::parse(checks);
  nbl::BatchSpec spec{.base = nbl::io::load_config(config_path),
                      .seeds = seeds,
                      .out_dir = out,
                      .analysis = analysis,
                      .threshold = threshold,
                      .gate = !no_gate,
                      .threads = threads};
  if (iterations) spec.base.iterations = *iterations;
  const nbl::BatchSummary s = nbl::run_batch(spec);
  if (s.refused) {
    std::cout << s.refusal << '\n';
    return nbl::kExitGateRefused;
  }
  std::cout << "convergence rate " << s.convergence_rate << " over " << s.runs.size()
            << " seeds (threshold " << threshold << ", T = " << s.iterations << ")\n";
  for (const auto& c : s.checks) {
    std::cout << "  " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (worst margin "
              << c.worst_margin << ", failing seeds " << c.failures << ")\n";
  }
  if (!s.invariants_ok) return nbl::kExitCheckFailed;
  if (spec.gate && s.convergence_rate < min_rate) return nbl::kExitNotConverged;
  return nbl::kExitOk;
}

int cmd_detect(const fs::path& graph_path, int f) {
  const nbl::DirectedGraph g = nbl::io::load_graph(graph_path);
  const nbl::DetectabilityReport r = nbl::detectability_report(g, f);
  std::cout << nbl::io::to_json(r).dump(2) << '\n';
  return nbl::kExitOk;
}

int cmd_identify(const fs::path& graph_path, const fs::path& model_path, int f) {
  const nbl::DirectedGraph g = nbl::io::load_graph(graph_path);
  const nbl::LikelihoodModel model = nbl::io::load_model(model_path);
  const nbl::ReducedGraphCatalog catalog(g, f);
  const nbl::DetectabilityReport detect = nbl::detectability_report(g, catalog);
  if (!detect.condition1_holds) {
    std::cout << nbl::io::Json{{"condition1", false}, {"assumption1", nullptr}}.dump(2) << '\n';
    return nbl::kExitGateRefused;
  }
  const nbl::IdentifiabilityReport r = nbl::check_assumption1(model, catalog);
  std::cout << nbl::io::to_json(r, model).dump(2) << '\n';
  return r.assumption1_ok ? nbl::kExitOk : nbl::kExitGateRefused;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crash-tolerant distributed hypothesis testing simulator"};
  app.require_subcommand(1);

  fs::path config, out, trace, graph, model;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::string checks = "all";
  int seeds = 10;
  int f = 0;
  double threshold = 0.99;
  double min_rate = 0.95;
  bool no_gate = false;
  unsigned threads = 0;

  auto* sim = app.add_subcommand("simulate", "Run one execution and write its trace");
  sim->add_option("--config", config, "Simulation config (JSON)")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "Override the config seed");
  sim->add_option("-T,--iterations", iterations, "Override the iteration budget");
  sim->add_option("--out", out, "Output directory")->required();
  sim->add_option("--checks", checks, "Checks to run on the trace")->capture_default_str();

  auto* ana = app.add_subcommand("analyze", "Verify a stored trace");
  ana->add_option("--trace", trace, "Trace (JSON lines)")->required()->check(CLI::ExistingFile);
  ana->add_option("--checks", checks,
                  "all, none, or a list of lemma1,lemma2,block_eta,thm2,prop1,prop2,prop3,lemma4,psi,thm3")
      ->capture_default_str();
  ana->add_option("--out", out, "Write the report here instead of stdout");

  auto* bat = app.add_subcommand("batch", "Run seeds base..base+n-1 and summarize");
  bat->add_option("--config", config, "Simulation config (JSON)")->required()->check(CLI::ExistingFile);
  bat->add_option("--seeds", seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
  bat->add_option("--out", out, "Output directory")->required();
  bat->add_option("--threshold", threshold, "Convergence threshold on mu(theta*)")->capture_default_str();
  bat->add_option("-T,--iterations", iterations, "Override the iteration budget");
  bat->add_option("--checks", checks, "Checks to run per seed")->capture_default_str();
  bat->add_option("--min-rate", min_rate, "Required convergence rate")->capture_default_str();
  bat->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  bat->add_flag("--no-gate", no_gate, "Run even when the identifiability preconditions fail");

  auto* det = app.add_subcommand("detect", "Print the detectability report of a graph");
  det->add_option("--graph", graph, "Graph (JSON)")->required()->check(CLI::ExistingFile);
  det->add_option("--f", f, "Crash budget")->required();

  auto* idf = app.add_subcommand("identify", "Print the identifiability report of a model");
  idf->add_option("--graph", graph, "Graph (JSON)")->required()->check(CLI::ExistingFile);
  idf->add_option("--model", model, "Likelihood model (JSON)")->required()->check(CLI::ExistingFile);
  idf->add_option("--f", f, "Crash budget")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? nbl::kExitOk : nbl::kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(config, seed, iterations, out, checks);
    if (*ana) return cmd_analyze(trace, checks, out);
    if (*bat) return cmd_batch(config, seeds, out, threshold, iterations, checks, no_gate, min_rate, threads);
    if (*det) return cmd_detect(graph, f);
    if (*idf) return cmd_identify(graph, model, f);
  } catch (const nbl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return nbl::kExitConfig;
  } catch (const nbl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return nbl::kExitConfig;
  } catch (const nbl::BudgetError& e) {
    std::cerr << "enumeration budget exceeded: " << e.what() << '\n';
    return nbl::kExitConfig;
  } catch (const nbl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nbl::kExitCheckFailed;
  }
  return nbl::kExitOk;
}
