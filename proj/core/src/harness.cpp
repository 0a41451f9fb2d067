#include "nbl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "nbl/decomposition.hpp"
#include "nbl/engine.hpp"
#include "nbl/ergodic.hpp"
#include "nbl/errors.hpp"
#include "nbl/pi_estimate.hpp"
#include "nbl/pseudo_belief.hpp"
#include "nbl/update_matrix.hpp"
#include "nbl/verification.hpp"

namespace nbl {
namespace {

constexpr double kPsiIdentityTolerance = 1e-9;
constexpr double kPsiRecursionTolerance = 1e-8;

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

CheckSelection CheckSelection::all() {
  CheckSelection c;
  c.lemma1 = c.lemma2 = c.block_eta = c.thm2 = c.prop1 = c.prop2 = c.prop3 = c.lemma4 = c.psi =
      c.thm3 = true;
  return c;
}

CheckSelection CheckSelection::parse(const std::string& text) {
  if (text == "all") return all();
  CheckSelection c;
  if (text.empty() || text == "none") return c;
  std::stringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name == "lemma1") c.lemma1 = true;
    else if (name == "lemma2") c.lemma2 = true;
    else if (name == "block_eta") c.block_eta = true;
    else if (name == "thm2") c.thm2 = true;
    else if (name == "prop1") c.prop1 = true;
    else if (name == "prop2") c.prop2 = true;
    else if (name == "prop3") c.prop3 = true;
    else if (name == "lemma4") c.lemma4 = true;
    else if (name == "psi") c.psi = true;
    else if (name == "thm3") c.thm3 = true;
    else throw ConfigError("unknown check '" + name + "'");
  }
  return c;
}

bool CheckSelection::empty() const {
  return !(lemma1 || lemma2 || block_eta || thm2 || prop1 || prop2 || prop3 || lemma4 || psi || thm3);
}

AnalysisContext make_context(const DirectedGraph& g, int f, const LikelihoodModel& model,
                             const EnumerationLimits& limits) {
  ReducedGraphCatalog catalog(g, f, limits);
  DetectabilityReport detect = detectability_report(g, catalog, limits);
  std::optional<IdentifiabilityReport> ident;
  if (detect.condition1_holds) ident = check_assumption1(model, catalog);
  return AnalysisContext{std::move(catalog), std::move(detect), std::move(ident)};
}

bool VerificationReport::passed() const {
  if (!trace_problems.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

io::Json VerificationReport::to_json() const {
  io::Json checks_json = io::Json::array();
  for (const auto& c : checks) checks_json.push_back(io::to_json(c));
  io::Json out{{"passed", passed()},
               {"trace_problems", trace_problems},
               {"checks", checks_json},
               {"skipped", skipped}};
  if (!final_rates.empty()) {
    io::Json rates = io::Json::array();
    for (const auto& r : final_rates) {
      io::Json row = io::Json::array();
      for (double v : r) row.push_back(io::number(v));
      rates.push_back(row);
    }
    out["final_rates"] = rates;
    out["rate_bound"] = io::number(rate_bound);
    out["rate_ok"] = rate_ok;
  }
  return out;
}

VerificationReport analyze_trace(const ExecutionTrace& trace, const LikelihoodModel& model,
                                 const AnalysisContext& ctx, const AnalysisOptions& options) {
  VerificationReport rep;
  const auto& sel = options.checks;
  if (sel.empty()) return rep;
  rep.trace_problems = validate_trace(trace);
  if (!rep.trace_problems.empty()) return rep;
  if (trace.iterations < 1) return rep;

  const auto matrices = build_update_matrices(trace);
  const bool cond1 = ctx.detect.condition1_holds;
  auto skip = [&](const std::string& name, const std::string& why) {
    rep.skipped.push_back(name + ": " + why);
  };

  if (sel.lemma1) rep.checks.push_back(check_lemma1_monotonicity(trace, matrices));
  if (sel.lemma2) rep.checks.push_back(check_lemma2(trace, matrices, options.lemma2_triples, trace.seed));
  if (sel.block_eta) rep.checks.push_back(check_block_eta(trace, matrices, ctx.detect));
  if (sel.thm2) {
    if (cond1) rep.checks.push_back(verify_theorem2(trace, matrices, ctx.detect));
    else skip("thm2", "Condition 1 does not hold");
  }
  if (sel.prop1) rep.checks.push_back(verify_proposition1(trace, matrices, ctx.catalog, ctx.detect).check);
  if (sel.prop2) rep.checks.push_back(verify_proposition2(trace, matrices));
  if (sel.prop3 || sel.lemma4) {
    if (cond1) {
      auto pi = verify_pi(trace, matrices, ctx.catalog, ctx.detect);
      if (sel.prop3) rep.checks.push_back(std::move(pi.convergence));
      if (sel.lemma4) rep.checks.push_back(std::move(pi.source_mass));
    } else {
      skip("prop3/lemma4", "Condition 1 does not hold");
    }
  }

  if (sel.psi || sel.thm3) {
    const PseudoBeliefs pseudo = pseudo_belief_evolution(trace, model);
    if (sel.psi) {
      CheckResult psi("psi");
      const double identity = pseudo_belief_identity_residual(trace, pseudo);
      psi.observe(kPsiIdentityTolerance - identity, 0.0, [&] {
        return "pseudo-belief differs from the real belief by " + format_double(identity);
      });
      for (int theta = 0; theta < trace.num_hypotheses; ++theta) {
        if (theta == trace.theta_star) continue;
        const PsiCheck pc = psi_recursion_check(trace, model, matrices, pseudo, theta, trace.theta_star);
        psi.observe(kPsiRecursionTolerance - pc.recursion_residual, 0.0, [&] {
          return "theta=" + model.hypothesis(theta) + ": recursion residual " +
                 format_double(pc.recursion_residual);
        });
        psi.observe(kPsiRecursionTolerance - pc.expansion_residual, 0.0, [&] {
          return "theta=" + model.hypothesis(theta) + ": expansion residual " +
                 format_double(pc.expansion_residual);
        });
      }
      rep.checks.push_back(std::move(psi));
    }
    if (sel.thm3) {
      if (!ctx.ident || !ctx.ident->assumption1_ok) {
        skip("thm3", "global identifiability does not hold");
      } else {
        CheckResult thm3("thm3");
        for (int theta = 0; theta < trace.num_hypotheses; ++theta) {
          if (theta == trace.theta_star) continue;
          const auto d = theorem3_decomposition(trace, model, matrices, pseudo, ctx.detect, *ctx.ident,
                                                theta, trace.theta_star);
          thm3.merge(d.drift_check);
          thm3.merge(d.consensus_check);
          thm3.observe(kPsiRecursionTolerance - d.identity_residual, 0.0, [&] {
            return "decomposition does not add up: residual " + format_double(d.identity_residual);
          });
          rep.final_rates.push_back(d.final_rate);
          rep.rate_bound = d.rate_bound;
          rep.rate_ok = rep.rate_ok && d.rate_ok;
        }
        rep.checks.push_back(std::move(thm3));
      }
    }
  }
  return rep;
}

VerificationReport analyze_trace(const ExecutionTrace& trace, const LikelihoodModel& model,
                                 const AnalysisOptions& options) {
  if (options.checks.empty()) return {};
  const AnalysisContext ctx = make_context(trace.graph, trace.f, model, options.limits);
  return analyze_trace(trace, model, ctx, options);
}

VerificationReport analyze_trace_file(const std::filesystem::path& trace_path,
                                      const AnalysisOptions& options) {
  const io::TraceFile file = io::load_trace(trace_path);
  return analyze_trace(file.trace, file.model, options);
}

std::string trajectory_csv(const ExecutionTrace& trace) {
  std::ostringstream out;
  out << "t,agent,mu_theta_star\n";
  for (int t = 1; t <= trace.iterations; ++t) {
    for (const auto& s : trace.record(t).steps) {
      if (!s.completed) continue;
      out << t << ',' << s.agent + 1 << ','
          << format_double(probability(s.log_belief, trace.theta_star)) << '\n';
    }
  }
  return out.str();
}

BatchSummary run_batch(const BatchSpec& spec) {
  if (spec.seeds < 1) throw ConfigError("a batch needs at least one seed");
  if (!(spec.threshold > 0.0 && spec.threshold <= 1.0)) throw ConfigError("threshold must lie in (0, 1]");
  spec.base.validate();

  BatchSummary summary;
  summary.iterations = spec.base.iterations;
  summary.threshold = spec.threshold;

  const AnalysisContext ctx =
      make_context(spec.base.graph, spec.base.f, spec.base.model, spec.analysis.limits);
  if (spec.gate) {
    std::string why;
    if (!ctx.detect.condition1_holds) why = "Condition 1 does not hold";
    else if (!ctx.ident->assumption1_ok) why = "global identifiability (Assumption 1) does not hold";
    if (!why.empty()) {
      summary.refused = true;
      summary.refusal = "identifiability precondition failed: " + why;
      if (!spec.out_dir.empty()) report_metrics(summary, spec.out_dir);
      return summary;
    }
  }

  summary.runs.resize(static_cast<std::size_t>(spec.seeds));
  std::vector<std::exception_ptr> errors(summary.runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < summary.runs.size(); k = next++) {
      try {
        SimulationConfig cfg = spec.base;
        cfg.seed = spec.base.seed + k;
        const ExecutionTrace trace = run_execution(cfg);
        SeedOutcome& out = summary.runs[k];
        out.seed = cfg.seed;
        out.converged = converged(trace, cfg.theta_star, spec.threshold);
        out.min_mu = 1.0;
        out.max_mu = 0.0;
        for (NodeId i = 0; i < trace.agent_count(); ++i) {
          const double mu = probability(trace.final_beliefs[i], cfg.theta_star);
          out.final_mu.push_back(mu);
          if (trace.in_end_set(i, trace.iterations)) {
            out.min_mu = std::min(out.min_mu, mu);
            out.max_mu = std::max(out.max_mu, mu);
          }
        }
        out.report = analyze_trace(trace, cfg.model, ctx, spec.analysis);
        if (!spec.out_dir.empty()) {
          const auto dir = spec.out_dir / ("seed_" + std::to_string(cfg.seed));
          io::save_trace(dir / "trace.jsonl", trace, cfg.model);
          io::write_file(dir / "report.json", out.report.to_json().dump(2) + "\n");
          io::write_file(dir / "trajectory.csv", trajectory_csv(trace));
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(summary.runs.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t hits = 0;
  for (const auto& run : summary.runs) {
    if (run.converged) ++hits;
    if (!run.report.trace_problems.empty()) summary.invariants_ok = false;
    for (const auto& c : run.report.checks) {
      auto it = std::find_if(summary.checks.begin(), summary.checks.end(),
                             [&](const CheckAggregate& a) { return a.name == c.name; });
      if (it == summary.checks.end()) {
        summary.checks.push_back({c.name, true, std::numeric_limits<double>::infinity(), 0});
        it = summary.checks.end() - 1;
      }
      it->worst_margin = std::min(it->worst_margin, c.worst_margin);
      if (!c.passed) {
        it->passed = false;
        ++it->failures;
        summary.invariants_ok = false;
      }
    }
  }
  summary.convergence_rate = static_cast<double>(hits) / static_cast<double>(summary.runs.size());
  if (!spec.out_dir.empty()) report_metrics(summary, spec.out_dir);
  return summary;
}

void report_metrics(const BatchSummary& summary, const std::filesystem::path& out_dir) {
  io::Json json{{"refused", summary.refused}};
  if (summary.refused) {
    json["refusal"] = summary.refusal;
    io::write_file(out_dir / "summary.json", json.dump(2) + "\n");
    return;
  }
  std::size_t n = summary.runs.empty() ? 0 : summary.runs.front().final_mu.size();
  std::ostringstream csv;
  csv << "seed,T,converged,min_mu";
  for (std::size_t i = 1; i <= n; ++i) csv << ",mu_" << i;
  csv << '\n';
  for (const auto& run : summary.runs) {
    csv << run.seed << ',' << summary.iterations << ',' << (run.converged ? 1 : 0) << ','
        << format_double(run.min_mu);
    for (double mu : run.final_mu) csv << ',' << format_double(mu);
    csv << '\n';
  }
  io::write_file(out_dir / "summary.csv", csv.str());

  io::Json checks = io::Json::array();
  for (const auto& c : summary.checks) {
    checks.push_back(io::Json{{"name", c.name},
                              {"passed", c.passed},
                              {"worst_margin", io::number(c.worst_margin)},
                              {"failing_seeds", c.failures}});
  }
  json["seeds"] = summary.runs.size();
  json["T"] = summary.iterations;
  json["threshold"] = summary.threshold;
  json["convergence_rate"] = summary.convergence_rate;
  json["invariants_ok"] = summary.invariants_ok;
  json["checks"] = checks;
  io::write_file(out_dir / "summary.json", json.dump(2) + "\n");
}

}  // namespace nbl
