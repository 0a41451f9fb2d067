#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbl/graph.hpp"
#include "nbl/likelihood.hpp"

namespace nbl {

// Where inside its iteration an agent stops.
//   before_transmit: sends nothing tagged t.
//   after_transmit:  its tag-t belief is on the wire; it never updates.
//   mid_update:      received its quorum, applied the update to the first
//                    `updated_hypotheses` entries, then stopped.
//   after_update:    finished iteration t; recorded as crashing before
//                    transmitting in iteration t + 1.
enum class CrashPhase { before_transmit, after_transmit, mid_update, after_update };

std::string to_string(CrashPhase phase);
CrashPhase crash_phase_from_string(const std::string& text);

struct CrashEvent {
  NodeId agent = 0;
  int iteration = 1;
  CrashPhase phase = CrashPhase::before_transmit;
  int updated_hypotheses = 0;  // mid_update only
};

enum class DelayMode {
  uniform,             // every message independently U[0, dmax]
  fixed,               // one delay per edge, drawn once (or given explicitly)
  adversarial_latest,  // held back until the receiver cannot otherwise reach its quorum
};

std::string to_string(DelayMode mode);
DelayMode delay_mode_from_string(const std::string& text);

struct EdgeDelay {
  NodeId from = 0;
  NodeId to = 0;
  double delay = 0.0;
};

struct AdversarySchedule {
  DelayMode mode = DelayMode::uniform;
  double dmax = 1.0;
  std::vector<CrashEvent> crash_plan;
  std::vector<EdgeDelay> edge_delays;  // fixed mode; edges not listed draw U[0, dmax]
  // adversarial_latest releases messages from these senders last.
  std::vector<NodeId> starved_senders;
};

struct SimulationConfig {
  DirectedGraph graph;
  int f = 0;
  LikelihoodModel model;
  int theta_star = 0;
  int iterations = 0;  // T
  std::uint64_t seed = 0;
  AdversarySchedule adversary;

  // Throws ConfigError on: |crash_plan| > f, duplicate crash agents,
  // f > min in-degree, model/graph size mismatch, bad theta_star, negative
  // or non-finite delays, T < 0.
  void validate() const;
};

}  // namespace nbl
