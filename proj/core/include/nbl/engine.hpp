#pragma once

#include "nbl/simulation.hpp"
#include "nbl/trace.hpp"

namespace nbl {

// Discrete-event execution of the quorum protocol. Deterministic in
// (config, config.seed). Throws ConfigError if the config is invalid and
// DeadlockError if the scheduler runs dry while a live agent still waits.
ExecutionTrace run_execution(const SimulationConfig& config);

// True iff every agent alive at the end of iteration T holds
// mu_T(theta_star) >= threshold. threshold must lie in (0, 1].
bool converged(const ExecutionTrace& trace, int theta_star, double threshold);

}  // namespace nbl
