#ifndef POHP_EVALUATE_H_
#define POHP_EVALUATE_H_

#include <cstdint>
#include <vector>

#include "pohp/spec.h"
#include "pohp/types.h"

namespace pohp {

struct Episode {
  History final_history;
  std::vector<Observation> observations;  // one per agent-turn history visited
  std::vector<double> rewards;            // aligned with observations
  double ret = 0.0;                       // sum of collected rewards
  bool terminated = true;                 // false only if the step cap hit
};

struct EvaluateOptions {
  long step_cap = 100000;    // per-episode safety cap (sampling)
  long node_budget = 0;      // exact walk; 0 = POHP_NODE_BUDGET env or 200000
};

// Plays one episode. At every agent-turn history the observation is emitted
// and its reward collected, then the process survives with the continue
// probability before the agent moves; daimon turns always produce an action.
// Deterministic for a fixed seed.
Episode sample_episode(const PohpSpec& spec, const AgentSpec& agent,
                       const AgentPolicy& pi, const DaimonPolicy& sigma,
                       std::uint64_t seed, const EvaluateOptions& opts = {});

// Exact expected return from the initial distribution: rewards are collected
// on arrival at each agent-turn history, discounted by the continue
// probabilities crossed on the way.
double expected_return(const PohpSpec& spec, const AgentSpec& agent,
                       const AgentPolicy& pi, const DaimonPolicy& sigma,
                       const EvaluateOptions& opts = {});

// Same, conditioned on starting from `from` (which must be reachable).
double expected_return_from(const PohpSpec& spec, const AgentSpec& agent,
                            const AgentPolicy& pi, const DaimonPolicy& sigma,
                            const History& from, const EvaluateOptions& opts = {});

}  // namespace pohp

#endif  // POHP_EVALUATE_H_
