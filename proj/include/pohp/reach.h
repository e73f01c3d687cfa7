#ifndef POHP_REACH_H_
#define POHP_REACH_H_

#include <utility>
#include <vector>

#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace pohp {

// Per-node arrival probabilities factored into the agent's contribution
// (its action probabilities) and everything else (initial weights, daimon
// action probabilities, continue probabilities crossed on the way).
struct ReachTable {
  std::vector<double> total;   // agent[n] * daimon[n]
  std::vector<double> agent;
  std::vector<double> daimon;
};

ReachTable compute_reaches(const TreeIndex& tree, const StrategyTable& pi,
                           const DaimonTable& sigma);

struct ReachDecomposition {
  double total = 0.0;
  double agent = 0.0;
  double daimon = 0.0;
};

ReachDecomposition reach_probability(const TreeIndex& tree,
                                     const StrategyTable& pi,
                                     const DaimonTable& sigma,
                                     const History& h);

// P[to | from] for from a prefix of to; 0 when to is not an extension.
// Throws DomainError when from itself has zero probability.
double conditional_reach(const TreeIndex& tree, const StrategyTable& pi,
                         const DaimonTable& sigma, const History& from,
                         const History& to);

struct StateReach {
  double total = 0.0;        // sum of history arrival probabilities
  double agent = 0.0;        // common agent factor of the members
  double environment = 0.0;  // sum of the members' non-agent factors
};

// Realization probability of an information state, with its factorization
// into the agent part (shared across I(s) under perfect recall) and the
// summed environment part.
StateReach state_realization_prob(const TreeIndex& tree, const StrategyTable& pi,
                                  const DaimonTable& sigma, int state);

// Conditional distribution over I(s) given arrival at s: pairs of
// (node id, probability). Throws DomainError when s has zero probability.
std::vector<std::pair<int, double>> belief_at(const TreeIndex& tree,
                                              const StrategyTable& pi,
                                              const DaimonTable& sigma,
                                              int state);

}  // namespace pohp

#endif  // POHP_REACH_H_
