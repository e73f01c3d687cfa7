#ifndef POHP_STRATEGY_H_
#define POHP_STRATEGY_H_

#include <vector>

#include "pohp/spec.h"
#include "pohp/tree.h"

namespace pohp {

// Behavioral strategy for the agent, stored densely over an index's states.
// rows[s] is a distribution over state(s).actions for decision states and
// empty elsewhere.
struct StrategyTable {
  std::vector<std::vector<double>> rows;

  static StrategyTable uniform(const TreeIndex& tree);
  static StrategyTable from_policy(const TreeIndex& tree, const AgentPolicy& pi);
  AgentPolicy as_policy(const TreeIndex& tree) const;

  double prob(int state, int action_index) const {
    return rows[state][action_index];
  }
  void validate(const TreeIndex& tree) const;  // shape + simplex rows
};

// Behavioral daimon strategy, stored densely over an index's nodes.
// rows[n] is a distribution over node(n).actions for non-terminal passive
// nodes and empty elsewhere.
struct DaimonTable {
  std::vector<std::vector<double>> rows;

  static DaimonTable uniform(const TreeIndex& tree);
  static DaimonTable from_policy(const TreeIndex& tree, const DaimonPolicy& sigma);
  DaimonPolicy as_policy(const TreeIndex& tree) const;
  void validate(const TreeIndex& tree) const;
};

// Pure strategy: an action index per state, -1 where the state makes no
// decision. Indexed by state id.
using PureStrategy = std::vector<int>;

// Canonical enumeration of all pure strategies as mixed-radix words over the
// decision states (most significant digit = lowest state id).
struct PureStrategySet {
  std::vector<int> states;  // decision state ids, ascending
  std::vector<int> arity;   // actions per decision state
  long size = 0;

  static PureStrategySet enumerate(const TreeIndex& tree, long budget = 1 << 20);
  PureStrategy at(long index, const TreeIndex& tree) const;
  long index_of(const PureStrategy& x) const;
};

// Probability the behavioral table plays exactly the pure strategy, taking
// the product over decision states.
double pure_weight(const TreeIndex& tree, const StrategyTable& pi,
                   const PureStrategy& x);

// Delta table on one pure strategy.
StrategyTable pure_table(const TreeIndex& tree, const PureStrategy& x);

// Mixed strategy: explicit weights over a PureStrategySet enumeration.
struct MixedStrategy {
  std::vector<double> weights;  // aligned with PureStrategySet indices
};

}  // namespace pohp

#endif  // POHP_STRATEGY_H_
