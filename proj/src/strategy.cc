#include "pohp/strategy.h"

#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "pohp/errors.h"

namespace pohp {
namespace {

void check_simplex(const std::vector<double>& row, std::size_t n,
                   const std::string& where) {
  if (row.size() != n)
    throw ValidationError(where + ": row has " + std::to_string(row.size()) +
                          " entries for " + std::to_string(n) + " actions");
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= -1e-12))
      throw ValidationError(where + ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError(where + ": probabilities sum to " +
                          std::to_string(sum));
}

}  // namespace

StrategyTable StrategyTable::uniform(const TreeIndex& tree) {
  StrategyTable t;
  t.rows.resize(tree.states().size());
  for (int s : tree.decision_states())
    t.rows[s] = uniform_weights(tree.state(s).actions.size());
  return t;
}

StrategyTable StrategyTable::from_policy(const TreeIndex& tree,
                                         const AgentPolicy& pi) {
  StrategyTable t;
  t.rows.resize(tree.states().size());
  for (int s : tree.decision_states()) {
    const StateEntry& e = tree.state(s);
    t.rows[s] = pi(e.value, e.actions);
    check_simplex(t.rows[s], e.actions.size(), "agent policy at " + e.value);
  }
  return t;
}

AgentPolicy StrategyTable::as_policy(const TreeIndex& tree) const {
  // Copy the rows keyed by info state so the closure outlives this table.
  std::map<InfoState, std::vector<double>> by_state;
  for (int s : tree.decision_states())
    by_state[tree.state(s).value] = rows[s];
  return [by_state](const InfoState& s,
                    const std::vector<Action>& actions) -> std::vector<double> {
    auto it = by_state.find(s);
    if (it == by_state.end()) return uniform_weights(actions.size());
    return it->second;
  };
}

void StrategyTable::validate(const TreeIndex& tree) const {
  if (rows.size() != tree.states().size())
    throw ValidationError("strategy table sized for a different index");
  for (int s : tree.decision_states())
    check_simplex(rows[s], tree.state(s).actions.size(),
                  "strategy at " + tree.state(s).value);
}

DaimonTable DaimonTable::uniform(const TreeIndex& tree) {
  DaimonTable t;
  t.rows.resize(tree.nodes().size());
  for (std::size_t n = 0; n < tree.nodes().size(); ++n) {
    const TreeNode& node = tree.node(static_cast<int>(n));
    if (!node.active && !node.terminal)
      t.rows[n] = uniform_weights(node.actions.size());
  }
  return t;
}

DaimonTable DaimonTable::from_policy(const TreeIndex& tree,
                                     const DaimonPolicy& sigma) {
  DaimonTable t;
  t.rows.resize(tree.nodes().size());
  for (std::size_t n = 0; n < tree.nodes().size(); ++n) {
    const TreeNode& node = tree.node(static_cast<int>(n));
    if (node.active || node.terminal) continue;
    t.rows[n] = sigma(tree.history_of(static_cast<int>(n)), node.actions);
    check_simplex(t.rows[n], node.actions.size(),
                  "daimon policy at " + to_string(tree.history_of(static_cast<int>(n))));
  }
  return t;
}

DaimonPolicy DaimonTable::as_policy(const TreeIndex& tree) const {
  // Keep a shared copy of the rows plus a resolver from histories to nodes.
  auto rows_copy = std::make_shared<std::vector<std::vector<double>>>(rows);
  const TreeIndex* index = &tree;
  return [rows_copy, index](const History& h, const std::vector<Action>& actions)
             -> std::vector<double> {
    int n = index->node_id(h);
    if (n < 0 || (*rows_copy)[n].empty())
      return uniform_weights(actions.size());
    return (*rows_copy)[n];
  };
}

void DaimonTable::validate(const TreeIndex& tree) const {
  if (rows.size() != tree.nodes().size())
    throw ValidationError("daimon table sized for a different index");
  for (std::size_t n = 0; n < tree.nodes().size(); ++n) {
    const TreeNode& node = tree.node(static_cast<int>(n));
    if (node.active || node.terminal) continue;
    check_simplex(rows[n], node.actions.size(), "daimon row");
  }
}

PureStrategySet PureStrategySet::enumerate(const TreeIndex& tree, long budget) {
  PureStrategySet set;
  set.states = tree.decision_states();
  set.size = 1;
  for (int s : set.states) {
    int k = static_cast<int>(tree.state(s).actions.size());
    set.arity.push_back(k);
    if (set.size > budget / k)
      throw ResourceError("pure strategy enumeration exceeds budget of " +
                          std::to_string(budget));
    set.size *= k;
  }
  return set;
}

PureStrategy PureStrategySet::at(long index, const TreeIndex& tree) const {
  if (index < 0 || index >= size)
    throw DomainError("pure strategy index out of range");
  PureStrategy x(tree.states().size(), -1);
  for (int i = static_cast<int>(states.size()) - 1; i >= 0; --i) {
    x[states[i]] = static_cast<int>(index % arity[i]);
    index /= arity[i];
  }
  return x;
}

long PureStrategySet::index_of(const PureStrategy& x) const {
  long index = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    int a = x[states[i]];
    if (a < 0 || a >= arity[i])
      throw DomainError("pure strategy has no action at a decision state");
    index = index * arity[i] + a;
  }
  return index;
}

double pure_weight(const TreeIndex& tree, const StrategyTable& pi,
                   const PureStrategy& x) {
  double w = 1.0;
  for (int s : tree.decision_states()) w *= pi.rows[s][x[s]];
  return w;
}

StrategyTable pure_table(const TreeIndex& tree, const PureStrategy& x) {
  StrategyTable t;
  t.rows.resize(tree.states().size());
  for (int s : tree.decision_states()) {
    t.rows[s].assign(tree.state(s).actions.size(), 0.0);
    t.rows[s][x[s]] = 1.0;
  }
  return t;
}

}  // namespace pohp
