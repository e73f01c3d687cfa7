#include "pohp/reach.h"

#include <string>

#include "pohp/errors.h"

namespace pohp {

ReachTable compute_reaches(const TreeIndex& tree, const StrategyTable& pi,
                           const DaimonTable& sigma) {
  const std::size_t n = tree.nodes().size();
  ReachTable r;
  r.total.assign(n, 0.0);
  r.agent.assign(n, 0.0);
  r.daimon.assign(n, 0.0);
  for (std::size_t k = 0; k < tree.roots().size(); ++k) {
    int id = tree.roots()[k];
    r.agent[id] = 1.0;
    r.daimon[id] = tree.spec().initial_histories[k].weight;
  }
  // Nodes are stored parents-first, so one forward sweep suffices.
  for (std::size_t id = 0; id < n; ++id) {
    const TreeNode& node = tree.node(static_cast<int>(id));
    r.total[id] = r.agent[id] * r.daimon[id];
    if (node.terminal) continue;
    for (std::size_t i = 0; i < node.actions.size(); ++i) {
      int c = node.children[i];
      if (node.active) {
        r.agent[c] = r.agent[id] * pi.rows[node.state][i];
        r.daimon[c] = r.daimon[id] * node.gamma;
      } else {
        r.agent[c] = r.agent[id];
        r.daimon[c] = r.daimon[id] * sigma.rows[id][i];
      }
    }
  }
  return r;
}

ReachDecomposition reach_probability(const TreeIndex& tree,
                                     const StrategyTable& pi,
                                     const DaimonTable& sigma,
                                     const History& h) {
  int id = tree.node_id(h);
  if (id < 0) throw DomainError("history not in the index: " + to_string(h));
  ReachTable r = compute_reaches(tree, pi, sigma);
  return ReachDecomposition{r.total[id], r.agent[id], r.daimon[id]};
}

double conditional_reach(const TreeIndex& tree, const StrategyTable& pi,
                         const DaimonTable& sigma, const History& from,
                         const History& to) {
  int a = tree.node_id(from);
  int b = tree.node_id(to);
  if (a < 0) throw DomainError("history not in the index: " + to_string(from));
  if (b < 0) throw DomainError("history not in the index: " + to_string(to));
  ReachTable r = compute_reaches(tree, pi, sigma);
  if (r.total[a] <= 0.0)
    throw DomainError("conditioning on a zero-probability history: " +
                      to_string(from));
  if (a == b) return 1.0;
  // Multiply step probabilities up the parent chain of `to`; fail out when
  // the chain misses `from`.
  double p = 1.0;
  int cur = b;
  while (cur != a) {
    const TreeNode& node = tree.node(cur);
    if (node.parent < 0) return 0.0;
    const TreeNode& par = tree.node(node.parent);
    std::size_t slot = 0;
    while (par.children[slot] != cur) ++slot;
    if (par.active)
      p *= pi.rows[par.state][slot] * par.gamma;
    else
      p *= sigma.rows[node.parent][slot];
    cur = node.parent;
  }
  return p;
}

StateReach state_realization_prob(const TreeIndex& tree,
                                  const StrategyTable& pi,
                                  const DaimonTable& sigma, int state) {
  const StateEntry& e = tree.state(state);
  ReachTable r = compute_reaches(tree, pi, sigma);
  StateReach out;
  // The agent factor is shared across I(s) under perfect recall; report the
  // first member's factor as the representative in general.
  out.agent = e.histories.empty() ? 0.0 : r.agent[e.histories.front()];
  for (int h : e.histories) {
    out.total += r.total[h];
    out.environment += r.daimon[h];
  }
  return out;
}

std::vector<std::pair<int, double>> belief_at(const TreeIndex& tree,
                                              const StrategyTable& pi,
                                              const DaimonTable& sigma,
                                              int state) {
  const StateEntry& e = tree.state(state);
  ReachTable r = compute_reaches(tree, pi, sigma);
  double mass = 0.0;
  for (int h : e.histories) mass += r.total[h];
  if (mass <= 0.0)
    throw DomainError("belief conditioned on an unrealized state: " + e.value);
  std::vector<std::pair<int, double>> belief;
  belief.reserve(e.histories.size());
  for (int h : e.histories) belief.emplace_back(h, r.total[h] / mass);
  return belief;
}

}  // namespace pohp
