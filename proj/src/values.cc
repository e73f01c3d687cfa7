#include "pohp/values.h"

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "pohp/errors.h"

namespace pohp {
namespace {

// Expected discounted continuation of taking action slot `i` at active node
// `id`: crosses the continue probability, the daimon's reply, and the reply's
// arrival reward.
double departure_action_value(const TreeIndex& tree, const DaimonTable& sigma,
                              const std::vector<double>& dep, int id, int i) {
  const TreeNode& node = tree.node(id);
  int mid = node.children[i];
  const TreeNode& between = tree.node(mid);
  double acc = 0.0;
  for (std::size_t b = 0; b < between.actions.size(); ++b) {
    int land = between.children[b];
    acc += sigma.rows[mid][b] * (tree.node(land).reward + dep[land]);
  }
  return node.gamma * acc;
}

}  // namespace

Evaluation evaluate_strategies(const TreeIndex& tree, const StrategyTable& pi,
                               const DaimonTable& sigma) {
  pi.validate(tree);
  sigma.validate(tree);
  const std::size_t n = tree.nodes().size();
  Evaluation ev;
  ev.reach = compute_reaches(tree, pi, sigma);
  ev.node_departure.assign(n, 0.0);
  ev.node_arrival.assign(n, 0.0);

  // Nodes are stored parents-first, so a reverse sweep sees children first.
  for (int id = static_cast<int>(n) - 1; id >= 0; --id) {
    const TreeNode& node = tree.node(id);
    if (node.terminal) {
      ev.node_arrival[id] = node.active ? node.reward : 0.0;
      continue;
    }
    double v = 0.0;
    if (node.active) {
      for (std::size_t i = 0; i < node.actions.size(); ++i)
        v += pi.rows[node.state][i] *
             departure_action_value(tree, sigma, ev.node_departure, id,
                                    static_cast<int>(i));
    } else {
      for (std::size_t b = 0; b < node.actions.size(); ++b) {
        int c = node.children[b];
        v += sigma.rows[id][b] * (tree.node(c).reward + ev.node_departure[c]);
      }
    }
    ev.node_departure[id] = v;
    ev.node_arrival[id] = v + (node.active ? node.reward : 0.0);
  }

  ev.total = 0.0;
  for (std::size_t k = 0; k < tree.roots().size(); ++k)
    ev.total += tree.spec().initial_histories[k].weight *
                ev.node_arrival[tree.roots()[k]];

  const std::size_t m = tree.states().size();
  ev.state_reach.assign(m, 0.0);
  ev.state_value.assign(m, 0.0);
  ev.state_cf.assign(m, 0.0);
  ev.state_local_reward.assign(m, 0.0);
  ev.action_value.resize(m);
  ev.action_cf.resize(m);
  for (std::size_t s = 0; s < m; ++s) {
    const StateEntry& e = tree.state(static_cast<int>(s));
    for (int h : e.histories) {
      ev.state_reach[s] += ev.reach.total[h];
      ev.state_value[s] += ev.reach.total[h] * ev.node_departure[h];
      ev.state_cf[s] += ev.reach.daimon[h] * ev.node_departure[h];
      const TreeNode& node = tree.node(h);
      if (node.terminal) continue;
      if (node.active) {
        // Reward mass surfacing at the next arrivals below h.
        for (std::size_t i = 0; i < node.actions.size(); ++i) {
          int mid = node.children[i];
          const TreeNode& between = tree.node(mid);
          for (std::size_t b = 0; b < between.actions.size(); ++b) {
            ev.state_local_reward[s] += ev.reach.total[h] * node.gamma *
                                        pi.rows[node.state][i] *
                                        sigma.rows[mid][b] *
                                        tree.node(between.children[b]).reward;
          }
        }
      } else {
        for (std::size_t b = 0; b < node.actions.size(); ++b)
          ev.state_local_reward[s] += ev.reach.total[h] * sigma.rows[h][b] *
                                      tree.node(node.children[b]).reward;
      }
    }
  }
  for (int s : tree.decision_states()) {
    const StateEntry& e = tree.state(s);
    ev.action_value[s].assign(e.actions.size(), 0.0);
    ev.action_cf[s].assign(e.actions.size(), 0.0);
    for (int h : e.histories) {
      for (std::size_t i = 0; i < e.actions.size(); ++i) {
        double dep = departure_action_value(tree, sigma, ev.node_departure, h,
                                            static_cast<int>(i));
        ev.action_value[s][i] += ev.reach.total[h] * dep;
        ev.action_cf[s][i] += ev.reach.daimon[h] * dep;
      }
    }
  }
  return ev;
}

StateValueReport rw_expected_return(const TreeIndex& tree,
                                    const StrategyTable& pi,
                                    const DaimonTable& sigma, int state) {
  Evaluation ev = evaluate_strategies(tree, pi, sigma);
  return StateValueReport{ev.state_value[state], ev.state_reach[state] > 0.0};
}

double counterfactual_value(const TreeIndex& tree, const StrategyTable& pi,
                            const DaimonTable& sigma, int state) {
  if (!tree.agent().perfect_recall)
    throw ContractError("counterfactual values need a perfect-recall agent");
  Evaluation ev = evaluate_strategies(tree, pi, sigma);
  return ev.state_cf[state];
}

namespace {

// Behavioral table realizing a pointwise deviation of pi.
StrategyTable forced_table(const TreeIndex&, const StrategyTable& pi,
                           const ForcedRegion& fr) {
  StrategyTable out = pi;
  for (const auto& [s, a] : fr.forced) {
    out.rows[s].assign(out.rows[s].size(), 0.0);
    out.rows[s][a] = 1.0;
  }
  return out;
}

// Decision states reached from `s` by skipping through the between-action
// bookkeeping states, each collected once.  These are the anchors whose full
// regrets telescope out of `s`'s own.
std::vector<int> successor_decision_states(const TreeIndex& tree, int s) {
  std::set<int> out;
  std::set<int> seen;
  std::vector<int> frontier(tree.state(s).child_states.begin(),
                            tree.state(s).child_states.end());
  while (!frontier.empty()) {
    int t = frontier.back();
    frontier.pop_back();
    if (!seen.insert(t).second) continue;
    const StateEntry& e = tree.state(t);
    if (e.terminal) continue;
    if (e.active) {
      out.insert(t);
      continue;
    }
    frontier.insert(frontier.end(), e.child_states.begin(),
                    e.child_states.end());
  }
  return {out.begin(), out.end()};
}

std::vector<double> enumerated_state_values(const TreeIndex& tree,
                                            const StrategyTable& pi,
                                            const DaimonTable& sigma,
                                            const Deviation& dev) {
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  std::vector<double> acc(tree.states().size(), 0.0);
  std::map<long, std::vector<double>> memo;  // image index -> state values
  for (long i = 0; i < universe.size; ++i) {
    PureStrategy x = universe.at(i, tree);
    double w = pure_weight(tree, pi, x);
    if (w <= 0.0) continue;
    long image = universe.index_of(apply_deviation(tree, universe, dev, x));
    auto it = memo.find(image);
    if (it == memo.end()) {
      Evaluation ev = evaluate_strategies(
          tree, pure_table(tree, universe.at(image, tree)), sigma);
      it = memo.emplace(image, std::move(ev.state_value)).first;
    }
    for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += w * it->second[s];
  }
  return acc;
}

}  // namespace

std::vector<double> deviated_state_values(const TreeIndex& tree,
                                          const StrategyTable& pi,
                                          const DaimonTable& sigma,
                                          const Deviation& dev) {
  ForcedRegion fr = forced_region(tree, dev);
  if (fr.representable)
    return evaluate_strategies(tree, forced_table(tree, pi, fr), sigma)
        .state_value;
  return enumerated_state_values(tree, pi, sigma, dev);
}

double immediate_regret(const TreeIndex& tree, const StrategyTable& pi,
                        const DaimonTable& sigma, const Deviation& dev,
                        int state) {
  Deviation before = truncate(dev, state, TruncationMode::kBefore);
  ForcedRegion fr_before = forced_region(tree, before);
  if (fr_before.representable) {
    // The two truncations differ at most in forcing `state` itself, so one
    // sweep under the before-truncation plus its per-action values suffices.
    ForcedRegion fr_at =
        forced_region(tree, truncate(dev, state, TruncationMode::kAtOrBefore));
    Evaluation ev =
        evaluate_strategies(tree, forced_table(tree, pi, fr_before), sigma);
    auto it = fr_at.forced.find(state);
    if (it == fr_at.forced.end()) return 0.0;
    return ev.action_value[state][it->second] - ev.state_value[state];
  }
  std::vector<double> at = deviated_state_values(
      tree, pi, sigma, truncate(dev, state, TruncationMode::kAtOrBefore));
  std::vector<double> bef = deviated_state_values(tree, pi, sigma, before);
  return at[state] - bef[state];
}

double full_regret(const TreeIndex& tree, const StrategyTable& pi,
                   const DaimonTable& sigma, const Deviation& dev, int state) {
  std::vector<double> dsv = deviated_state_values(tree, pi, sigma, dev);
  std::vector<double> before = deviated_state_values(
      tree, pi, sigma, truncate(dev, state, TruncationMode::kBefore));
  return dsv[state] - before[state];
}

DecompositionCheck check_value_decomposition(const TreeIndex& tree,
                                             const StrategyTable& pi,
                                             const DaimonTable& sigma) {
  Evaluation ev = evaluate_strategies(tree, pi, sigma);
  DecompositionCheck check;
  for (std::size_t s = 0; s < tree.states().size(); ++s) {
    const StateEntry& e = tree.state(static_cast<int>(s));
    if (e.terminal) continue;
    double rhs = ev.state_local_reward[s];
    for (int child : e.child_states) rhs += ev.state_value[child];
    double err = std::abs(ev.state_value[s] - rhs);
    if (err > check.max_abs_error) {
      check.max_abs_error = err;
      check.argmax_state = static_cast<int>(s);
    }
  }
  return check;
}

DecompositionCheck check_regret_decomposition(const TreeIndex& tree,
                                              const StrategyTable& pi,
                                              const DaimonTable& sigma,
                                              const Deviation& dev) {
  std::vector<double> dsv = deviated_state_values(tree, pi, sigma, dev);
  // Full regret at each decision state is baselined against that state's own
  // before-truncation, so each needs its own deviated sweep.
  std::vector<double> before(tree.states().size(), 0.0);
  for (int s : tree.decision_states())
    before[s] = deviated_state_values(
        tree, pi, sigma, truncate(dev, s, TruncationMode::kBefore))[s];
  DecompositionCheck check;
  for (int s : tree.decision_states()) {
    double full_here = dsv[s] - before[s];
    double rhs = immediate_regret(tree, pi, sigma, dev, s);
    for (int child : successor_decision_states(tree, s))
      rhs += dsv[child] - before[child];
    double err = std::abs(full_here - rhs);
    if (err > check.max_abs_error) {
      check.max_abs_error = err;
      check.argmax_state = s;
    }
  }
  return check;
}

}  // namespace pohp
