#include "pohp/deviations.h"

#include <algorithm>
#include <string>

#include "pohp/errors.h"

namespace pohp {
namespace {

bool in_truncation_region(const TreeIndex& tree, const Deviation& dev, int s) {
  for (const auto& [anchor, mode] : dev.truncations) {
    bool inside = mode == TruncationMode::kBefore
                      ? tree.strictly_precedes(s, anchor)
                      : tree.weakly_precedes(s, anchor);
    if (!inside) return false;
  }
  return true;
}

// Pointwise forced actions of the deviation before truncation; only valid for
// non-table kinds.
std::map<int, int> base_forced(const TreeIndex& tree, const Deviation& dev) {
  std::map<int, int> forced;
  switch (dev.kind) {
    case DeviationKind::kIdentity:
      break;
    case DeviationKind::kExternal:
      for (int s : tree.decision_states()) forced[s] = dev.target[s];
      break;
    case DeviationKind::kCounterfactual: {
      // Steer along the unique chain into the trigger, then follow the
      // continuation at and below it.
      int cur = dev.trigger;
      while (tree.state(cur).parent_state >= 0) {
        const StateEntry& entry = tree.state(cur);
        const StateEntry& parent = tree.state(entry.parent_state);
        auto it = std::find(parent.actions.begin(), parent.actions.end(),
                            entry.parent_action);
        if (it == parent.actions.end())
          throw ContractError("steering action missing from the parent state");
        forced[entry.parent_state] =
            static_cast<int>(it - parent.actions.begin());
        cur = entry.parent_state;
      }
      for (const auto& [s, a] : dev.continuation) forced[s] = a;
      break;
    }
    default:
      throw ContractError("table-backed deviation has no pointwise form");
  }
  return forced;
}

void validate_universe(const PureStrategySet& universe, const Deviation& dev) {
  if (static_cast<long>(dev.table.size()) != universe.size)
    throw ContractError("deviation table does not match the enumeration size");
}

}  // namespace

Deviation identity_deviation() { return Deviation{}; }

Deviation external_deviation(PureStrategy target) {
  Deviation dev;
  dev.kind = DeviationKind::kExternal;
  dev.target = std::move(target);
  return dev;
}

Deviation counterfactual_deviation(const TreeIndex& tree, int trigger,
                                   std::map<int, int> continuation) {
  if (!tree.agent().perfect_recall)
    throw ContractError(
        "counterfactual deviations need a perfect-recall agent");
  const auto& decisions = tree.decision_states();
  if (std::find(decisions.begin(), decisions.end(), trigger) == decisions.end())
    throw DomainError("counterfactual trigger is not a decision state");
  for (int s : decisions) {
    if (!tree.weakly_precedes(trigger, s)) continue;
    auto it = continuation.find(s);
    if (it == continuation.end())
      throw ValidationError("continuation misses decision state " +
                            tree.state(s).value);
    int arity = static_cast<int>(tree.state(s).actions.size());
    if (it->second < 0 || it->second >= arity)
      throw ValidationError("continuation action out of range at " +
                            tree.state(s).value);
  }
  Deviation dev;
  dev.kind = DeviationKind::kCounterfactual;
  dev.trigger = trigger;
  dev.continuation = std::move(continuation);
  return dev;
}

Deviation truncate(Deviation dev, int state, TruncationMode mode) {
  dev.truncations.emplace_back(state, mode);
  return dev;
}

PureStrategy apply_deviation(const TreeIndex& tree,
                             const PureStrategySet& universe,
                             const Deviation& dev, const PureStrategy& x) {
  PureStrategy image;
  if (dev.kind == DeviationKind::kInternal || dev.kind == DeviationKind::kSwap) {
    validate_universe(universe, dev);
    image = universe.at(dev.table[universe.index_of(x)], tree);
  } else {
    image = x;
    for (const auto& [s, a] : base_forced(tree, dev)) image[s] = a;
  }
  PureStrategy y = x;
  for (int s : tree.decision_states())
    if (in_truncation_region(tree, dev, s)) y[s] = image[s];
  return y;
}

ForcedRegion forced_region(const TreeIndex& tree, const Deviation& dev) {
  ForcedRegion out;
  if (dev.kind == DeviationKind::kInternal || dev.kind == DeviationKind::kSwap)
    return out;
  out.representable = true;
  for (const auto& [s, a] : base_forced(tree, dev))
    if (in_truncation_region(tree, dev, s)) out.forced[s] = a;
  return out;
}

MixedStrategy pushforward(const TreeIndex& tree, const PureStrategySet& universe,
                          const StrategyTable& pi, const Deviation& dev) {
  MixedStrategy mu;
  mu.weights.assign(universe.size, 0.0);
  for (long i = 0; i < universe.size; ++i) {
    PureStrategy x = universe.at(i, tree);
    double w = pure_weight(tree, pi, x);
    if (w <= 0.0) continue;
    PureStrategy y = apply_deviation(tree, universe, dev, x);
    mu.weights[universe.index_of(y)] += w;
  }
  return mu;
}

namespace {

DeviationSet external_set(const TreeIndex& tree, const PureStrategySet& universe,
                          long budget) {
  if (universe.size > budget)
    throw ResourceError("external deviation set exceeds budget");
  DeviationSet set{DeviationKind::kExternal, universe, {}};
  set.members.reserve(universe.size);
  for (long i = 0; i < universe.size; ++i)
    set.members.push_back(external_deviation(universe.at(i, tree)));
  return set;
}

DeviationSet counterfactual_set(const TreeIndex& tree,
                                const PureStrategySet& universe, long budget) {
  DeviationSet set{DeviationKind::kCounterfactual, universe, {}};
  long count = 0;
  for (int trigger : tree.decision_states()) {
    std::vector<int> region;  // decision states weakly after the trigger
    for (int s : tree.decision_states())
      if (tree.weakly_precedes(trigger, s)) region.push_back(s);
    long combos = 1;
    for (int s : region) {
      combos *= static_cast<long>(tree.state(s).actions.size());
      if (combos > budget)
        throw ResourceError("counterfactual deviation set exceeds budget");
    }
    if ((count += combos) > budget)
      throw ResourceError("counterfactual deviation set exceeds budget");
    for (long idx = 0; idx < combos; ++idx) {
      std::map<int, int> continuation;
      long rest = idx;
      for (int i = static_cast<int>(region.size()) - 1; i >= 0; --i) {
        int arity = static_cast<int>(tree.state(region[i]).actions.size());
        continuation[region[i]] = static_cast<int>(rest % arity);
        rest /= arity;
      }
      set.members.push_back(
          counterfactual_deviation(tree, trigger, std::move(continuation)));
    }
  }
  return set;
}

DeviationSet internal_set(const TreeIndex& tree, const PureStrategySet& universe,
                          long budget) {
  DeviationSet set{DeviationKind::kInternal, universe, {}};
  for (int s : tree.decision_states()) {
    int arity = static_cast<int>(tree.state(s).actions.size());
    for (int from = 0; from < arity; ++from) {
      for (int to = 0; to < arity; ++to) {
        if (from == to) continue;
        if (static_cast<long>(set.members.size()) >= budget)
          throw ResourceError("internal deviation set exceeds budget");
        Deviation dev;
        dev.kind = DeviationKind::kInternal;
        dev.table.resize(universe.size);
        for (long i = 0; i < universe.size; ++i) {
          PureStrategy x = universe.at(i, tree);
          if (x[s] == from) {
            x[s] = to;
            dev.table[i] = universe.index_of(x);
          } else {
            dev.table[i] = i;
          }
        }
        set.members.push_back(std::move(dev));
      }
    }
  }
  return set;
}

DeviationSet swap_set(const TreeIndex&, const PureStrategySet& universe,
                      long budget) {
  const long n = universe.size;
  long count = 1;
  for (long i = 0; i < n; ++i) {
    if (count > budget / n)
      throw ResourceError("swap deviation set of size " + std::to_string(n) +
                          "^" + std::to_string(n) + " exceeds budget");
    count *= n;
  }
  DeviationSet set{DeviationKind::kSwap, universe, {}};
  set.members.reserve(count);
  std::vector<long> table(n, 0);
  for (long k = 0; k < count; ++k) {
    Deviation dev;
    dev.kind = DeviationKind::kSwap;
    dev.table = table;
    set.members.push_back(std::move(dev));
    for (long pos = n - 1; pos >= 0; --pos) {  // odometer step
      if (++table[pos] < n) break;
      table[pos] = 0;
    }
  }
  return set;
}

}  // namespace

DeviationSet deviation_set(const TreeIndex& tree, DeviationKind kind,
                           long budget) {
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  switch (kind) {
    case DeviationKind::kExternal:
      return external_set(tree, universe, budget);
    case DeviationKind::kCounterfactual:
      return counterfactual_set(tree, universe, budget);
    case DeviationKind::kInternal:
      return internal_set(tree, universe, budget);
    case DeviationKind::kSwap:
      return swap_set(tree, universe, budget);
    case DeviationKind::kIdentity: {
      DeviationSet set{DeviationKind::kIdentity, universe, {}};
      set.members.push_back(identity_deviation());
      return set;
    }
  }
  throw ContractError("unknown deviation kind");
}

}  // namespace pohp
