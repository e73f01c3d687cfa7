#ifndef POHP_DEVIATIONS_H_
#define POHP_DEVIATIONS_H_

#include <map>
#include <utility>
#include <vector>

#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace pohp {

enum class DeviationKind {
  kIdentity,
  kExternal,        // constant map onto one pure strategy
  kCounterfactual,  // steer to a trigger state, then follow a pure continuation
  kInternal,        // substitute one action at one state
  kSwap,            // arbitrary table over the pure strategy enumeration
};

enum class TruncationMode {
  kBefore,      // keep the deviation only at states strictly before s
  kAtOrBefore,  // keep it at states weakly before s
};

// A strategy transformation. Table-backed kinds (internal, swap) act through
// `table` over the canonical pure-strategy enumeration; the others act
// pointwise per state. Truncations restrict where the transformed behavior
// applies; outside the restriction the input strategy passes through.
struct Deviation {
  DeviationKind kind = DeviationKind::kIdentity;
  PureStrategy target;             // external: the image
  int trigger = -1;                // counterfactual: target state
  std::map<int, int> continuation; // counterfactual: action per state at/after trigger
  std::vector<long> table;         // internal/swap: image index per pure index
  std::vector<std::pair<int, TruncationMode>> truncations;
};

Deviation identity_deviation();
Deviation external_deviation(PureStrategy target);
// Throws ContractError unless the agent has perfect recall (the steering path
// to the trigger must be unique). `continuation` must cover every decision
// state weakly after the trigger.
Deviation counterfactual_deviation(const TreeIndex& tree, int trigger,
                                   std::map<int, int> continuation);
Deviation truncate(Deviation dev, int state, TruncationMode mode);

// Transformed pure strategy. Table-backed kinds resolve through `universe`,
// which must be the canonical enumeration for the same index.
PureStrategy apply_deviation(const TreeIndex& tree,
                             const PureStrategySet& universe,
                             const Deviation& dev, const PureStrategy& x);

// Pointwise characterization for kinds whose image is input-independent per
// state: the transformed strategy equals the input except at `forced` states.
// `representable` is false for table-backed kinds.
struct ForcedRegion {
  bool representable = false;
  std::map<int, int> forced;  // state -> action index
};
ForcedRegion forced_region(const TreeIndex& tree, const Deviation& dev);

// Distribution of the transformed strategy when the input is drawn from the
// behavioral table's product distribution over pure strategies.
MixedStrategy pushforward(const TreeIndex& tree, const PureStrategySet& universe,
                          const StrategyTable& pi, const Deviation& dev);

struct DeviationSet {
  DeviationKind kind = DeviationKind::kIdentity;
  PureStrategySet universe;
  std::vector<Deviation> members;
};

// Enumerates a full deviation class. Budgets bound the member count;
// exceeding one throws ResourceError.
DeviationSet deviation_set(const TreeIndex& tree, DeviationKind kind,
                           long budget = 1000000);

}  // namespace pohp

#endif  // POHP_DEVIATIONS_H_
