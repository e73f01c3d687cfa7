#ifndef POHP_VALUES_H_
#define POHP_VALUES_H_

#include <vector>

#include "pohp/deviations.h"
#include "pohp/reach.h"
#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace pohp {

// One joint sweep of reach probabilities and values under a strategy pair.
// Departure values count rewards collected strictly after leaving a history;
// arrival values add the history's own observation reward at agent turns.
struct Evaluation {
  ReachTable reach;
  std::vector<double> node_departure;  // per node
  std::vector<double> node_arrival;    // per node
  double total = 0.0;                  // expected return from the start

  std::vector<double> state_reach;         // realization probability per state
  std::vector<double> state_value;         // realization-weighted departure value
  std::vector<double> state_cf;            // environment-weighted (counterfactual)
  std::vector<double> state_local_reward;  // reward mass collected through s
  std::vector<std::vector<double>> action_value;  // per decision state/action
  std::vector<std::vector<double>> action_cf;     // per decision state/action
};

Evaluation evaluate_strategies(const TreeIndex& tree, const StrategyTable& pi,
                               const DaimonTable& sigma);

struct StateValueReport {
  double value = 0.0;
  bool realizable = false;
};

// Realization-weighted expected return collected below an information state.
StateValueReport rw_expected_return(const TreeIndex& tree,
                                    const StrategyTable& pi,
                                    const DaimonTable& sigma, int state);

// Counterfactual value: environment reach times continuation value aggregated
// over I(s). Throws ContractError without perfect recall.
double counterfactual_value(const TreeIndex& tree, const StrategyTable& pi,
                            const DaimonTable& sigma, int state);

// v_s(dev(pi)) for every state, as a vector indexed by state id. Pointwise
// deviations evaluate in one behavioral sweep; table-backed ones enumerate
// pure strategies with per-image memoization.
std::vector<double> deviated_state_values(const TreeIndex& tree,
                                          const StrategyTable& pi,
                                          const DaimonTable& sigma,
                                          const Deviation& dev);

// Benefit at s of switching to the deviation at s itself, given play follows
// it before s: v_s(dev truncated at-or-before s) - v_s(dev truncated before s).
double immediate_regret(const TreeIndex& tree, const StrategyTable& pi,
                        const DaimonTable& sigma, const Deviation& dev,
                        int state);

// Benefit at s of switching to the deviation from s onward, given play
// followed the deviation before s: v_s(dev) - v_s(dev truncated before s).
// At states with no deviating predecessors this is v_s(dev) - v_s(pi).
double full_regret(const TreeIndex& tree, const StrategyTable& pi,
                   const DaimonTable& sigma, const Deviation& dev, int state);

struct DecompositionCheck {
  double max_abs_error = 0.0;
  int argmax_state = -1;
};

// Residuals of the recursive value identity
//   v_s = local_reward(s) + sum of v over successor states
// across all states.
DecompositionCheck check_value_decomposition(const TreeIndex& tree,
                                             const StrategyTable& pi,
                                             const DaimonTable& sigma);

// Residuals of the regret telescoping identity
//   full(s) = immediate(s) + sum of full over successor decision states,
// where a successor decision state is reached by skipping through the
// between-action bookkeeping states and is counted once even when several
// action branches lead into it.  Exact because the at-or-before truncation
// at s coincides with the before truncation at each successor.
DecompositionCheck check_regret_decomposition(const TreeIndex& tree,
                                              const StrategyTable& pi,
                                              const DaimonTable& sigma,
                                              const Deviation& dev);

}  // namespace pohp

#endif  // POHP_VALUES_H_
