#ifndef POHP_LEARNER_H_
#define POHP_LEARNER_H_

#include <cstdint>
#include <vector>

#include "pohp/adapters.h"
#include "pohp/deviations.h"
#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace pohp {

// Cumulative weighted immediate-regret bookkeeping for one agent. `regret`
// holds, per decision state and action, the cumulative weighted regret of the
// switch-to-that-action-then-continue deviation — the quantity regret
// matching normalizes. `strategy_mass` holds the reach-weighted strategy
// accumulator behind the uniform round average. Swap mode adds a per-action-
// pair matrix at the agent's single decision state.
struct RegretLedger {
  DeviationKind kind = DeviationKind::kCounterfactual;
  std::vector<std::vector<double>> regret;         // [state][action]
  std::vector<std::vector<double>> strategy_mass;  // [state][action]
  std::vector<std::vector<double>> swap_regret;    // [action][action]
  int swap_state = -1;
  long rounds = 0;
};

// Initializes zeroed tables. Swap mode requires exactly one decision state
// (fixed-point strategies across several states are not computable here);
// anything else throws ContractError.
RegretLedger make_ledger(const TreeIndex& tree, DeviationKind kind);

// Regret matching: per state, positive cumulative regrets normalized, uniform
// when none are positive. Swap mode instead returns the stationary strategy
// of the row-wise regret-matching transition matrix.
StrategyTable current_strategy(const TreeIndex& tree,
                               const RegretLedger& ledger);

// One full-feedback round: adds the per-action counterfactual advantage
// q^cf(s,a) - v^cf(s) to every decision state's row (the weighted immediate
// regret of the tracked deviations; the steering weight is 1 at triggered
// states), accumulates the reach-weighted strategy average, and in swap mode
// updates the action-pair matrix. Requires perfect recall.
void observe_round(const TreeIndex& tree, RegretLedger& ledger,
                   const StrategyTable& pi, const DaimonTable& sigma);

// Reach-weighted uniform round average; uniform rows where no mass arrived.
StrategyTable average_strategy(const TreeIndex& tree,
                               const RegretLedger& ledger);

// Largest cumulative immediate-regret entry (clamped at zero), optionally
// reporting the state attaining it.
double max_cumulative_immediate(const RegretLedger& ledger,
                                int* argmax_state = nullptr);

struct LearnerConfig {
  DeviationKind kind = DeviationKind::kCounterfactual;
  long rounds = 0;
  long stride = 1;
  std::uint64_t seed = 0;  // recorded in outputs; play itself is exact
  bool oracle_curves = true;
  long budget = 1000000;  // deviation enumeration budget
};

// A deviation together with the state its full regret is audited at.
struct TrackedDeviation {
  Deviation dev;
  int state = -1;
};

struct CurveRow {
  long round = 0;
  int player = 0;
  int state = -1;               // state attaining the immediate-regret max
  double max_cum_immediate = 0.0;
  double max_cum_full_oracle = 0.0;
  double exploitability = 0.0;  // of the running average profile
};

// Snapshot of the audited quantities at one logged round: cumulative full
// regret per tracked deviation (accumulated from independent oracle sweeps
// each round) and the per-state cumulative immediate regret from the ledger,
// clamped at zero.
struct TrackedLog {
  long round = 0;
  std::vector<std::vector<double>> cum_full;       // [player][tracked index]
  std::vector<std::vector<double>> state_cum_imm;  // [player][state]
};

struct SelfPlayResult {
  std::vector<StrategyTable> average;   // per player
  std::vector<StrategyTable> final_strategy;
  std::vector<RegretLedger> ledgers;
  std::vector<CurveRow> curve;          // per logged round x player
  std::vector<std::vector<TrackedDeviation>> tracked;  // per player
  std::vector<std::vector<double>> cum_full;  // aligned with `tracked`
  std::vector<TrackedLog> tracked_log;        // when oracle curves are on
};

// All players run the learner against each other; each player's daimon
// realizes the others' current strategies plus chance. Deterministic.
SelfPlayResult run_self_play(const PohpFormGame& form,
                             const LearnerConfig& config);

struct Theorem1Row {
  long round = 0;
  double max_immediate = 0.0;  // this round's max over constant deviations
  double cum_immediate = 0.0;
  double cum_full = 0.0;       // independently accumulated full regret
};

struct Theorem1Result {
  std::vector<Theorem1Row> rows;  // one per round
  double cumulative = 0.0;        // == rows.back().cum_immediate
};

// The forgetful two-decision game under the uniform agent: per-round and
// cumulative max immediate regret over the constant deviations, computed
// exactly (no sampling).
Theorem1Result theorem1_experiment(long rounds);

// Per-round max immediate regret over constant deviations for each of the
// four pure policies of the forgetful gadget, in enumeration order.
std::vector<double> gadget_pure_policy_max_regret();

}  // namespace pohp

#endif  // POHP_LEARNER_H_
