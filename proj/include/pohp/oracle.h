#ifndef POHP_ORACLE_H_
#define POHP_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pohp/adapters.h"
#include "pohp/deviations.h"
#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace pohp {

// Brute-force reference computations used to audit the analytic pipeline.
// Everything here recomputes quantities from first principles — joint
// enumeration of pure strategies on the underlying game tree, or independent
// recursive sweeps of a view tree — and never calls the analytic value and
// regret routines it exists to check.

// Expected return for `player` obtained by enumerating joint pure strategy
// assignments of every player over their decision labels, weighting each
// assignment by its product probability under the profile. An empty `state`
// yields the total from the root; otherwise the realization-weighted return
// collected strictly after the player's nodes labeled `state`. Requires that
// no player sees the same label twice on one path (ContractError otherwise).
double brute_force_value(const PohpFormGame& form, int player,
                         const std::vector<StrategyTable>& profile,
                         const InfoState& state = InfoState());

struct BestResponse {
  double value = 0.0;
  PureStrategy strategy;
};

// Exact best response of `player` against the rest of the profile: dynamic
// programming over the player's view tree, deepest decision states first,
// maximizing opponent-reach-weighted action values. Requires the player's
// view to have perfect recall.
BestResponse best_response(const PohpFormGame& form, int player,
                           const std::vector<StrategyTable>& profile);

// Sum over players of (best-response value minus current expected utility);
// zero exactly at equilibrium, positive otherwise.
double exploitability(const PohpFormGame& form,
                      const std::vector<StrategyTable>& profile);

// Realization-weighted value of every state (reach times expected return
// collected strictly below), by an independent recursive sweep of the tree.
std::vector<double> oracle_state_value(const TreeIndex& tree,
                                       const StrategyTable& pi,
                                       const DaimonTable& sigma);

// The same sweep under the transformed strategy dev(pi): pointwise deviations
// overwrite the forced rows; table-backed ones average sweeps over the pure
// pushforward (realization-weighted values are linear in the mixture).
std::vector<double> oracle_deviation_value(const TreeIndex& tree,
                                           const StrategyTable& pi,
                                           const DaimonTable& sigma,
                                           const Deviation& dev);

// Average benefit of one deviation at one state over a recorded sequence of
// strategy pairs; a hindsight-rational sequence drives every average to at
// most zero as the record grows.
struct HindsightRow {
  int deviation = -1;  // index into the audited set's members
  int state = -1;
  double avg_full_regret = 0.0;
  double avg_immediate_regret = 0.0;
};

// Audits a recorded sequence (pis[t], sigmas[t]) against every member of
// `devs` at every decision state, with all values from oracle sweeps.
std::vector<HindsightRow> audit_hindsight_rationality(
    const TreeIndex& tree, const std::vector<StrategyTable>& pis,
    const std::vector<DaimonTable>& sigmas, const DeviationSet& devs);

// Deterministic pseudo-random behavioral strategy with interior rows (every
// action probability at least a few percent), for audits that need positive
// reach everywhere. Same seed, same table, on every platform.
StrategyTable random_strategy(const TreeIndex& tree, std::uint64_t seed);

// One random strategy per player, seeded per player slot.
std::vector<StrategyTable> random_profile(const PohpFormGame& form,
                                          std::uint64_t seed);

struct OracleReport {
  std::string check;
  std::string game;
  long trials = 0;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// The numerical identity battery over the bundled games: value and regret
// decompositions, brute-force agreement, best-response dominance, frozen
// closed-form constants, dynamic-programming cross-checks, structural
// invariants, and Monte-Carlo consistency. `tolerance` applies to the exact
// comparisons; structural and statistical checks carry their own.
std::vector<OracleReport> run_verification_suite(double tolerance = 1e-9,
                                                 std::uint64_t seed = 7);

// One JSON object per line: check, game, trials, max_discrepancy, tolerance,
// pass.
void write_reports_jsonl(const std::vector<OracleReport>& reports,
                         const std::string& path);

}  // namespace pohp

#endif  // POHP_ORACLE_H_
