#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "pohp/adapters.h"
#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/learner.h"
#include "pohp/strategy.h"

namespace {

using namespace pohp;

TEST_CASE("ledger construction and its contracts") {
  PohpFormGame kuhn = make_game("kuhn");
  const TreeIndex& ktree = kuhn.tree(0);
  RegretLedger cf = make_ledger(ktree, DeviationKind::kCounterfactual);
  CHECK(cf.regret.size() == ktree.states().size());
  for (int s : ktree.decision_states())
    CHECK(cf.regret[s].size() == ktree.state(s).actions.size());
  CHECK(cf.rounds == 0);

  // Swap ledgers need a single decision state.
  CHECK_THROWS_AS(make_ledger(ktree, DeviationKind::kSwap), ContractError);
  PohpFormGame mp = make_game("matching_pennies");
  RegretLedger swap = make_ledger(mp.tree(1), DeviationKind::kSwap);
  CHECK(swap.swap_state == mp.tree(1).decision_states()[0]);
  CHECK(swap.swap_regret.size() == 2);
}

TEST_CASE("regret matching normalizes the positive part") {
  PohpFormGame mp = make_game("matching_pennies");
  const TreeIndex& tree = mp.tree(0);
  RegretLedger ledger = make_ledger(tree, DeviationKind::kCounterfactual);
  int s = tree.decision_states()[0];

  ledger.regret[s] = {2.0, -1.0};
  StrategyTable greedy = current_strategy(tree, ledger);
  CHECK(greedy.rows[s][0] == doctest::Approx(1.0));
  CHECK(greedy.rows[s][1] == doctest::Approx(0.0));

  ledger.regret[s] = {-1.0, -2.0};
  StrategyTable fallback = current_strategy(tree, ledger);
  CHECK(fallback.rows[s][0] == doctest::Approx(0.5));
  CHECK(fallback.rows[s][1] == doctest::Approx(0.5));

  ledger.regret[s] = {3.0, 1.0};
  StrategyTable mixed = current_strategy(tree, ledger);
  CHECK(mixed.rows[s][0] == doctest::Approx(0.75));
  CHECK(mixed.rows[s][1] == doctest::Approx(0.25));
}

TEST_CASE("zero rounds yields the uniform average") {
  PohpFormGame form = make_game("kuhn");
  LearnerConfig config;
  config.rounds = 0;
  SelfPlayResult result = run_self_play(form, config);
  CHECK(result.curve.empty());
  for (int p = 0; p < form.num_players(); ++p) {
    StrategyTable uniform = StrategyTable::uniform(form.tree(p));
    CHECK(result.average[p].rows == uniform.rows);
    CHECK(max_cumulative_immediate(result.ledgers[p]) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("uniform matching pennies is a fixed point of swap learning") {
  PohpFormGame form = make_game("matching_pennies");
  LearnerConfig config;
  config.kind = DeviationKind::kSwap;
  config.rounds = 40;
  config.stride = 10;
  SelfPlayResult result = run_self_play(form, config);
  REQUIRE(!result.curve.empty());
  for (const CurveRow& row : result.curve) {
    CHECK(std::abs(row.max_cum_immediate) <= 1e-12);
    CHECK(std::abs(row.max_cum_full_oracle) <= 1e-12);
    CHECK(std::abs(row.exploitability) <= 1e-12);
  }
  for (int p = 0; p < 2; ++p) {
    StrategyTable uniform = StrategyTable::uniform(form.tree(p));
    for (int s : form.tree(p).decision_states())
      for (std::size_t a = 0; a < uniform.rows[s].size(); ++a)
        CHECK(result.final_strategy[p].rows[s][a] ==
              doctest::Approx(uniform.rows[s][a]));
  }
}

TEST_CASE("self play is deterministic") {
  PohpFormGame form = make_game("kuhn");
  LearnerConfig config;
  config.rounds = 60;
  config.stride = 20;
  SelfPlayResult a = run_self_play(form, config);
  SelfPlayResult b = run_self_play(form, config);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    CHECK(a.curve[i].round == b.curve[i].round);
    CHECK(a.curve[i].max_cum_immediate == b.curve[i].max_cum_immediate);
    CHECK(a.curve[i].max_cum_full_oracle == b.curve[i].max_cum_full_oracle);
    CHECK(a.curve[i].exploitability == b.curve[i].exploitability);
  }
  for (int p = 0; p < 2; ++p) CHECK(a.average[p].rows == b.average[p].rows);
}

TEST_CASE("regret matching drives kuhn toward equilibrium") {
  PohpFormGame form = make_game("kuhn");
  LearnerConfig config;
  config.rounds = 400;
  config.stride = 400;  // log only the last round
  SelfPlayResult result = run_self_play(form, config);
  REQUIRE(result.curve.size() == 2);  // one row per player

  for (const CurveRow& row : result.curve) {
    CHECK(row.round == 400);
    CHECK(row.exploitability <= 0.1);
    // Regret matching keeps per-state regret within the classic bound.
    CHECK(row.max_cum_immediate <=
          2.0 * 2.0 * std::sqrt(2.0 * 400.0) + 1e-6);
  }

  // The telescoped bound: cumulative full regret of a tracked deviation stays
  // within (states weakly after the trigger) x (max per-state immediate); on
  // kuhn every trigger chain has at most two decision states.
  REQUIRE(!result.tracked_log.empty());
  const TrackedLog& log = result.tracked_log.back();
  for (int p = 0; p < 2; ++p) {
    double max_imm = 0.0;
    for (double imm : log.state_cum_imm[p]) max_imm = std::max(max_imm, imm);
    for (double full : log.cum_full[p])
      CHECK(full <= 2.0 * max_imm + 1e-6);
  }
}

TEST_CASE("the uniform gadget experiment grows linearly") {
  Theorem1Result result = theorem1_experiment(5);
  REQUIRE(result.rows.size() == 5);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const Theorem1Row& row = result.rows[i];
    CHECK(row.round == static_cast<long>(i) + 1);
    CHECK(row.max_immediate == doctest::Approx(1.0));
    CHECK(row.cum_immediate == doctest::Approx(static_cast<double>(i + 1)));
    CHECK(row.cum_full == doctest::Approx(static_cast<double>(i + 1)));
  }
  CHECK(result.cumulative == doctest::Approx(5.0));
}

TEST_CASE("every pure gadget policy suffers two per round") {
  std::vector<double> regrets = gadget_pure_policy_max_regret();
  REQUIRE(regrets.size() == 4);
  for (double r : regrets) CHECK(r == doctest::Approx(2.0));
}

TEST_CASE("the learner refuses forgetful agents") {
  PohpFormGame gadget = make_game("theorem1_gadget");
  const TreeIndex& tree = gadget.tree(0);
  StrategyTable pi = StrategyTable::uniform(tree);
  RegretLedger ledger = make_ledger(tree, DeviationKind::kCounterfactual);
  CHECK_THROWS_AS(
      observe_round(tree, ledger, pi, gadget.daimon_for(0, {pi})),
      ContractError);
}

}  // namespace
