#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "pohp/adapters.h"
#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/reach.h"
#include "pohp/strategy.h"

namespace {

using namespace pohp;

int find_state(const TreeIndex& tree, const InfoState& value) {
  for (std::size_t s = 0; s < tree.states().size(); ++s)
    if (tree.state(static_cast<int>(s)).value == value)
      return static_cast<int>(s);
  return -1;
}

StrategyTable forced(const TreeIndex& tree, const Action& action) {
  StrategyTable pi = StrategyTable::uniform(tree);
  for (int s : tree.decision_states()) {
    const std::vector<Action>& acts = tree.state(s).actions;
    for (std::size_t a = 0; a < acts.size(); ++a)
      pi.rows[s][a] = acts[a] == action ? 1.0 : 0.0;
  }
  return pi;
}

TEST_CASE("uniform matching pennies reaches") {
  PohpFormGame form = make_game("matching_pennies");
  std::vector<StrategyTable> profile = form.uniform_profile();

  const TreeIndex& t0 = form.tree(0);
  ReachTable r = compute_reaches(t0, profile[0], form.daimon_for(0, profile));
  CHECK(r.total[t0.roots()[0]] == doctest::Approx(1.0));
  for (int s : t0.terminal_states())
    for (int h : t0.state(s).histories)
      CHECK(r.total[h] == doctest::Approx(0.25));
  for (std::size_t n = 0; n < r.total.size(); ++n)
    CHECK(std::abs(r.total[n] - r.agent[n] * r.daimon[n]) <= 1e-15);

  const TreeIndex& t1 = form.tree(1);
  ReachTable r1 = compute_reaches(t1, profile[1], form.daimon_for(1, profile));
  int d1 = t1.decision_states()[0];
  for (int h : t1.state(d1).histories) {
    CHECK(r1.total[h] == doctest::Approx(0.5));
    CHECK(r1.agent[h] == doctest::Approx(1.0));
  }
}

TEST_CASE("state realization factors into agent and environment parts") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& t0 = form.tree(0);
  std::vector<StrategyTable> profile = form.uniform_profile();
  DaimonTable sigma = form.daimon_for(0, profile);

  int j = find_state(t0, "J");
  REQUIRE(j >= 0);
  StateReach deal = state_realization_prob(t0, profile[0], sigma, j);
  CHECK(deal.agent == doctest::Approx(1.0));
  CHECK(deal.environment == doctest::Approx(1.0 / 3.0));
  CHECK(deal.total == doctest::Approx(1.0 / 3.0));

  // Reaching Jcb takes the agent's own check (1/2) and, per deal, the other
  // player's bet (1/2) on top of the 1/6 deal.
  int jcb = find_state(t0, "Jcb");
  REQUIRE(jcb >= 0);
  StateReach raise = state_realization_prob(t0, profile[0], sigma, jcb);
  CHECK(raise.agent == doctest::Approx(0.5));
  CHECK(raise.environment == doctest::Approx(1.0 / 6.0));
  CHECK(raise.total == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("beliefs condition on arrival") {
  PohpFormGame mp = make_game("matching_pennies");
  const TreeIndex& t1 = mp.tree(1);
  std::vector<StrategyTable> profile = mp.uniform_profile();
  // Skew the first player toward H and look at the second player's belief.
  profile[0].rows[mp.tree(0).decision_states()[0]] = {0.7, 0.3};
  DaimonTable sigma = mp.daimon_for(1, profile);
  int d1 = t1.decision_states()[0];
  std::vector<std::pair<int, double>> belief =
      belief_at(t1, profile[1], sigma, d1);
  REQUIRE(belief.size() == 2);
  CHECK(belief[0].second == doctest::Approx(0.7));
  CHECK(belief[1].second == doctest::Approx(0.3));

  PohpFormGame kuhn = make_game("kuhn");
  const TreeIndex& t0 = kuhn.tree(0);
  std::vector<StrategyTable> uprof = kuhn.uniform_profile();
  std::vector<std::pair<int, double>> card = belief_at(
      t0, uprof[0], kuhn.daimon_for(0, uprof), find_state(t0, "Q"));
  REQUIRE(card.size() == 2);
  CHECK(card[0].second == doctest::Approx(0.5));
  CHECK(card[1].second == doctest::Approx(0.5));
}

TEST_CASE("zero probability events are domain errors") {
  PohpFormGame chain = make_game("chain_mdp3");
  const TreeIndex& tree = chain.tree(0);
  StrategyTable jump = forced(tree, "jump");
  DaimonTable sigma = chain.daimon_for(0, {jump});

  int bypassed = find_state(tree, "t1|s1");
  REQUIRE(bypassed >= 0);
  StateReach r = state_realization_prob(tree, jump, sigma, bypassed);
  CHECK(r.total == doctest::Approx(0.0));
  CHECK_THROWS_AS(belief_at(tree, jump, sigma, bypassed), DomainError);

  History dead;
  dead.actions = {"step"};
  CHECK_THROWS_AS(
      conditional_reach(tree, jump, sigma, dead, dead.child("s1")),
      DomainError);
}

TEST_CASE("conditional reach multiplies along the path") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& t0 = form.tree(0);
  std::vector<StrategyTable> profile = form.uniform_profile();
  DaimonTable sigma = form.daimon_for(0, profile);
  ReachTable r = compute_reaches(t0, profile[0], sigma);

  History root;
  int leaf_state = t0.terminal_states()[0];
  int leaf = t0.state(leaf_state).histories[0];
  History to = t0.history_of(leaf);
  CHECK(conditional_reach(t0, profile[0], sigma, root, to) ==
        doctest::Approx(r.total[leaf]));

  History mid = to.prefix(1);
  int mid_id = t0.node_id(mid);
  REQUIRE(mid_id >= 0);
  CHECK(conditional_reach(t0, profile[0], sigma, mid, to) ==
        doctest::Approx(r.total[leaf] / r.total[mid_id]));
  CHECK(conditional_reach(t0, profile[0], sigma, to, mid) == 0.0);
}

TEST_CASE("survival checks land in the environment factor") {
  PohpFormGame chain = make_game("chain_mdp3");
  const TreeIndex& tree = chain.tree(0);
  StrategyTable pi = StrategyTable::uniform(tree);
  DaimonTable sigma = chain.daimon_for(0, {pi});

  History h;
  h.actions = {"step"};
  int after_step = tree.node_id(h);
  REQUIRE(after_step >= 0);
  ReachDecomposition d = reach_probability(tree, pi, sigma, h);
  CHECK(d.agent == doctest::Approx(0.5));    // the agent's own step
  CHECK(d.daimon == doctest::Approx(0.9));   // the round-start survival
  CHECK(d.total == doctest::Approx(0.45));

  ReachTable r = compute_reaches(tree, pi, sigma);
  CHECK(r.agent[after_step] == doctest::Approx(0.5));
  CHECK(r.daimon[after_step] == doctest::Approx(0.9));
}

}  // namespace
