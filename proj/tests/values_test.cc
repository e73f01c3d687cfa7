#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "pohp/adapters.h"
#include "pohp/deviations.h"
#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/oracle.h"
#include "pohp/strategy.h"
#include "pohp/values.h"

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

// Constant deviation onto the gadget's pure strategy (a1 at s1, a2 at s2).
Deviation gadget_external(const TreeIndex& tree, int a1, int a2) {
  PureStrategy target(tree.states().size(), -1);
  for (int s : tree.decision_states())
    target[s] = tree.state(s).value == "s1" ? a1 : a2;
  return external_deviation(target);
}

TEST_CASE("chain policy values match the closed forms") {
  PohpFormGame form = make_game("chain_mdp3");
  const TreeIndex& tree = form.tree(0);

  StrategyTable jump = forced(tree, "jump");
  StrategyTable step = forced(tree, "step");
  CHECK(evaluate_strategies(tree, jump, form.daimon_for(0, {jump})).total ==
        doctest::Approx(0.9));
  CHECK(evaluate_strategies(tree, step, form.daimon_for(0, {step})).total ==
        doctest::Approx(0.81));

  PohpFormGame half = markov_form(chain_mdp3_spec(0.5));
  const TreeIndex& htree = half.tree(0);
  StrategyTable hjump = forced(htree, "jump");
  StrategyTable hstep = forced(htree, "step");
  CHECK(evaluate_strategies(htree, hjump, half.daimon_for(0, {hjump})).total ==
        doctest::Approx(0.5));
  CHECK(evaluate_strategies(htree, hstep, half.daimon_for(0, {hstep})).total ==
        doctest::Approx(0.25));
}

TEST_CASE("gadget values and regrets are the known constants") {
  PohpFormGame form = make_game("theorem1_gadget");
  const TreeIndex& tree = form.tree(0);
  StrategyTable pi = StrategyTable::uniform(tree);
  DaimonTable sigma = form.daimon_for(0, {pi});
  int s1 = find_state(tree, "s1");
  int s2 = find_state(tree, "s2");
  REQUIRE(s1 >= 0);
  REQUIRE(s2 >= 0);

  Evaluation ev = evaluate_strategies(tree, pi, sigma);
  CHECK(std::abs(ev.state_value[s1]) <= 1e-12);
  CHECK(std::abs(ev.state_value[s2]) <= 1e-12);
  CHECK(std::abs(ev.total) <= 1e-12);

  // The four constant deviations evaluated at the merged second state: the
  // matching choices pay +1, the mismatched ones -1.
  std::map<std::pair<int, int>, double> expect = {
      {{0, 0}, 1.0}, {{0, 1}, -1.0}, {{1, 0}, -1.0}, {{1, 1}, 1.0}};
  for (const auto& [pure, value] : expect) {
    Deviation dev = gadget_external(tree, pure.first, pure.second);
    std::vector<double> dsv = deviated_state_values(tree, pi, sigma, dev);
    CHECK(dsv[s2] == doctest::Approx(value));
  }

  Deviation dev = gadget_external(tree, 0, 0);
  CHECK(std::abs(immediate_regret(tree, pi, sigma, dev, s1)) <= 1e-12);
  CHECK(immediate_regret(tree, pi, sigma, dev, s2) == doctest::Approx(1.0));
  CHECK(full_regret(tree, pi, sigma, dev, s1) == doctest::Approx(1.0));
  CHECK(full_regret(tree, pi, sigma, dev, s2) == doctest::Approx(1.0));
}

TEST_CASE("decompositions hold on the perfect recall games") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& tree = form.tree(0);
  std::vector<StrategyTable> profile = random_profile(form, 11);
  DaimonTable sigma = form.daimon_for(0, profile);

  CHECK(check_value_decomposition(tree, profile[0], sigma).max_abs_error <=
        1e-12);

  PureStrategySet universe = PureStrategySet::enumerate(tree);
  Deviation external = external_deviation(universe.at(17, tree));
  CHECK(check_regret_decomposition(tree, profile[0], sigma, external)
            .max_abs_error <= 1e-12);

  int jcb = find_state(tree, "Jcb");
  Deviation cf = counterfactual_deviation(tree, jcb, {{jcb, 0}});
  CHECK(check_regret_decomposition(tree, profile[0], sigma, cf)
            .max_abs_error <= 1e-12);
}

TEST_CASE("regret decomposition handles merged successors") {
  // The forgetful gadget funnels both branches into one decision state; the
  // telescoping identity must count that state's full regret exactly once.
  PohpFormGame form = make_game("theorem1_gadget");
  const TreeIndex& tree = form.tree(0);
  StrategyTable pi = random_strategy(tree, 3);
  DaimonTable sigma = form.daimon_for(0, {pi});
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  REQUIRE(universe.size == 4);

  Deviation swap;
  swap.kind = DeviationKind::kSwap;
  swap.table = {3, 2, 1, 0};  // reverse every pure strategy
  CHECK(check_regret_decomposition(tree, pi, sigma, swap).max_abs_error <=
        1e-12);

  Deviation collapse;
  collapse.kind = DeviationKind::kSwap;
  collapse.table = {0, 0, 0, 3};
  CHECK(check_regret_decomposition(tree, pi, sigma, collapse).max_abs_error <=
        1e-12);
}

TEST_CASE("immediate regret agrees with the oracle difference") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& tree = form.tree(0);
  std::vector<StrategyTable> profile = random_profile(form, 23);
  DaimonTable sigma = form.daimon_for(0, profile);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  Deviation dev = external_deviation(universe.at(42, tree));

  for (int s : tree.decision_states()) {
    std::vector<double> at = oracle_deviation_value(
        tree, profile[0], sigma, truncate(dev, s, TruncationMode::kAtOrBefore));
    std::vector<double> before = oracle_deviation_value(
        tree, profile[0], sigma, truncate(dev, s, TruncationMode::kBefore));
    CHECK(std::abs(immediate_regret(tree, profile[0], sigma, dev, s) -
                   (at[s] - before[s])) <= 1e-9);
  }
}

TEST_CASE("counterfactual values require perfect recall") {
  PohpFormGame gadget = make_game("theorem1_gadget");
  const TreeIndex& gtree = gadget.tree(0);
  StrategyTable gpi = StrategyTable::uniform(gtree);
  CHECK_THROWS_AS(
      counterfactual_value(gtree, gpi, gadget.daimon_for(0, {gpi}),
                           gtree.decision_states()[0]),
      ContractError);

  PohpFormGame kuhn = make_game("kuhn");
  const TreeIndex& tree = kuhn.tree(0);
  std::vector<StrategyTable> profile = random_profile(kuhn, 5);
  DaimonTable sigma = kuhn.daimon_for(0, profile);
  Evaluation ev = evaluate_strategies(tree, profile[0], sigma);
  for (int s : tree.decision_states())
    CHECK(std::abs(counterfactual_value(tree, profile[0], sigma, s) -
                   ev.state_cf[s]) <= 1e-12);
}

TEST_CASE("counterfactual values survive zero agent reach") {
  PohpFormGame chain = make_game("chain_mdp3");
  const TreeIndex& tree = chain.tree(0);
  StrategyTable jump = forced(tree, "jump");
  DaimonTable sigma = chain.daimon_for(0, {jump});
  int bypassed = find_state(tree, "t1|s1");
  REQUIRE(bypassed >= 0);

  Evaluation ev = evaluate_strategies(tree, jump, sigma);
  CHECK(ev.state_value[bypassed] == doctest::Approx(0.0));
  // Environment reach 0.9 times the discounted terminal reward 0.9.
  CHECK(ev.state_cf[bypassed] == doctest::Approx(0.81));
  CHECK(counterfactual_value(tree, jump, sigma, bypassed) ==
        doctest::Approx(0.81));

  StateValueReport report = rw_expected_return(tree, jump, sigma, bypassed);
  CHECK_FALSE(report.realizable);
  CHECK(report.value == doctest::Approx(0.0));
}

TEST_CASE("full regret at fresh states is the plain advantage") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& tree = form.tree(0);
  std::vector<StrategyTable> profile = random_profile(form, 31);
  DaimonTable sigma = form.daimon_for(0, profile);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  Deviation dev = external_deviation(universe.at(9, tree));

  Evaluation ev = evaluate_strategies(tree, profile[0], sigma);
  std::vector<double> dsv = deviated_state_values(tree, profile[0], sigma, dev);
  for (const char* card : {"J", "Q", "K"}) {
    int s = find_state(tree, card);  // no deviating predecessors
    CHECK(std::abs(full_regret(tree, profile[0], sigma, dev, s) -
                   (dsv[s] - ev.state_value[s])) <= 1e-12);
  }
}

}  // namespace
