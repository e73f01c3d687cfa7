#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "pohp/adapters.h"
#include "pohp/deviations.h"
#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/strategy.h"

namespace {

using namespace pohp;

int find_state(const TreeIndex& tree, const InfoState& value) {
  for (std::size_t s = 0; s < tree.states().size(); ++s)
    if (tree.state(static_cast<int>(s)).value == value)
      return static_cast<int>(s);
  return -1;
}

TEST_CASE("deviation set sizes on the bundled games") {
  PohpFormGame gadget = make_game("theorem1_gadget");
  const TreeIndex& gtree = gadget.tree(0);
  CHECK(deviation_set(gtree, DeviationKind::kExternal).members.size() == 4);
  CHECK(deviation_set(gtree, DeviationKind::kInternal).members.size() == 4);
  CHECK(deviation_set(gtree, DeviationKind::kSwap).members.size() == 256);
  CHECK_THROWS_AS(deviation_set(gtree, DeviationKind::kCounterfactual),
                  ContractError);  // needs perfect recall
  CHECK(deviation_set(gtree, DeviationKind::kIdentity).members.size() == 1);

  PohpFormGame pr = make_game("theorem1_gadget_pr");
  const TreeIndex& ptree = pr.tree(0);
  CHECK(deviation_set(ptree, DeviationKind::kExternal).members.size() == 8);
  CHECK(deviation_set(ptree, DeviationKind::kCounterfactual).members.size() ==
        12);
  CHECK(deviation_set(ptree, DeviationKind::kInternal).members.size() == 6);
  // 8^8 swap tables blow the default budget.
  CHECK_THROWS_AS(deviation_set(ptree, DeviationKind::kSwap), ResourceError);

  PohpFormGame kuhn = make_game("kuhn");
  const TreeIndex& ktree = kuhn.tree(0);
  CHECK(deviation_set(ktree, DeviationKind::kExternal).members.size() == 64);
  CHECK(deviation_set(ktree, DeviationKind::kCounterfactual).members.size() ==
        18);
  CHECK(deviation_set(ktree, DeviationKind::kInternal).members.size() == 12);
}

TEST_CASE("external deviations overwrite every decision") {
  PohpFormGame form = make_game("theorem1_gadget_pr");
  const TreeIndex& tree = form.tree(0);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  PureStrategy target = universe.at(5, tree);
  Deviation dev = external_deviation(target);

  for (long i = 0; i < universe.size; ++i) {
    PureStrategy image =
        apply_deviation(tree, universe, dev, universe.at(i, tree));
    for (int s : tree.decision_states()) CHECK(image[s] == target[s]);
  }

  ForcedRegion fr = forced_region(tree, dev);
  CHECK(fr.representable);
  CHECK(fr.forced.size() == tree.decision_states().size());
}

TEST_CASE("truncations gate where the image applies") {
  PohpFormGame form = make_game("theorem1_gadget_pr");
  const TreeIndex& tree = form.tree(0);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  int s1 = find_state(tree, "s1");
  int s2a = find_state(tree, "s2a");
  int s2b = find_state(tree, "s2b");

  PureStrategy target(tree.states().size(), -1);
  target[s1] = 1;
  target[s2a] = 1;
  target[s2b] = 1;
  Deviation dev = external_deviation(target);
  PureStrategy x(tree.states().size(), -1);
  x[s1] = 0;
  x[s2a] = 0;
  x[s2b] = 0;

  // Strictly before the root there is nothing: the identity.
  PureStrategy none =
      apply_deviation(tree, universe, truncate(dev, s1, TruncationMode::kBefore), x);
  CHECK(none == x);

  // At-or-before the root touches only the root.
  PureStrategy at_root = apply_deviation(
      tree, universe, truncate(dev, s1, TruncationMode::kAtOrBefore), x);
  CHECK(at_root[s1] == 1);
  CHECK(at_root[s2a] == 0);
  CHECK(at_root[s2b] == 0);

  // Before one branch's second decision covers exactly the root again.
  PureStrategy before_a = apply_deviation(
      tree, universe, truncate(dev, s2a, TruncationMode::kBefore), x);
  CHECK(before_a == at_root);
}

TEST_CASE("counterfactual deviations steer to the trigger then continue") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& tree = form.tree(0);
  int j = find_state(tree, "J");
  int jcb = find_state(tree, "Jcb");
  REQUIRE(j >= 0);
  REQUIRE(jcb >= 0);

  Deviation dev = counterfactual_deviation(tree, jcb, {{jcb, 0}});
  ForcedRegion fr = forced_region(tree, dev);
  REQUIRE(fr.representable);
  // The steering chain forces the check at J (actions there are b, c).
  REQUIRE(tree.state(j).actions == std::vector<Action>{"b", "c"});
  CHECK(fr.forced.at(j) == 1);
  CHECK(fr.forced.at(jcb) == 0);
  CHECK(fr.forced.size() == 2);

  PureStrategySet universe = PureStrategySet::enumerate(tree);
  PureStrategy x = universe.at(63, tree);
  PureStrategy image = apply_deviation(tree, universe, dev, x);
  CHECK(image[j] == 1);
  CHECK(image[jcb] == 0);
  for (int s : tree.decision_states())
    if (s != j && s != jcb) CHECK(image[s] == x[s]);
}

TEST_CASE("counterfactual preconditions are validated") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& tree = form.tree(0);
  int jcb = find_state(tree, "Jcb");

  // Missing continuation at the trigger itself.
  CHECK_THROWS_AS(counterfactual_deviation(tree, jcb, {}), ValidationError);
  // Out-of-range continuation action.
  CHECK_THROWS_AS(counterfactual_deviation(tree, jcb, {{jcb, 7}}),
                  ValidationError);
  // The trigger must be a decision state.
  CHECK_THROWS_AS(
      counterfactual_deviation(tree, tree.terminal_states()[0], {{jcb, 0}}),
      DomainError);

  // Forgetful agents have no unique steering path.
  PohpFormGame gadget = make_game("theorem1_gadget");
  const TreeIndex& gtree = gadget.tree(0);
  CHECK_THROWS_AS(
      counterfactual_deviation(gtree, gtree.decision_states()[0], {}),
      ContractError);
}

TEST_CASE("pushforward under uniform play") {
  PohpFormGame form = make_game("theorem1_gadget");
  const TreeIndex& tree = form.tree(0);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  StrategyTable pi = StrategyTable::uniform(tree);

  MixedStrategy id = pushforward(tree, universe, pi, identity_deviation());
  REQUIRE(id.weights.size() == 4);
  for (double w : id.weights) CHECK(w == doctest::Approx(0.25));

  PureStrategy target(tree.states().size(), -1);
  for (int s : tree.decision_states()) target[s] = 0;
  MixedStrategy pushed =
      pushforward(tree, universe, pi, external_deviation(target));
  CHECK(pushed.weights[universe.index_of(target)] == doctest::Approx(1.0));

  DeviationSet internals = deviation_set(tree, DeviationKind::kInternal);
  for (const Deviation& dev : internals.members) {
    MixedStrategy m = pushforward(tree, universe, pi, dev);
    double sum = 0.0;
    for (double w : m.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("internal deviations substitute a single action") {
  PohpFormGame form = make_game("theorem1_gadget");
  const TreeIndex& tree = form.tree(0);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  DeviationSet internals = deviation_set(tree, DeviationKind::kInternal);

  for (const Deviation& dev : internals.members) {
    CHECK_FALSE(forced_region(tree, dev).representable);
    for (long i = 0; i < universe.size; ++i) {
      PureStrategy x = universe.at(i, tree);
      PureStrategy image = apply_deviation(tree, universe, dev, x);
      int changed = 0;
      for (int s : tree.decision_states())
        if (image[s] != x[s]) ++changed;
      CHECK(changed <= 1);
    }
  }

  // Each (state, from, to) substitution moves exactly the pures playing
  // `from` there, so over the whole set every pure moves somewhere.
  bool any_moved = false;
  for (const Deviation& dev : internals.members)
    for (long i = 0; i < universe.size; ++i)
      any_moved = any_moved || dev.table[i] != i;
  CHECK(any_moved);
}

TEST_CASE("identity deviation passes strategies through") {
  PohpFormGame form = make_game("matching_pennies");
  const TreeIndex& tree = form.tree(0);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  Deviation id = identity_deviation();
  for (long i = 0; i < universe.size; ++i) {
    PureStrategy x = universe.at(i, tree);
    CHECK(apply_deviation(tree, universe, id, x) == x);
  }
}

}  // namespace
