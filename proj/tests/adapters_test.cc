#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "pohp/adapters.h"
#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace {

using namespace pohp;

int find_state(const TreeIndex& tree, const InfoState& value) {
  for (std::size_t s = 0; s < tree.states().size(); ++s)
    if (tree.state(static_cast<int>(s)).value == value)
      return static_cast<int>(s);
  return -1;
}

TEST_CASE("matching pennies views") {
  PohpFormGame form = make_game("matching_pennies");
  REQUIRE(form.num_players() == 2);

  const TreeIndex& t0 = form.tree(0);
  const TreeIndex& t1 = form.tree(1);
  CHECK(t0.decision_states().size() == 1);
  CHECK(t1.decision_states().size() == 1);
  CHECK(detect_perfect_recall(t0));
  CHECK(detect_perfect_recall(t1));

  // The second mover's single decision state pools both of the first mover's
  // choices.
  int d1 = t1.decision_states()[0];
  CHECK(t1.state(d1).histories.size() == 2);
  CHECK(t1.state(d1).actions == std::vector<Action>{"H", "T"});

  // Every leaf history flattens to a real path of the underlying game.
  for (int s : t1.terminal_states()) {
    for (int h : t1.state(s).histories) {
      std::vector<Action> path = flatten_view_history(t1.history_of(h));
      int node = form.game().node_at(path);
      REQUIRE(node >= 0);
      CHECK(form.game().nodes[node].terminal);
    }
  }
}

TEST_CASE("kuhn views expose six decision states per player") {
  PohpFormGame form = make_game("kuhn");
  for (int p = 0; p < 2; ++p) {
    CAPTURE(p);
    const TreeIndex& tree = form.tree(p);
    CHECK(tree.decision_states().size() == 6);
    CHECK(detect_perfect_recall(tree));
  }

  const TreeIndex& t0 = form.tree(0);
  for (const char* card : {"J", "Q", "K"}) {
    int s = find_state(t0, card);
    REQUIRE(s >= 0);
    CHECK(t0.state(s).histories.size() == 2);  // two opponent cards
    int follow = find_state(t0, std::string(card) + "cb");
    REQUIRE(follow >= 0);
    CHECK(t0.state(follow).parent_state == s);
    CHECK(t0.state(follow).parent_action == "c");
    CHECK(t0.strictly_precedes(s, follow));
    CHECK_FALSE(t0.strictly_precedes(follow, s));
  }
  CHECK(t0.horizon() == 2);
  CHECK(form.tree(1).horizon() == 1);
}

TEST_CASE("daimon blocks realize chance and the other players") {
  PohpFormGame form = make_game("kuhn");
  const TreeIndex& t0 = form.tree(0);
  std::vector<StrategyTable> profile = form.uniform_profile();
  DaimonTable sigma = form.daimon_for(0, profile);

  // The deal is one composite block of two chance moves: six outcomes, each
  // with probability 1/6.
  REQUIRE(t0.roots().size() == 1);
  int root = t0.roots()[0];
  REQUIRE(t0.node(root).actions.size() == 6);
  for (const Action& block : t0.node(root).actions)
    CHECK(std::count(block.begin(), block.end(), '.') == 1);
  for (double p : sigma.rows[root]) CHECK(p == doctest::Approx(1.0 / 6.0));

  // After the first player bets, the block is the other player's response
  // under its uniform strategy.
  History h;
  h.actions = {t0.node(root).actions[0], "b"};
  int after_bet = t0.node_id(h);
  REQUIRE(after_bet >= 0);
  REQUIRE(sigma.rows[after_bet].size() == 2);
  for (double p : sigma.rows[after_bet]) CHECK(p == doctest::Approx(0.5));
}

TEST_CASE("expected utilities agree across the player views") {
  for (const char* id : {"kuhn", "matching_pennies"}) {
    CAPTURE(id);
    PohpFormGame form = make_game(id);
    std::vector<StrategyTable> profile = form.uniform_profile();
    std::vector<double> totals = form.expected_utilities(profile);
    REQUIRE(static_cast<int>(totals.size()) == form.num_players());
    // Both bundled two-player games are zero-sum.
    CHECK(totals[0] + totals[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  PohpFormGame mp = make_game("matching_pennies");
  std::vector<double> u = mp.expected_utilities(mp.uniform_profile());
  CHECK(std::abs(u[0]) <= 1e-12);
}

TEST_CASE("markov serialization is timed and discounted") {
  PohpFormGame form = make_game("chain_mdp3");
  const TreeIndex& t0 = form.tree(0);

  REQUIRE(t0.roots().size() == 1);
  const TreeNode& root = t0.node(t0.roots()[0]);
  CHECK(root.active);
  CHECK(t0.state(root.state).value == "t0|s0");
  CHECK(root.gamma == doctest::Approx(0.9));

  std::vector<InfoState> decisions;
  for (int s : t0.decision_states()) decisions.push_back(t0.state(s).value);
  CHECK(decisions == std::vector<InfoState>{"t0|s0", "t1|s1"});
  CHECK(t0.horizon() == 2);

  // Chance's information states between its own moves are the round states.
  const TreeIndex& chance = form.tree(form.chance_viewer());
  CHECK(find_state(chance, "t1|s1") >= 0);
  CHECK(find_state(chance, "t1|s2") >= 0);
}

TEST_CASE("joint play is deterministic per seed") {
  PohpFormGame form = make_game("matching_pennies");
  std::vector<StrategyTable> profile = form.uniform_profile();
  PohpFormGame::Playthrough a = form.play_round(profile, 42);
  PohpFormGame::Playthrough b = form.play_round(profile, 42);
  CHECK(a.path == b.path);
  CHECK(a.returns == b.returns);

  bool saw_different = false;
  for (std::uint64_t seed = 0; seed < 16 && !saw_different; ++seed)
    saw_different = form.play_round(profile, seed).path != a.path;
  CHECK(saw_different);
}

TEST_CASE("the forgetful gadget merges its second decision") {
  PohpFormGame gadget = make_game("theorem1_gadget");
  const TreeIndex& tree = gadget.tree(0);
  CHECK(tree.states().size() == 10);
  CHECK(tree.decision_states().size() == 2);
  CHECK(tree.terminal_states().size() == 4);
  CHECK_FALSE(detect_perfect_recall(tree));

  int s2 = find_state(tree, "s2");
  REQUIRE(s2 >= 0);
  CHECK(tree.state(s2).histories.size() == 2);

  // The noop block between the two decisions flattens away.
  History h;
  h.actions = {"1", "#"};
  int node = tree.node_id(h);
  REQUIRE(node >= 0);
  CHECK(tree.node(node).state == s2);
  CHECK(flatten_view_history(h) == std::vector<Action>{"1"});

  PohpFormGame pr = make_game("theorem1_gadget_pr");
  const TreeIndex& ptree = pr.tree(0);
  CHECK(ptree.decision_states().size() == 3);
  CHECK(detect_perfect_recall(ptree));
  int s2a = find_state(ptree, "s2a");
  REQUIRE(s2a >= 0);
  CHECK(ptree.state(s2a).parent_state == find_state(ptree, "s1"));
  CHECK(ptree.state(s2a).parent_action == "1");
}

TEST_CASE("tree construction honors budgets and depth caps") {
  auto game = std::make_shared<const GameCore>(kuhn_poker());
  GameView view = make_view(game, 0);

  TreeOptions tight;
  tight.node_budget = 3;
  CHECK_THROWS_AS(TreeIndex::build(view.spec, view.agent, tight),
                  ResourceError);

  TreeOptions shallow;
  shallow.max_agent_depth = 1;
  TreeIndex capped = TreeIndex::build(view.spec, view.agent, shallow);
  CHECK(capped.truncated());
  CHECK(capped.horizon() == 1);

  TreeIndex full = TreeIndex::build(view.spec, view.agent);
  CHECK_FALSE(full.truncated());
  CHECK(full.horizon() == 2);
}

}  // namespace
