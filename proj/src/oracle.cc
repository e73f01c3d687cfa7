#include "pohp/oracle.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"
#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/reach.h"
#include "pohp/values.h"

namespace pohp {
namespace {

// mt19937_64 output mapped to [0, 1) without distribution adapters, so the
// stream is identical on every standard library.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Independent view-tree sweep: arrival probabilities (split into the agent's
// factor and everything else) and expected reward collected strictly after
// leaving each node. Written recursively against the raw node structure; does
// not call the analytic evaluation pipeline.

struct SweepResult {
  std::vector<double> agent;   // agent's action-probability factor
  std::vector<double> env;     // initial weight, daimon actions, survival
  std::vector<double> future;  // rewards strictly after leaving the node
};

void sweep_arrivals(const TreeIndex& tree, const StrategyTable& pi,
                    const DaimonTable& sigma, int id, double agent, double env,
                    SweepResult& out) {
  out.agent[id] = agent;
  out.env[id] = env;
  const TreeNode& node = tree.node(id);
  if (node.terminal) return;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (node.active) {
      sweep_arrivals(tree, pi, sigma, node.children[i],
                     agent * pi.rows[node.state][i], env * node.gamma, out);
    } else {
      sweep_arrivals(tree, pi, sigma, node.children[i], agent,
                     env * sigma.rows[id][i], out);
    }
  }
}

double sweep_future(const TreeIndex& tree, const StrategyTable& pi,
                    const DaimonTable& sigma, int id, SweepResult& out,
                    std::vector<char>& have) {
  if (have[id]) return out.future[id];
  const TreeNode& node = tree.node(id);
  double v = 0.0;
  if (!node.terminal) {
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      int child = node.children[i];
      double step = node.active ? node.gamma * pi.rows[node.state][i]
                                : sigma.rows[id][i];
      const TreeNode& next = tree.node(child);
      v += step * ((next.active ? next.reward : 0.0) +
                   sweep_future(tree, pi, sigma, child, out, have));
    }
  }
  have[id] = 1;
  out.future[id] = v;
  return v;
}

SweepResult run_sweep(const TreeIndex& tree, const StrategyTable& pi,
                      const DaimonTable& sigma) {
  const std::size_t n = tree.nodes().size();
  SweepResult out;
  out.agent.assign(n, 0.0);
  out.env.assign(n, 0.0);
  out.future.assign(n, 0.0);
  std::vector<char> have(n, 0);
  for (std::size_t k = 0; k < tree.roots().size(); ++k) {
    int root = tree.roots()[k];
    sweep_arrivals(tree, pi, sigma, root, 1.0,
                   tree.spec().initial_histories[k].weight, out);
    sweep_future(tree, pi, sigma, root, out, have);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Joint pure-strategy enumeration on the underlying game tree.

struct LabelSlot {
  int actor = 0;
  std::string label;
  int arity = 0;
  const std::vector<double>* row = nullptr;  // profile row for this label
};

// Every player must see each of its labels at most once per root-to-leaf
// path; otherwise one behavioral row would act twice on a single path and
// pure-strategy enumeration would not reproduce the behavioral mixture.
void check_label_once_per_path(const GameCore& g, int node,
                               std::vector<std::set<std::string>>& seen) {
  const GameNode& n = g.nodes[node];
  bool pushed = false;
  if (!n.terminal && n.actor < g.num_players) {
    if (!seen[n.actor].insert(n.label).second)
      throw ContractError("label '" + n.label +
                          "' repeats on one path; pure enumeration invalid");
    pushed = true;
  }
  for (int child : n.children)
    check_label_once_per_path(g, child, seen);
  if (pushed) seen[n.actor].erase(n.label);
}

// Expected reward for `player` collected strictly after leaving `node`, with
// player actions fixed by `act` and chance playing its distributions.
double pure_future(const GameCore& g, int player,
                   const std::map<std::pair<int, std::string>, int>& act,
                   int node) {
  const GameNode& n = g.nodes[node];
  if (n.terminal) return 0.0;
  double acc = 0.0;
  if (n.actor == g.num_players) {  // chance
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const GameNode& child = g.nodes[n.children[i]];
      acc += n.chance_probs[i] * (child.rewards[player] +
                                  pure_future(g, player, act, n.children[i]));
    }
  } else {
    int a = act.at({n.actor, n.label});
    const GameNode& child = g.nodes[n.children[a]];
    acc = child.rewards[player] + pure_future(g, player, act, n.children[a]);
  }
  return n.gamma * acc;
}

// Realization-weighted contribution under one joint assignment: with an empty
// target, all rewards weighted by arrival mass; otherwise the mass-weighted
// future return at the player's nodes labeled `target`.
void pure_collect(const GameCore& g, int player,
                  const std::map<std::pair<int, std::string>, int>& act,
                  const std::string& target, int node, double mass,
                  double& acc) {
  if (mass == 0.0) return;
  const GameNode& n = g.nodes[node];
  if (target.empty()) {
    acc += mass * n.rewards[player];
  } else if (!n.terminal && n.actor == player && n.label == target) {
    acc += mass * pure_future(g, player, act, node);
    return;  // labels never repeat below (checked), nothing more to collect
  }
  if (n.terminal) return;
  if (n.actor == g.num_players) {
    for (std::size_t i = 0; i < n.children.size(); ++i)
      pure_collect(g, player, act, target, n.children[i],
                   mass * n.gamma * n.chance_probs[i], acc);
  } else {
    int a = act.at({n.actor, n.label});
    pure_collect(g, player, act, target, n.children[a], mass * n.gamma, acc);
  }
}

std::vector<LabelSlot> label_slots(const PohpFormGame& form,
                                   const std::vector<StrategyTable>& profile) {
  const GameCore& g = form.game();
  std::map<std::pair<int, std::string>, int> arity;
  for (const GameNode& n : g.nodes) {
    if (n.terminal || n.actor >= g.num_players) continue;
    arity[{n.actor, n.label}] = static_cast<int>(n.actions.size());
  }
  std::vector<LabelSlot> slots;
  for (const auto& [key, k] : arity) {
    LabelSlot slot;
    slot.actor = key.first;
    slot.label = key.second;
    slot.arity = k;
    int sid = form.tree(slot.actor).state_id(key.second);
    if (sid < 0)
      throw ContractError("game label '" + key.second +
                          "' missing from the player's view");
    slot.row = &profile[slot.actor].rows[sid];
    slots.push_back(slot);
  }
  return slots;
}

}  // namespace

StrategyTable random_strategy(const TreeIndex& tree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  StrategyTable out = StrategyTable::uniform(tree);
  for (int s : tree.decision_states()) {
    double total = 0.0;
    for (double& w : out.rows[s]) {
      w = 0.05 + unit_draw(rng);
      total += w;
    }
    for (double& w : out.rows[s]) w /= total;
  }
  return out;
}

std::vector<StrategyTable> random_profile(const PohpFormGame& form,
                                          std::uint64_t seed) {
  std::vector<StrategyTable> profile;
  for (int p = 0; p < form.num_players(); ++p)
    profile.push_back(
        random_strategy(form.tree(p), seed * 0x9e3779b97f4a7c15ULL + p + 1));
  return profile;
}

double brute_force_value(const PohpFormGame& form, int player,
                         const std::vector<StrategyTable>& profile,
                         const InfoState& state) {
  const GameCore& g = form.game();
  if (player < 0 || player >= g.num_players)
    throw ContractError("player index out of range");
  std::vector<std::set<std::string>> seen(g.num_players);
  check_label_once_per_path(g, 0, seen);

  std::vector<LabelSlot> slots = label_slots(form, profile);
  std::vector<int> choice(slots.size(), 0);
  std::map<std::pair<int, std::string>, int> act;
  double value = 0.0;
  for (;;) {
    double weight = 1.0;
    for (std::size_t i = 0; i < slots.size(); ++i)
      weight *= (*slots[i].row)[choice[i]];
    if (weight > 0.0) {
      for (std::size_t i = 0; i < slots.size(); ++i)
        act[{slots[i].actor, slots[i].label}] = choice[i];
      double acc = 0.0;
      pure_collect(g, player, act, state, 0, 1.0, acc);
      value += weight * acc;
    }
    std::size_t pos = 0;  // odometer step
    while (pos < slots.size() && ++choice[pos] == slots[pos].arity)
      choice[pos++] = 0;
    if (pos == slots.size()) break;
  }
  return value;
}

BestResponse best_response(const PohpFormGame& form, int player,
                           const std::vector<StrategyTable>& profile) {
  const TreeIndex& tree = form.tree(player);
  if (!tree.agent().perfect_recall)
    throw ContractError("best response needs a perfect-recall view");
  DaimonTable sigma = form.daimon_for(player, profile);

  const std::size_t n = tree.nodes().size();
  std::vector<double> dreach(n, 0.0);
  for (std::size_t k = 0; k < tree.roots().size(); ++k)
    dreach[tree.roots()[k]] = tree.spec().initial_histories[k].weight;
  for (std::size_t id = 0; id < n; ++id) {  // parents are stored first
    const TreeNode& node = tree.node(static_cast<int>(id));
    if (node.terminal) continue;
    for (std::size_t i = 0; i < node.children.size(); ++i)
      dreach[node.children[i]] =
          dreach[id] * (node.active ? node.gamma : sigma.rows[id][i]);
  }

  BestResponse br;
  br.strategy.assign(tree.states().size(), -1);
  std::vector<double> val(n, 0.0);
  std::vector<char> have(n, 0);
  // Expected future return when the player plays the chosen actions; valid
  // once every decision state below has been resolved.
  std::function<double(int)> future = [&](int id) -> double {
    if (have[id]) return val[id];
    const TreeNode& node = tree.node(id);
    double v = 0.0;
    if (!node.terminal) {
      if (node.active) {
        int a = br.strategy[node.state];
        if (a < 0) throw ContractError("best-response ordering violated");
        int mid = node.children[a];
        const TreeNode& between = tree.node(mid);
        for (std::size_t b = 0; b < between.actions.size(); ++b) {
          int land = between.children[b];
          v += sigma.rows[mid][b] *
               (tree.node(land).reward + future(land));
        }
        v *= node.gamma;
      } else {
        for (std::size_t b = 0; b < node.actions.size(); ++b) {
          int child = node.children[b];
          v += sigma.rows[id][b] * (tree.node(child).reward + future(child));
        }
      }
    }
    have[id] = 1;
    val[id] = v;
    return v;
  };

  std::vector<int> order = tree.decision_states();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return tree.state(a).agent_depth > tree.state(b).agent_depth;
  });
  for (int s : order) {
    const StateEntry& e = tree.state(s);
    int best = 0;
    double best_q = 0.0;
    for (std::size_t a = 0; a < e.actions.size(); ++a) {
      double q = 0.0;
      for (int h : e.histories) {
        const TreeNode& node = tree.node(h);
        int mid = node.children[a];
        const TreeNode& between = tree.node(mid);
        double acc = 0.0;
        for (std::size_t b = 0; b < between.actions.size(); ++b) {
          int land = between.children[b];
          acc += sigma.rows[mid][b] * (tree.node(land).reward + future(land));
        }
        q += dreach[h] * node.gamma * acc;
      }
      if (a == 0 || q > best_q) {
        best = static_cast<int>(a);
        best_q = q;
      }
    }
    br.strategy[s] = best;
  }

  for (std::size_t k = 0; k < tree.roots().size(); ++k) {
    int root = tree.roots()[k];
    const TreeNode& node = tree.node(root);
    br.value += tree.spec().initial_histories[k].weight *
                ((node.active ? node.reward : 0.0) + future(root));
  }
  return br;
}

double exploitability(const PohpFormGame& form,
                      const std::vector<StrategyTable>& profile) {
  std::vector<double> base = form.expected_utilities(profile);
  double total = 0.0;
  for (int p = 0; p < form.num_players(); ++p)
    total += best_response(form, p, profile).value - base[p];
  return total;
}

std::vector<double> oracle_state_value(const TreeIndex& tree,
                                       const StrategyTable& pi,
                                       const DaimonTable& sigma) {
  SweepResult sweep = run_sweep(tree, pi, sigma);
  std::vector<double> out(tree.states().size(), 0.0);
  for (std::size_t s = 0; s < tree.states().size(); ++s)
    for (int h : tree.state(static_cast<int>(s)).histories)
      out[s] += sweep.agent[h] * sweep.env[h] * sweep.future[h];
  return out;
}

std::vector<double> oracle_deviation_value(const TreeIndex& tree,
                                           const StrategyTable& pi,
                                           const DaimonTable& sigma,
                                           const Deviation& dev) {
  ForcedRegion fr = forced_region(tree, dev);
  if (fr.representable) {
    StrategyTable forced = pi;
    for (const auto& [s, a] : fr.forced) {
      forced.rows[s].assign(forced.rows[s].size(), 0.0);
      forced.rows[s][a] = 1.0;
    }
    return oracle_state_value(tree, forced, sigma);
  }
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  std::vector<double> acc(tree.states().size(), 0.0);
  std::map<long, std::vector<double>> memo;
  for (long i = 0; i < universe.size; ++i) {
    PureStrategy x = universe.at(i, tree);
    double w = pure_weight(tree, pi, x);
    if (w <= 0.0) continue;
    long image = universe.index_of(apply_deviation(tree, universe, dev, x));
    auto it = memo.find(image);
    if (it == memo.end()) {
      it = memo
               .emplace(image, oracle_state_value(
                                   tree, pure_table(tree, universe.at(image, tree)),
                                   sigma))
               .first;
    }
    for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += w * it->second[s];
  }
  return acc;
}

std::vector<HindsightRow> audit_hindsight_rationality(
    const TreeIndex& tree, const std::vector<StrategyTable>& pis,
    const std::vector<DaimonTable>& sigmas, const DeviationSet& devs) {
  if (pis.size() != sigmas.size())
    throw ContractError("strategy sequences have different lengths");
  const long T = static_cast<long>(pis.size());
  std::vector<HindsightRow> rows;
  for (std::size_t d = 0; d < devs.members.size(); ++d)
    for (int s : tree.decision_states())
      rows.push_back(HindsightRow{static_cast<int>(d), s, 0.0, 0.0});
  if (T == 0) return rows;
  for (long t = 0; t < T; ++t) {
    std::size_t r = 0;
    for (const Deviation& dev : devs.members) {
      std::vector<double> full =
          oracle_deviation_value(tree, pis[t], sigmas[t], dev);
      for (int s : tree.decision_states()) {
        std::vector<double> before = oracle_deviation_value(
            tree, pis[t], sigmas[t],
            truncate(dev, s, TruncationMode::kBefore));
        std::vector<double> at = oracle_deviation_value(
            tree, pis[t], sigmas[t],
            truncate(dev, s, TruncationMode::kAtOrBefore));
        rows[r].avg_full_regret += (full[s] - before[s]) / T;
        rows[r].avg_immediate_regret += (at[s] - before[s]) / T;
        ++r;
      }
    }
  }
  return rows;
}

void write_reports_jsonl(const std::vector<OracleReport>& reports,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open report file: " + path);
  for (const OracleReport& r : reports) {
    nlohmann::json j;
    j["check"] = r.check;
    j["game"] = r.game;
    j["trials"] = r.trials;
    j["max_discrepancy"] = r.max_discrepancy;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    out << j.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// Verification suite.

namespace {

struct CheckAccumulator {
  long trials = 0;
  double worst = 0.0;
  void add(double discrepancy) {
    ++trials;
    if (discrepancy > worst) worst = discrepancy;
  }
};

OracleReport report(const std::string& check, const std::string& game,
                    const CheckAccumulator& acc, double tol) {
  return OracleReport{check, game, acc.trials, acc.worst, tol,
                      acc.worst <= tol};
}

// Independent backward induction on the one-player serialized chain: survival
// is checked on leaving each round-start node, so the discount multiplies
// everything after the current arrival reward.
double chain_policy_dp(const MarkovSpec& m, const TreeIndex& tree,
                       const StrategyTable& pi, int round, int s) {
  if (m.terminal[s]) return m.terminal_utility(0, s);
  if (round > 64) return 0.0;  // unreachable: the chain ends by round 2
  std::string label = "t" + std::to_string(round) + "|" + m.states[s];
  int sid = tree.state_id(label);
  if (sid < 0) throw ContractError("chain label missing: " + label);
  double acc = 0.0;
  for (std::size_t a = 0; a < m.player_actions[0].size(); ++a) {
    std::vector<double> next =
        m.transition(s, std::vector<int>{static_cast<int>(a)});
    double cont = 0.0;
    for (std::size_t to = 0; to < next.size(); ++to) {
      if (next[to] == 0.0) continue;
      cont += next[to] *
              chain_policy_dp(m, tree, pi, round + 1, static_cast<int>(to));
    }
    acc += pi.rows[sid][a] * cont;
  }
  double reward = m.arrival_reward ? m.arrival_reward(0, s) : 0.0;
  return reward + m.discount * acc;
}

Deviation gadget_external(const TreeIndex& tree, int a1, int a2) {
  PureStrategy target(tree.states().size(), -1);
  for (int s : tree.decision_states())
    target[s] = tree.state(s).value == "s1" ? a1 : a2;
  return external_deviation(target);
}

}  // namespace

std::vector<OracleReport> run_verification_suite(double tolerance,
                                                 std::uint64_t seed) {
  std::vector<OracleReport> out;
  const std::vector<std::string> pr_games = {"kuhn", "matching_pennies",
                                             "theorem1_gadget_pr",
                                             "chain_mdp3"};

  // Value recursion: v_s = local reward through s + sum over successor states.
  for (const std::string& id : pr_games) {
    PohpFormGame form = make_game(id);
    CheckAccumulator acc;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<StrategyTable> profile =
          random_profile(form, seed + 101 * trial);
      for (int p = 0; p < form.num_players(); ++p)
        acc.add(check_value_decomposition(form.tree(p), profile[p],
                                          form.daimon_for(p, profile))
                    .max_abs_error);
    }
    out.push_back(report("value-decomposition", id, acc, tolerance));
  }

  // Regret recursion: full(s) = immediate(s) + sum of full over successors.
  for (const std::string& id : {std::string("kuhn"),
                                std::string("theorem1_gadget_pr")}) {
    PohpFormGame form = make_game(id);
    CheckAccumulator acc;
    std::mt19937_64 rng(seed + 17);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<StrategyTable> profile =
          random_profile(form, seed + 211 * trial + 7);
      for (int p = 0; p < form.num_players(); ++p) {
        const TreeIndex& tree = form.tree(p);
        DaimonTable sigma = form.daimon_for(p, profile);
        PureStrategy target(tree.states().size(), -1);
        for (int s : tree.decision_states())
          target[s] = static_cast<int>(rng() % tree.state(s).actions.size());
        acc.add(check_regret_decomposition(tree, profile[p], sigma,
                                           external_deviation(target))
                    .max_abs_error);
      }
    }
    out.push_back(report("regret-decomposition-external", id, acc, tolerance));
  }
  {
    PohpFormGame form = make_game("kuhn");
    CheckAccumulator acc;
    std::mt19937_64 rng(seed + 29);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<StrategyTable> profile =
          random_profile(form, seed + 307 * trial + 13);
      for (int p = 0; p < form.num_players(); ++p) {
        const TreeIndex& tree = form.tree(p);
        DaimonTable sigma = form.daimon_for(p, profile);
        const std::vector<int>& decisions = tree.decision_states();
        int trigger = decisions[rng() % decisions.size()];
        std::map<int, int> continuation;
        for (int s : decisions)
          if (tree.weakly_precedes(trigger, s))
            continuation[s] =
                static_cast<int>(rng() % tree.state(s).actions.size());
        acc.add(check_regret_decomposition(
                    tree, profile[p], sigma,
                    counterfactual_deviation(tree, trigger, continuation))
                    .max_abs_error);
      }
    }
    out.push_back(
        report("regret-decomposition-counterfactual", "kuhn", acc, tolerance));
  }
  {
    PohpFormGame form = make_game("theorem1_gadget");
    const TreeIndex& tree = form.tree(0);
    DeviationSet swaps = deviation_set(tree, DeviationKind::kSwap);
    CheckAccumulator acc;
    for (int trial = 0; trial < 2; ++trial) {
      StrategyTable pi = trial == 0 ? StrategyTable::uniform(tree)
                                    : random_strategy(tree, seed + 41);
      DaimonTable sigma = form.daimon_for(0, {pi});
      for (const Deviation& dev : swaps.members)
        acc.add(
            check_regret_decomposition(tree, pi, sigma, dev).max_abs_error);
    }
    out.push_back(report("regret-decomposition-swap", "theorem1_gadget", acc,
                         tolerance));
  }

  // Brute-force joint enumeration against the analytic pipeline and the
  // independent sweep, totals and per-decision-state.
  for (const std::string& id : bundled_game_ids()) {
    PohpFormGame form = make_game(id);
    CheckAccumulator acc;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<StrategyTable> profile =
          random_profile(form, seed + 401 * trial + 3);
      std::vector<double> exact = form.expected_utilities(profile);
      for (int p = 0; p < form.num_players(); ++p) {
        const TreeIndex& tree = form.tree(p);
        DaimonTable sigma = form.daimon_for(p, profile);
        Evaluation ev = evaluate_strategies(tree, profile[p], sigma);
        std::vector<double> osv = oracle_state_value(tree, profile[p], sigma);
        double total = brute_force_value(form, p, profile);
        acc.add(std::abs(total - ev.total));
        acc.add(std::abs(total - exact[p]));
        for (int s : tree.decision_states()) {
          double brute =
              brute_force_value(form, p, profile, tree.state(s).value);
          acc.add(std::abs(brute - ev.state_value[s]));
          acc.add(std::abs(brute - osv[s]));
        }
      }
    }
    out.push_back(report("brute-force-agreement", id, acc, tolerance));
  }

  // Best response dominates every pure strategy and the profile itself.
  for (const std::string& id : {std::string("kuhn"),
                                std::string("matching_pennies"),
                                std::string("chain_mdp3")}) {
    PohpFormGame form = make_game(id);
    CheckAccumulator acc;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<StrategyTable> profile =
          random_profile(form, seed + 503 * trial + 19);
      std::vector<double> exact = form.expected_utilities(profile);
      for (int p = 0; p < form.num_players(); ++p) {
        const TreeIndex& tree = form.tree(p);
        BestResponse br = best_response(form, p, profile);
        acc.add(std::max(0.0, exact[p] - br.value));
        std::vector<StrategyTable> swapped = profile;
        swapped[p] = pure_table(tree, br.strategy);
        acc.add(std::abs(br.value - brute_force_value(form, p, swapped)));
        PureStrategySet universe = PureStrategySet::enumerate(tree);
        for (long i = 0; i < universe.size; ++i) {
          swapped[p] = pure_table(tree, universe.at(i, tree));
          acc.add(
              std::max(0.0, brute_force_value(form, p, swapped) - br.value));
        }
      }
    }
    out.push_back(report("best-response-dominance", id, acc, tolerance));
  }

  // Uniform matching pennies is the equilibrium: value zero, no gain.
  {
    PohpFormGame form = make_game("matching_pennies");
    std::vector<StrategyTable> uniform = form.uniform_profile();
    std::vector<double> exact = form.expected_utilities(uniform);
    CheckAccumulator acc;
    acc.add(std::abs(exact[0]));
    acc.add(std::abs(exact[1]));
    acc.add(std::abs(exploitability(form, uniform)));
    out.push_back(
        report("uniform-equilibrium", "matching_pennies", acc, tolerance));
  }

  // Closed-form constants of the forgetful two-decision game under the
  // uniform agent: values 0 at both states; the constant deviation onto
  // action #1 gains +1 at the second state and nothing at the first.
  {
    PohpFormGame form = make_game("theorem1_gadget");
    const TreeIndex& tree = form.tree(0);
    StrategyTable pi = StrategyTable::uniform(tree);
    DaimonTable sigma = form.daimon_for(0, {pi});
    int s1 = tree.state_id("s1");
    int s2 = tree.state_id("s2");
    Deviation dev = gadget_external(tree, 0, 0);
    std::vector<double> osv = oracle_state_value(tree, pi, sigma);
    std::vector<double> odv = oracle_deviation_value(tree, pi, sigma, dev);
    std::vector<double> at2 = oracle_deviation_value(
        tree, pi, sigma, truncate(dev, s2, TruncationMode::kAtOrBefore));
    std::vector<double> bef2 = oracle_deviation_value(
        tree, pi, sigma, truncate(dev, s2, TruncationMode::kBefore));
    CheckAccumulator acc;
    acc.add(std::abs(osv[s1]));
    acc.add(std::abs(osv[s2]));
    acc.add(std::abs(odv[s1] - 1.0));
    acc.add(std::abs((at2[s2] - bef2[s2]) - 1.0));
    acc.add(std::abs(immediate_regret(tree, pi, sigma, dev, s2) - 1.0));
    acc.add(std::abs(immediate_regret(tree, pi, sigma, dev, s1)));
    acc.add(std::abs(full_regret(tree, pi, sigma, dev, s1) - 1.0));
    acc.add(std::abs(full_regret(tree, pi, sigma, dev, s2) - 1.0));
    out.push_back(
        report("forgetful-gadget-constants", "theorem1_gadget", acc, tolerance));
  }

  // Serialized chain against direct backward induction, plus its two
  // closed-form policy values.
  {
    MarkovSpec m = chain_mdp3_spec();
    PohpFormGame form = make_game("chain_mdp3");
    const TreeIndex& tree = form.tree(0);
    CheckAccumulator acc;
    for (int trial = 0; trial < 10; ++trial) {
      StrategyTable pi = random_strategy(tree, seed + 601 * trial + 23);
      double dp = chain_policy_dp(m, tree, pi, 0, m.start);
      acc.add(std::abs(dp - form.expected_utilities({pi})[0]));
    }
    StrategyTable step = StrategyTable::uniform(tree);
    StrategyTable jump = StrategyTable::uniform(tree);
    for (int s : tree.decision_states()) {
      const std::vector<Action>& acts = tree.state(s).actions;
      for (std::size_t a = 0; a < acts.size(); ++a) {
        step.rows[s][a] = acts[a] == "step" ? 1.0 : 0.0;
        jump.rows[s][a] = acts[a] == "jump" ? 1.0 : 0.0;
      }
    }
    acc.add(std::abs(form.expected_utilities({step})[0] - 0.81));
    acc.add(std::abs(form.expected_utilities({jump})[0] - 0.9));
    out.push_back(report("markov-chain-dp", "chain_mdp3", acc, tolerance));
  }

  // The serialized two-player environment: chance's states between its own
  // moves are exactly the live (round, environment state) pairs the players
  // decide at, and chance's update writes the next pair verbatim.
  {
    MarkovSpec m = two_player_markov_spec();
    PohpFormGame form = markov_form(m);
    const TreeIndex& chance = form.tree(form.chance_viewer());
    std::set<std::string> player_states;
    for (int p = 0; p < form.num_players(); ++p)
      for (int s : form.tree(p).decision_states())
        player_states.insert(form.tree(p).state(s).value);
    std::set<std::string> chance_live;
    CheckAccumulator acc;
    for (const StateEntry& e : chance.states()) {
      if (e.active || e.terminal) continue;
      std::size_t bar = e.value.find('|');
      if (bar == std::string::npos) {
        acc.add(1.0);
        continue;
      }
      std::string name = e.value.substr(bar + 1);
      auto it = std::find(m.states.begin(), m.states.end(), name);
      if (it == m.states.end()) {
        acc.add(1.0);
        continue;
      }
      if (!m.terminal[it - m.states.begin()]) chance_live.insert(e.value);
    }
    for (const std::string& s : player_states)
      acc.add(chance_live.count(s) ? 0.0 : 1.0);
    for (const std::string& s : chance_live)
      acc.add(player_states.count(s) ? 0.0 : 1.0);
    // Update constraint: after chance plays a state name, its information
    // state is the next round's pair.
    for (const TreeNode& node : chance.nodes()) {
      if (node.parent < 0 || node.active) continue;
      const TreeNode& parent = chance.node(node.parent);
      if (!parent.active || parent.terminal) continue;
      const std::string& from = chance.state(parent.state).value;
      int round = std::stoi(from.substr(1, from.find('|') - 1));
      std::string expect =
          "t" + std::to_string(round + 1) + "|" + node.incoming;
      acc.add(chance.state(node.state).value == expect ? 0.0 : 1.0);
    }
    out.push_back(report("markov-chance-bijection", "two_player_markov", acc,
                         0.5));
  }

  // All probability mass is conserved: it either reaches a terminal state or
  // dies at one of the viewer's own survival checks, which have no explicit
  // terminal history of their own.
  for (const std::string& id : {std::string("kuhn"),
                                std::string("matching_pennies"),
                                std::string("theorem1_gadget"),
                                std::string("chain_mdp3")}) {
    PohpFormGame form = make_game(id);
    CheckAccumulator acc;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<StrategyTable> profile =
          random_profile(form, seed + 701 * trial + 31);
      for (int p = 0; p < form.num_players(); ++p) {
        const TreeIndex& tree = form.tree(p);
        SweepResult sweep =
            run_sweep(tree, profile[p], form.daimon_for(p, profile));
        double mass = 0.0;
        for (int s : tree.terminal_states())
          for (int h : tree.state(s).histories)
            mass += sweep.agent[h] * sweep.env[h];
        for (int h = 0; h < static_cast<int>(tree.nodes().size()); ++h) {
          const TreeNode& node = tree.node(h);
          if (node.active && !node.terminal)
            mass += sweep.agent[h] * sweep.env[h] * (1.0 - node.gamma);
        }
        acc.add(std::abs(mass - 1.0));
      }
    }
    out.push_back(report("terminal-reach-mass", id, acc, tolerance));
  }

  // Reach factorization: realization probability splits into the agent's
  // product and the environment's, and matches the independent sweep.
  for (const std::string& id : {std::string("kuhn"),
                                std::string("chain_mdp3")}) {
    PohpFormGame form = make_game(id);
    CheckAccumulator acc;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<StrategyTable> profile =
          random_profile(form, seed + 809 * trial + 37);
      for (int p = 0; p < form.num_players(); ++p) {
        const TreeIndex& tree = form.tree(p);
        DaimonTable sigma = form.daimon_for(p, profile);
        SweepResult sweep = run_sweep(tree, profile[p], sigma);
        for (int s : tree.decision_states()) {
          StateReach sr =
              state_realization_prob(tree, profile[p], sigma, s);
          acc.add(std::abs(sr.total - sr.agent * sr.environment));
          double direct = 0.0;
          for (int h : tree.state(s).histories)
            direct += sweep.agent[h] * sweep.env[h];
          acc.add(std::abs(sr.total - direct));
        }
      }
    }
    out.push_back(report("reach-factorization", id, acc, 1e-12));
  }

  // Sampled play agrees with the exact expectation within 4RD/sqrt(n).
  for (const std::string& id : {std::string("matching_pennies"),
                                std::string("kuhn")}) {
    PohpFormGame form = make_game(id);
    std::vector<StrategyTable> profile = random_profile(form, seed + 907);
    std::vector<double> exact = form.expected_utilities(profile);
    const long n = 100000;
    std::vector<double> mean(form.num_players(), 0.0);
    for (long i = 0; i < n; ++i) {
      PohpFormGame::Playthrough play =
          form.play_round(profile, seed * 1315423911ULL + i);
      for (int p = 0; p < form.num_players(); ++p)
        mean[p] += play.returns[p] / n;
    }
    int depth = 0;
    for (int p = 0; p < form.num_players(); ++p)
      depth = std::max(depth, form.tree(p).horizon());
    double bound = 4.0 * form.game().reward_bound() * depth / std::sqrt(n);
    CheckAccumulator acc;
    for (int p = 0; p < form.num_players(); ++p)
      acc.add(std::abs(mean[p] - exact[p]));
    out.push_back(report("monte-carlo-consistency", id, acc, bound));
  }

  return out;
}

}  // namespace pohp
