#include "pohp/adapters.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <utility>

#include "pohp/errors.h"

namespace pohp {

namespace {

std::string path_string(const GameCore& g, int id) {
  if (id == 0) return ".";
  std::vector<const std::string*> parts;
  for (int cur = id; cur != 0; cur = g.nodes[cur].parent) {
    parts.push_back(&g.nodes[cur].token);
  }
  std::string out;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (!out.empty()) out += '/';
    out += **it;
  }
  return out;
}

int child_by_token(const GameCore& g, int id, const Action& tok,
                   const std::string& what) {
  const GameNode& n = g.nodes[id];
  for (std::size_t i = 0; i < n.actions.size(); ++i) {
    if (n.actions[i] == tok) return n.children[i];
  }
  throw ContractError("no move '" + tok + "' " + what + " at " +
                      path_string(g, id) + " in " + g.name);
}

// Shared immutable context captured by every closure of one view.
struct ViewCtx {
  std::shared_ptr<const GameCore> game;
  int viewer = 0;       // == game->num_players for the chance view
  int first_turn = 0;   // parity bit of the view's environment
  std::map<std::string, double> reward_of_obs;
  std::map<InfoState, std::vector<Action>> actions_of_label;
};

// Game node reached by a view history, plus whether a survival check failed
// inside the final daimon block.
struct Landing {
  int node = 0;
  bool dead = false;
};

Landing resolve(const ViewCtx& ctx, const History& h) {
  const GameCore& g = *ctx.game;
  Landing at;
  for (std::size_t p = 0; p < h.actions.size(); ++p) {
    const Action& tok = h.actions[p];
    if (at.dead) throw ContractError("history continues past a failed check");
    if (static_cast<int>(p % 2) == ctx.first_turn) {
      // Daimon block: '.'-joined opponent/chance moves, '#' for none, a
      // final '!' when the run ended with a failed survival check.
      std::size_t start = 0;
      while (start <= tok.size()) {
        std::size_t dot = tok.find('.', start);
        std::string piece = tok.substr(
            start, dot == std::string::npos ? std::string::npos : dot - start);
        start = dot == std::string::npos ? tok.size() + 1 : dot + 1;
        if (piece == "#") continue;
        if (piece == "!") {
          at.dead = true;
          continue;
        }
        at.node = child_by_token(g, at.node, piece, "for the daimon");
      }
    } else {
      if (g.nodes[at.node].actor != ctx.viewer) {
        throw ContractError("agent move where the viewer does not act at " +
                            path_string(g, at.node));
      }
      at.node = child_by_token(g, at.node, tok, "for the viewer");
    }
  }
  return at;
}

struct Block {
  Action token;
  int landing = 0;
  bool dead = false;
  double prob = 1.0;
};

// Enumerates the daimon's blocks from `node`, depth first, the death branch
// of each interior node before its moves (moves in stored order). When
// `branch` is provided it yields each interior node's move distribution and
// the block probabilities are filled in.
void walk_blocks(const GameCore& g, int viewer, int node, std::string prefix,
                 double prob,
                 const std::function<std::vector<double>(int)>* branch,
                 std::vector<Block>& out) {
  const GameNode& n = g.nodes[node];
  if (n.terminal || n.actor == viewer) {
    out.push_back(Block{prefix.empty() ? "#" : prefix, node, false, prob});
    return;
  }
  if (n.gamma < 1.0) {
    std::string tok = prefix.empty() ? "!" : prefix + ".!";
    out.push_back(Block{tok, node, true, prob * (1.0 - n.gamma)});
  }
  std::vector<double> weights;
  if (branch != nullptr) {
    weights = (*branch)(node);
    if (weights.size() != n.actions.size()) {
      throw ContractError("move distribution arity mismatch at " +
                          path_string(g, node));
    }
  }
  for (std::size_t i = 0; i < n.actions.size(); ++i) {
    std::string next =
        prefix.empty() ? n.actions[i] : prefix + "." + n.actions[i];
    double w = branch == nullptr ? 1.0 : n.gamma * weights[i];
    walk_blocks(g, viewer, n.children[i], next, prob * w, branch, out);
  }
}

Observation observe_at(const ViewCtx& ctx, const Landing& at) {
  if (at.dead) return Observation("!");
  const GameNode& n = ctx.game->nodes[at.node];
  if (n.terminal) return Observation("$" + path_string(*ctx.game, at.node));
  return Observation(n.label);
}

double reward_entry(const GameNode& n, int player) {
  if (player < 0 || player >= static_cast<int>(n.rewards.size())) return 0.0;
  return n.rewards[player];
}

// Conservative timing check: the viewer's information-set labels each appear
// at a single own-action depth, so no state can repeat along a trajectory.
bool labels_are_timed(const GameCore& g, int viewer) {
  std::map<std::string, int> depth_of;
  std::vector<int> own_depth(g.nodes.size(), 0);
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    int parent = g.nodes[i].parent;
    own_depth[i] = own_depth[parent] + (g.nodes[parent].actor == viewer ? 1 : 0);
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const GameNode& n = g.nodes[i];
    if (n.terminal || n.actor != viewer) continue;
    auto [it, fresh] = depth_of.emplace(n.label, own_depth[i]);
    if (!fresh && it->second != own_depth[i]) return false;
  }
  return true;
}

}  // namespace

GameView make_view(std::shared_ptr<const GameCore> game, int viewer,
                   const ChanceActUpdate& chance_act,
                   const InfoState& chance_initial) {
  const GameCore& g = *game;
  if (viewer < 0 || viewer > g.num_players) {
    throw ContractError("viewer " + std::to_string(viewer) + " out of range");
  }
  const bool is_chance = viewer == g.num_players;

  auto ctx = std::make_shared<ViewCtx>();
  ctx->game = game;
  ctx->viewer = viewer;
  ctx->first_turn =
      (g.nodes[0].terminal || g.nodes[0].actor == viewer) ? 1 : 0;

  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const GameNode& n = g.nodes[i];
    if (n.terminal) {
      if (!is_chance) {
        ctx->reward_of_obs["$" + path_string(g, static_cast<int>(i))] =
            reward_entry(n, viewer);
      }
      continue;
    }
    if (n.actor == viewer) {
      if (n.label.empty()) {
        throw ContractError("unlabeled node for viewer at " +
                            path_string(g, static_cast<int>(i)));
      }
      auto [ai, afresh] = ctx->actions_of_label.emplace(n.label, n.actions);
      if (!afresh && ai->second != n.actions) {
        throw ValidationError("moves differ across label '" + n.label + "'");
      }
      if (!is_chance) {
        double r = reward_entry(n, viewer);
        auto [ri, rfresh] = ctx->reward_of_obs.emplace(n.label, r);
        if (!rfresh && ri->second != r) {
          throw ValidationError("reward differs across label '" + n.label +
                                "'");
        }
      }
    } else if (!is_chance && reward_entry(n, viewer) != 0.0) {
      throw ValidationError("player " + std::to_string(viewer + 1) +
                            " cannot observe their reward at " +
                            path_string(g, static_cast<int>(i)));
    }
  }

  GameView view;
  view.viewer = viewer;
  view.spec.name =
      g.name + "/" + (is_chance ? "chance" : "p" + std::to_string(viewer + 1));
  view.spec.first_turn = ctx->first_turn;
  view.spec.reward_bound = g.reward_bound();
  view.spec.legal_actions = [ctx](const History& h) -> std::vector<Action> {
    Landing at = resolve(*ctx, h);
    if (static_cast<int>(h.actions.size() % 2) == ctx->first_turn) {
      std::vector<Block> blocks;
      walk_blocks(*ctx->game, ctx->viewer, at.node, "", 1.0, nullptr, blocks);
      std::vector<Action> out;
      out.reserve(blocks.size());
      for (const Block& b : blocks) out.push_back(b.token);
      return out;
    }
    if (at.dead || ctx->game->nodes[at.node].terminal) return {};
    return ctx->game->nodes[at.node].actions;
  };
  view.spec.observe = [ctx](const History& h) {
    return observe_at(*ctx, resolve(*ctx, h));
  };
  view.spec.continue_prob = [ctx](const History& h) -> double {
    Landing at = resolve(*ctx, h);
    if (at.dead) return 0.0;
    const GameNode& n = ctx->game->nodes[at.node];
    if (n.terminal) return 0.0;
    if (n.actor != ctx->viewer) {
      throw ContractError("active history lands off-turn at " +
                          path_string(*ctx->game, at.node));
    }
    return n.gamma;
  };

  view.agent.initial_state =
      ctx->first_turn == 1
          ? (g.nodes[0].label.empty() ? "." : g.nodes[0].label)
          : InfoState("^");
  if (is_chance && !chance_initial.empty()) {
    view.agent.initial_state = chance_initial;
  }
  if (is_chance && chance_act) {
    view.agent.act_update = chance_act;
  } else {
    view.agent.act_update = [](const InfoState& s, const Action& a) {
      return s + " " + a;
    };
  }
  view.agent.obs_update = [](const InfoState& s, const Observation& o) {
    return o == "!" ? s + " !" : InfoState(o);
  };
  if (is_chance) {
    view.agent.reward = [](const Observation&) { return 0.0; };
  } else {
    view.agent.reward = [ctx](const Observation& o) {
      auto it = ctx->reward_of_obs.find(o);
      return it == ctx->reward_of_obs.end() ? 0.0 : it->second;
    };
  }
  view.agent.state_actions = [ctx](const InfoState& s) -> std::vector<Action> {
    auto it = ctx->actions_of_label.find(s);
    if (it == ctx->actions_of_label.end()) {
      throw ContractError("no move table for state '" + s + "'");
    }
    return it->second;
  };
  view.agent.timed =
      (is_chance && chance_act) ? true : labels_are_timed(g, viewer);
  view.agent.perfect_recall = false;  // detected structurally after indexing
  return view;
}

DaimonPolicy view_daimon(std::shared_ptr<const GameCore> game, int viewer,
                         std::vector<AgentPolicy> profile) {
  const GameCore& g = *game;
  if (static_cast<int>(profile.size()) != g.num_players) {
    throw ContractError("profile holds " + std::to_string(profile.size()) +
                        " policies for " + std::to_string(g.num_players) +
                        " players");
  }
  int first_turn = (g.nodes[0].terminal || g.nodes[0].actor == viewer) ? 1 : 0;
  auto ctx = std::make_shared<ViewCtx>();
  ctx->game = game;
  ctx->viewer = viewer;
  ctx->first_turn = first_turn;
  auto moved = std::make_shared<std::vector<AgentPolicy>>(std::move(profile));
  return [ctx, moved](const History& h,
                      const std::vector<Action>& legal) -> std::vector<double> {
    const GameCore& game_ref = *ctx->game;
    Landing at = resolve(*ctx, h);
    std::function<std::vector<double>(int)> branch =
        [&](int node) -> std::vector<double> {
      const GameNode& n = game_ref.nodes[node];
      std::vector<double> w;
      if (n.actor == game_ref.chance_actor()) {
        w = n.chance_probs;
      } else {
        w = (*moved)[n.actor](n.label, n.actions);
      }
      if (w.size() != n.actions.size()) {
        throw ContractError("policy arity mismatch at " +
                            path_string(game_ref, node));
      }
      double total = 0.0;
      for (double x : w) {
        if (x < -1e-12) throw ContractError("negative move probability");
        total += x;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw ContractError("move probabilities sum to " +
                            std::to_string(total));
      }
      return w;
    };
    std::vector<Block> blocks;
    walk_blocks(game_ref, ctx->viewer, at.node, "", 1.0, &branch, blocks);
    std::map<Action, double> of_token;
    for (const Block& b : blocks) of_token[b.token] = b.prob;
    std::vector<double> out(legal.size(), 0.0);
    for (std::size_t i = 0; i < legal.size(); ++i) {
      auto it = of_token.find(legal[i]);
      if (it == of_token.end()) {
        throw ContractError("daimon asked about unknown block '" + legal[i] +
                            "'");
      }
      out[i] = it->second;
    }
    return out;
  };
}

std::vector<Action> flatten_view_history(const History& h) {
  std::vector<Action> out;
  for (const Action& tok : h.actions) {
    std::size_t start = 0;
    while (start <= tok.size()) {
      std::size_t dot = tok.find('.', start);
      std::string piece = tok.substr(
          start, dot == std::string::npos ? std::string::npos : dot - start);
      start = dot == std::string::npos ? tok.size() + 1 : dot + 1;
      if (piece != "#" && !piece.empty()) out.push_back(piece);
    }
  }
  return out;
}

PohpFormGame::PohpFormGame(GameCore game, ChanceActUpdate chance_act,
                           InfoState chance_initial)
    : game_(std::make_shared<const GameCore>(std::move(game))) {
  game_->validate();
  for (int v = 0; v <= game_->num_players; ++v) {
    bool chance = v == game_->num_players;
    views_.push_back(make_view(game_, v, chance ? chance_act : ChanceActUpdate(),
                               chance ? chance_initial : InfoState()));
  }
  for (int v = 0; v <= game_->num_players; ++v) {
    TreeIndex tree = TreeIndex::build(views_[v].spec, views_[v].agent);
    if (detect_perfect_recall(tree)) {
      views_[v].agent.perfect_recall = true;
      tree = TreeIndex::build(views_[v].spec, views_[v].agent);
    }
    trees_.push_back(std::move(tree));
  }
}

std::vector<StrategyTable> PohpFormGame::uniform_profile() const {
  std::vector<StrategyTable> out;
  for (int p = 0; p < num_players(); ++p) {
    out.push_back(StrategyTable::uniform(trees_[p]));
  }
  return out;
}

DaimonTable PohpFormGame::daimon_for(
    int viewer, const std::vector<StrategyTable>& profile) const {
  if (static_cast<int>(profile.size()) != num_players()) {
    throw ContractError("profile size != player count");
  }
  std::vector<AgentPolicy> policies;
  for (int p = 0; p < num_players(); ++p) {
    policies.push_back(profile[p].as_policy(trees_[p]));
  }
  DaimonPolicy sigma = view_daimon(game_, viewer, std::move(policies));
  return DaimonTable::from_policy(trees_[viewer], sigma);
}

std::vector<double> PohpFormGame::expected_utilities(
    const std::vector<StrategyTable>& profile) const {
  if (static_cast<int>(profile.size()) != num_players()) {
    throw ContractError("profile size != player count");
  }
  const GameCore& g = *game_;
  std::vector<AgentPolicy> policies;
  for (int p = 0; p < num_players(); ++p) {
    policies.push_back(profile[p].as_policy(trees_[p]));
  }
  std::vector<double> totals(num_players(), 0.0);
  // Arrival rewards weighted by reach; survival thins the mass on leaving.
  std::vector<double> mass(g.nodes.size(), 0.0);
  mass[0] = 1.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const GameNode& n = g.nodes[i];
    if (mass[i] == 0.0) continue;
    for (int p = 0; p < num_players(); ++p) {
      totals[p] += mass[i] * reward_entry(n, p);
    }
    if (n.terminal) continue;
    std::vector<double> w = n.actor == g.chance_actor()
                                ? n.chance_probs
                                : policies[n.actor](n.label, n.actions);
    if (w.size() != n.actions.size()) {
      throw ContractError("policy arity mismatch at " +
                          path_string(g, static_cast<int>(i)));
    }
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      mass[n.children[k]] += mass[i] * n.gamma * w[k];
    }
  }
  return totals;
}

PohpFormGame::Playthrough PohpFormGame::play_round(
    const std::vector<StrategyTable>& profile, std::uint64_t seed) const {
  if (static_cast<int>(profile.size()) != num_players()) {
    throw ContractError("profile size != player count");
  }
  const GameCore& g = *game_;
  std::vector<AgentPolicy> policies;
  for (int p = 0; p < num_players(); ++p) {
    policies.push_back(profile[p].as_policy(trees_[p]));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Playthrough out;
  out.returns.assign(num_players(), 0.0);
  int node = 0;
  for (;;) {
    const GameNode& n = g.nodes[node];
    for (int p = 0; p < num_players(); ++p) {
      out.returns[p] += reward_entry(n, p);
    }
    if (n.terminal) break;
    if (unit(rng) >= n.gamma) {
      out.died = true;
      out.path.push_back("!");
      break;
    }
    std::vector<double> w = n.actor == g.chance_actor()
                                ? n.chance_probs
                                : policies[n.actor](n.label, n.actions);
    double roll = unit(rng);
    std::size_t pick = n.actions.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      acc += w[k];
      if (roll < acc) {
        pick = k;
        break;
      }
    }
    out.path.push_back(n.actions[pick]);
    node = n.children[pick];
  }
  return out;
}

}  // namespace pohp
