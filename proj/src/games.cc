#include "pohp/games.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "pohp/errors.h"

namespace pohp {

namespace {

GameCore parse_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse_game(in, source);
}

double reward_or_zero(const std::function<double(int, int)>& f, int player,
                      int state) {
  return f ? f(player, state) : 0.0;
}

int derived_horizon(const MarkovSpec& m, double reward_peak) {
  if (m.max_rounds >= 0) return m.max_rounds;
  if (m.discount >= 1.0) {
    throw ValidationError(m.name + ": undiscounted model needs max_rounds");
  }
  if (m.discount == 0.0 || reward_peak == 0.0) return 1;
  // Smallest d with discount^d * peak < 1e-12.
  double d = std::log(1e-12 / reward_peak) / std::log(m.discount);
  int rounds = static_cast<int>(std::floor(d)) + 1;
  return std::max(1, std::min(rounds, 100000));
}

}  // namespace

GameCore markov_to_game(const MarkovSpec& m) {
  if (m.num_players < 1) throw ValidationError(m.name + ": needs players");
  if (m.states.empty()) throw ValidationError(m.name + ": needs states");
  if (m.start < 0 || m.start >= static_cast<int>(m.states.size())) {
    throw ValidationError(m.name + ": start state out of range");
  }
  if (static_cast<int>(m.player_actions.size()) != m.num_players) {
    throw ValidationError(m.name + ": one action set per player required");
  }
  if (m.terminal.size() != m.states.size()) {
    throw ValidationError(m.name + ": one terminal flag per state required");
  }
  if (!m.transition) throw ValidationError(m.name + ": missing transition");
  if (m.discount < 0.0 || m.discount > 1.0) {
    throw ValidationError(m.name + ": discount outside [0,1]");
  }

  std::vector<std::vector<Action>> acts = m.player_actions;
  for (auto& a : acts) {
    if (a.empty()) throw ValidationError(m.name + ": empty action set");
    std::sort(a.begin(), a.end());
  }

  double peak = 0.0;
  for (int p = 0; p < m.num_players; ++p) {
    for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
      peak = std::max(peak, std::abs(reward_or_zero(m.arrival_reward, p, s)));
      peak = std::max(peak, std::abs(reward_or_zero(m.terminal_utility, p, s)));
    }
  }
  const int horizon = derived_horizon(m, peak);

  GameCore g;
  g.name = m.name;
  g.num_players = m.num_players;

  auto round_label = [&](int k, int s) {
    return "t" + std::to_string(k) + "|" + m.states[s];
  };

  auto add_node = [&](int parent, const Action& token) {
    GameNode n;
    n.parent = parent;
    n.token = token;
    n.rewards.assign(m.num_players, 0.0);
    int id = static_cast<int>(g.nodes.size());
    g.nodes.push_back(std::move(n));
    if (parent >= 0) {
      g.nodes[parent].actions.push_back(token);
      g.nodes[parent].children.push_back(id);
    }
    return id;
  };

  // Recursive round construction; the joint action accumulates per player.
  std::function<void(int, int, int)> grow_state;
  std::function<void(int, int, int, std::vector<int>&)> grow_turn;

  grow_state = [&](int id, int k, int s) {
    GameNode& n = g.nodes[id];
    if (m.terminal[static_cast<std::size_t>(s)]) {
      n.terminal = true;
      for (int p = 0; p < m.num_players; ++p) {
        n.rewards[p] = reward_or_zero(m.terminal_utility, p, s);
      }
      return;
    }
    if (k >= horizon) {
      n.terminal = true;  // truncation point; residual value below tolerance
      return;
    }
    n.actor = 0;
    n.label = round_label(k, s);
    n.gamma = m.discount;  // the round-start survival check
    n.rewards[0] = reward_or_zero(m.arrival_reward, 0, s);
    std::vector<int> joint;
    grow_turn(id, k, s, joint);
  };

  grow_turn = [&](int id, int k, int s, std::vector<int>& joint) {
    const int turn = static_cast<int>(joint.size());
    if (turn == m.num_players) {
      // Chance executes the transition.
      GameNode& n = g.nodes[id];
      n.actor = g.chance_actor();
      std::string jtext;
      for (int p = 0; p < m.num_players; ++p) {
        if (!jtext.empty()) jtext += '+';
        jtext += acts[p][joint[p]];
      }
      n.label = round_label(k, s) + "|" + jtext;
      std::vector<double> row = m.transition(s, joint);
      if (row.size() != m.states.size()) {
        throw ValidationError(m.name + ": transition row has wrong arity");
      }
      double sum = 0.0;
      for (double x : row) {
        if (x < 0.0) throw ValidationError(m.name + ": negative transition");
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError(m.name + ": transition row sums to " +
                              std::to_string(sum));
      }
      std::vector<int> order;
      for (int t = 0; t < static_cast<int>(m.states.size()); ++t) {
        if (row[t] > 0.0) order.push_back(t);
      }
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return m.states[a] < m.states[b];
      });
      for (int t : order) {
        int kid = add_node(id, m.states[t]);
        g.nodes[id].chance_probs.push_back(row[t]);
        grow_state(kid, k + 1, t);
      }
      return;
    }
    if (turn > 0) {
      GameNode& n = g.nodes[id];
      n.actor = turn;
      n.label = round_label(k, s);
      n.rewards[turn] = reward_or_zero(m.arrival_reward, turn, s);
    }
    for (int a = 0; a < static_cast<int>(acts[turn].size()); ++a) {
      int kid = add_node(id, acts[turn][a]);
      joint.push_back(a);
      grow_turn(kid, k, s, joint);
      joint.pop_back();
    }
  };

  int root = add_node(-1, Action());
  grow_state(root, 0, m.start);
  g.validate();
  return g;
}

PohpFormGame markov_form(const MarkovSpec& m) {
  GameCore g = markov_to_game(m);
  // Chance's own action token is the next environment state; its state after
  // acting is the next round's (time, state) pair, so chance's passive
  // information states coincide with the environment states.
  ChanceActUpdate act = [](const InfoState& s, const Action& a) -> InfoState {
    std::size_t bar = s.find('|');
    if (s.empty() || s[0] != 't' || bar == std::string::npos) {
      throw ContractError("malformed round state '" + s + "'");
    }
    int k = std::stoi(s.substr(1, bar - 1));
    return "t" + std::to_string(k + 1) + "|" + a;
  };
  InfoState initial = "t0|" + m.states[static_cast<std::size_t>(m.start)];
  return PohpFormGame(std::move(g), std::move(act), std::move(initial));
}

GameCore kuhn_poker() {
  const char ranks[3] = {'J', 'Q', 'K'};
  std::ostringstream out;
  out << "game kuhn\n";
  out << "players 2\n";
  out << "chance . J:1/3 Q:1/3 K:1/3\n";
  for (int i = 0; i < 3; ++i) {
    std::string c1(1, ranks[i]);
    out << "chance " << c1;
    for (int j = 0; j < 3; ++j) {
      if (j != i) out << " " << ranks[j] << ":1/2";
    }
    out << "\n";
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      std::string c1(1, ranks[i]);
      std::string c2(1, ranks[j]);
      std::string deal = c1 + "/" + c2;
      int win = i > j ? 1 : -1;  // showdown sign for player 1
      out << "decision " << deal << " player=1 infoset=" << c1 << "\n";
      out << "decision " << deal << "/b player=2 infoset=" << c2 << "b\n";
      out << "terminal " << deal << "/b/c " << 2 * win << " " << -2 * win
          << "\n";
      out << "terminal " << deal << "/b/f 1 -1\n";
      out << "decision " << deal << "/c player=2 infoset=" << c2 << "c\n";
      out << "terminal " << deal << "/c/c " << win << " " << -win << "\n";
      out << "decision " << deal << "/c/b player=1 infoset=" << c1 << "cb\n";
      out << "terminal " << deal << "/c/b/c " << 2 * win << " " << -2 * win
          << "\n";
      out << "terminal " << deal << "/c/b/f -1 1\n";
    }
  }
  return parse_text(out.str(), "kuhn");
}

GameCore matching_pennies() {
  return parse_text(
      "game matching_pennies\n"
      "players 2\n"
      "decision . player=1 infoset=mp1\n"
      "decision H player=2 infoset=mp2\n"
      "decision T player=2 infoset=mp2\n"
      "terminal H/H 1 -1\n"
      "terminal H/T -1 1\n"
      "terminal T/H -1 1\n"
      "terminal T/T 1 -1\n",
      "matching_pennies");
}

GameCore theorem1_gadget(bool distinguish_second) {
  std::string second1 = distinguish_second ? "s2a" : "s2";
  std::string second2 = distinguish_second ? "s2b" : "s2";
  return parse_text(
      "game theorem1_gadget" + std::string(distinguish_second ? "_pr" : "") +
          "\n"
          "players 1\n"
          "decision . player=1 infoset=s1\n"
          "decision 1 player=1 infoset=" +
          second1 +
          "\n"
          "decision 2 player=1 infoset=" +
          second2 +
          "\n"
          "terminal 1/1 1\n"
          "terminal 1/2 -1\n"
          "terminal 2/1 -1\n"
          "terminal 2/2 1\n",
      "theorem1_gadget");
}

MarkovSpec chain_mdp3_spec(double discount) {
  MarkovSpec m;
  m.name = "chain_mdp3";
  m.num_players = 1;
  m.states = {"s0", "s1", "s2"};
  m.start = 0;
  m.player_actions = {{"jump", "step"}};
  m.terminal = {false, false, true};
  m.discount = discount;
  m.transition = [](int s, const std::vector<int>& joint) {
    std::vector<double> row(3, 0.0);
    bool jump = joint[0] == 0;  // actions are sorted: jump, step
    if (s == 0) {
      row[jump ? 2 : 1] = 1.0;
    } else {
      row[2] = 1.0;  // both moves leave s1 for the goal
    }
    return row;
  };
  m.terminal_utility = [](int, int s) { return s == 2 ? 1.0 : 0.0; };
  return m;
}

MarkovSpec two_player_markov_spec() {
  MarkovSpec m;
  m.name = "markov2";
  m.num_players = 2;
  m.states = {"hi", "lo", "m0", "m1"};
  m.start = 2;
  m.player_actions = {{"c", "d"}, {"c", "d"}};
  m.terminal = {true, true, false, false};
  m.discount = 0.5;
  m.transition = [](int s, const std::vector<int>& joint) {
    std::vector<double> row(4, 0.0);
    if (s == 2) {
      // Both cooperate to advance; anything else ends low.
      if (joint[0] == 0 && joint[1] == 0) {
        row[3] = 1.0;
      } else {
        row[1] = 1.0;
      }
    } else {
      row[0] = 0.75;
      row[1] = 0.25;
    }
    return row;
  };
  m.arrival_reward = [](int player, int s) {
    return player == 0 && s == 3 ? 0.5 : 0.0;
  };
  m.terminal_utility = [](int player, int s) {
    if (s == 0) return player == 0 ? 3.0 : 1.0;
    return 0.0;
  };
  return m;
}

GameCore empty_game() {
  return parse_text(
      "game empty\n"
      "players 1\n"
      "terminal . 0\n",
      "empty");
}

std::vector<std::string> bundled_game_ids() {
  return {"chain_mdp3", "empty",           "kuhn",
          "matching_pennies", "theorem1_gadget", "theorem1_gadget_pr"};
}

PohpFormGame make_game(const std::string& id_or_path) {
  if (id_or_path == "kuhn") return PohpFormGame(kuhn_poker());
  if (id_or_path == "matching_pennies") {
    return PohpFormGame(matching_pennies());
  }
  if (id_or_path == "theorem1_gadget") {
    return PohpFormGame(theorem1_gadget(false));
  }
  if (id_or_path == "theorem1_gadget_pr") {
    return PohpFormGame(theorem1_gadget(true));
  }
  if (id_or_path == "chain_mdp3") return markov_form(chain_mdp3_spec());
  if (id_or_path == "empty") return PohpFormGame(empty_game());
  if (id_or_path.find('/') != std::string::npos ||
      id_or_path.find('.') != std::string::npos) {
    return PohpFormGame(load_game_file(id_or_path));
  }
  std::string known;
  for (const std::string& id : bundled_game_ids()) {
    if (!known.empty()) known += ", ";
    known += id;
  }
  throw ValidationError("unknown game '" + id_or_path + "' (bundled: " + known +
                        "; or pass a game file path)");
}

}  // namespace pohp
