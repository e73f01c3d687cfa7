#include "pohp/game.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "pohp/errors.h"

namespace pohp {

double GameCore::reward_bound() const {
  double bound = 0.0;
  for (const GameNode& n : nodes)
    for (double r : n.rewards) bound = std::max(bound, std::abs(r));
  return bound;
}

int GameCore::node_at(const std::vector<Action>& path) const {
  int id = 0;
  for (const Action& tok : path) {
    const GameNode& n = nodes[id];
    auto it = std::find(n.actions.begin(), n.actions.end(), tok);
    if (it == n.actions.end()) return -1;
    id = n.children[it - n.actions.begin()];
  }
  return id;
}

void GameCore::validate() const {
  if (num_players < 1) throw ValidationError(name + ": needs at least one player");
  if (nodes.empty()) throw ValidationError(name + ": has no nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const GameNode& n = nodes[i];
    if (static_cast<int>(n.rewards.size()) != num_players)
      throw ValidationError(name + ": node reward vector has wrong arity");
    if (n.gamma < 0.0 || n.gamma > 1.0)
      throw ValidationError(name + ": survival probability outside [0,1]");
    if (n.terminal) {
      if (!n.actions.empty())
        throw ValidationError(name + ": terminal node has actions");
      continue;
    }
    if (n.actor < 0 || n.actor > num_players)
      throw ValidationError(name + ": node actor out of range");
    if (n.actions.empty())
      throw ValidationError(name + ": non-terminal node has no actions");
    if (n.actions.size() != n.children.size())
      throw ValidationError(name + ": actions and children misaligned");
    if (n.actor == chance_actor()) {
      if (n.chance_probs.size() != n.actions.size())
        throw ValidationError(name + ": chance node lacks probabilities");
      double sum = 0.0;
      for (double p : n.chance_probs) {
        if (p < 0.0 || p > 1.0)
          throw ValidationError(name + ": chance probability outside [0,1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError(name + ": chance probabilities sum to " +
                              std::to_string(sum));
    } else if (n.label.empty()) {
      throw ValidationError(name + ": decision node lacks a label");
    }
    for (const Action& a : n.actions) {
      if (a.empty() ||
          a.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                              "abcdefghijklmnopqrstuvwxyz0123456789_+-") !=
              std::string::npos)
        throw ValidationError(name + ": token '" + a +
                              "' uses characters outside [A-Za-z0-9_+-]");
    }
    std::vector<Action> sorted = n.actions;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError(name + ": duplicate action token at a node");
  }
  // Within one player, same-label nodes must offer the same actions. Labels
  // are scoped per player: views filter by actor, so two players may share a
  // label string (e.g. fully observable Markov round states).
  std::map<std::pair<int, std::string>, std::vector<Action>> label_actions;
  for (const GameNode& n : nodes) {
    if (n.terminal || n.actor == chance_actor()) continue;
    std::vector<Action> sorted = n.actions;
    std::sort(sorted.begin(), sorted.end());
    auto key = std::make_pair(n.actor, n.label);
    auto it = label_actions.find(key);
    if (it == label_actions.end())
      label_actions.emplace(std::move(key), std::move(sorted));
    else if (it->second != sorted)
      throw ValidationError(name + ": information set '" + n.label +
                            "' mixes different action sets");
  }
}

namespace {

struct Decl {
  enum Type { kDecision, kChance, kTerminal } type;
  int line = 0;
  int player = 0;                  // decision, 0-based
  std::string label;               // decision
  std::vector<Action> tokens;      // chance actions, in declaration order
  std::vector<double> probs;       // chance
  std::vector<double> rewards;     // terminal utilities / reward= attribute
  bool has_rewards = false;
  double gamma = 1.0;
};

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& message) {
  throw ValidationError(source + ":" + std::to_string(line) + ": " + message);
}

double parse_number(const std::string& text, const std::string& source,
                    int line) {
  std::size_t slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      double num = std::stod(text.substr(0, slash));
      double den = std::stod(text.substr(slash + 1));
      if (den == 0.0) fail(source, line, "zero denominator in '" + text + "'");
      return num / den;
    }
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(source, line, "expected a number, got '" + text + "'");
  }
}

std::vector<Action> parse_path(const std::string& text, const std::string& source,
                               int line) {
  if (text == ".") return {};
  std::vector<Action> toks;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (part.empty()) fail(source, line, "empty token in path '" + text + "'");
    toks.push_back(part);
  }
  return toks;
}

std::vector<double> parse_reward_list(const std::string& text,
                                      const std::string& source, int line) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';'))
    out.push_back(parse_number(part, source, line));
  return out;
}

}  // namespace

GameCore parse_game(std::istream& in, const std::string& source) {
  std::map<std::vector<Action>, Decl> decls;
  std::string id;
  int num_players = 0;
  int players_line = 0;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::stringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;
    if (word == "game") {
      if (!(ss >> id)) fail(source, lineno, "'game' needs an identifier");
      continue;
    }
    if (word == "players") {
      if (!(ss >> num_players) || num_players < 1)
        fail(source, lineno, "'players' needs a positive count");
      players_line = lineno;
      continue;
    }
    if (word != "decision" && word != "chance" && word != "terminal")
      fail(source, lineno, "unknown directive '" + word + "'");

    std::string path_text;
    if (!(ss >> path_text)) fail(source, lineno, "missing node path");
    std::vector<Action> path = parse_path(path_text, source, lineno);
    if (decls.count(path))
      fail(source, lineno, "node '" + path_text + "' declared twice");

    Decl d;
    d.line = lineno;
    std::vector<std::string> rest;
    std::string tok;
    while (ss >> tok) rest.push_back(tok);

    if (word == "decision") {
      d.type = Decl::kDecision;
      bool have_player = false;
      for (const std::string& attr : rest) {
        if (attr.rfind("player=", 0) == 0) {
          d.player = static_cast<int>(
                         parse_number(attr.substr(7), source, lineno)) - 1;
          have_player = true;
        } else if (attr.rfind("infoset=", 0) == 0) {
          d.label = attr.substr(8);
        } else if (attr.rfind("survive=", 0) == 0) {
          d.gamma = parse_number(attr.substr(8), source, lineno);
        } else if (attr.rfind("reward=", 0) == 0) {
          d.rewards = parse_reward_list(attr.substr(7), source, lineno);
          d.has_rewards = true;
        } else {
          fail(source, lineno, "unknown attribute '" + attr + "'");
        }
      }
      if (!have_player) fail(source, lineno, "decision node needs player=<k>");
      if (d.label.empty()) d.label = path_text;
    } else if (word == "chance") {
      d.type = Decl::kChance;
      for (const std::string& attr : rest) {
        if (attr.rfind("survive=", 0) == 0) {
          d.gamma = parse_number(attr.substr(8), source, lineno);
          continue;
        }
        if (attr.rfind("reward=", 0) == 0) {
          d.rewards = parse_reward_list(attr.substr(7), source, lineno);
          d.has_rewards = true;
          continue;
        }
        std::size_t colon = attr.find(':');
        if (colon == std::string::npos)
          fail(source, lineno, "chance entries look like <token>:<prob>");
        d.tokens.push_back(attr.substr(0, colon));
        d.probs.push_back(parse_number(attr.substr(colon + 1), source, lineno));
      }
      if (d.tokens.empty()) fail(source, lineno, "chance node has no outcomes");
    } else {
      d.type = Decl::kTerminal;
      for (const std::string& u : rest)
        d.rewards.push_back(parse_number(u, source, lineno));
      d.has_rewards = true;
    }
    decls.emplace(std::move(path), std::move(d));
  }

  if (id.empty()) fail(source, lineno, "missing 'game <id>' line");
  if (num_players < 1) fail(source, lineno, "missing 'players <N>' line");
  auto root_it = decls.find({});
  if (root_it == decls.end()) fail(source, lineno, "no root node '.' declared");

  // Children of a path are the declared paths extending it by one token.
  std::map<std::vector<Action>, std::vector<Action>> kids;
  for (const auto& [path, d] : decls) {
    if (path.empty()) continue;
    std::vector<Action> parent(path.begin(), path.end() - 1);
    auto pit = decls.find(parent);
    if (pit == decls.end())
      fail(source, d.line, "node has no declared parent");
    if (pit->second.type == Decl::kTerminal)
      fail(source, d.line, "terminal nodes cannot have children");
    kids[parent].push_back(path.back());
  }

  GameCore game;
  game.name = id;
  game.num_players = num_players;

  // Assemble breadth-first so parents precede children.
  std::vector<std::pair<std::vector<Action>, int>> frontier;
  frontier.emplace_back(std::vector<Action>{}, -1);
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    auto [path, parent_id] = frontier[i];
    const Decl& d = decls.at(path);
    GameNode node;
    node.parent = parent_id;
    if (!path.empty()) node.token = path.back();
    node.gamma = d.gamma;
    node.rewards = d.has_rewards ? d.rewards : std::vector<double>(num_players, 0.0);
    if (static_cast<int>(node.rewards.size()) != num_players)
      fail(source, d.line, "expected " + std::to_string(num_players) +
                               " reward entries");
    std::vector<Action> order;
    if (d.type == Decl::kTerminal) {
      node.terminal = true;
      node.actor = -1;
      if (kids.count(path)) fail(source, d.line, "terminal node has children");
    } else if (d.type == Decl::kChance) {
      node.actor = num_players;
      node.chance_probs = d.probs;
      // Chance nodes are labeled by their path: chance observes everything.
      if (path.empty()) {
        node.label = ".";
      } else {
        for (const Action& t : path) {
          if (!node.label.empty()) node.label += '/';
          node.label += t;
        }
      }
      order = d.tokens;
      auto it = kids.find(path);
      for (const Action& t : order) {
        if (it == kids.end() ||
            std::find(it->second.begin(), it->second.end(), t) == it->second.end())
          fail(source, d.line, "chance outcome '" + t + "' has no declared node");
      }
      if (it != kids.end() && it->second.size() != order.size())
        fail(source, d.line, "chance node has children missing from its outcomes");
    } else {
      node.actor = d.player;
      if (d.player < 0 || d.player >= num_players)
        fail(source, d.line, "player index out of range");
      node.label = d.label;
      auto it = kids.find(path);
      if (it == kids.end())
        fail(source, d.line, "decision node has no children");
      order = it->second;
      std::sort(order.begin(), order.end());
    }
    node.actions = order;
    int my_id = static_cast<int>(game.nodes.size());
    game.nodes.push_back(std::move(node));
    if (parent_id >= 0) game.nodes[parent_id].children.push_back(my_id);
    for (const Action& t : order) {
      std::vector<Action> child = path;
      child.push_back(t);
      frontier.emplace_back(std::move(child), my_id);
    }
  }
  if (frontier.size() != decls.size()) {
    // Some declared node was never attached; players_line keeps this stable.
    fail(source, players_line, "unreachable node declarations present");
  }

  try {
    game.validate();
  } catch (const ValidationError& e) {
    fail(source, players_line, e.what());
  }
  return game;
}

GameCore load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open game file '" + path + "'");
  return parse_game(in, path);
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string path_of(const GameCore& game, int id) {
  std::vector<Action> toks;
  while (game.nodes[id].parent >= 0) {
    toks.push_back(game.nodes[id].token);
    id = game.nodes[id].parent;
  }
  if (toks.empty()) return ".";
  std::string out;
  for (auto it = toks.rbegin(); it != toks.rend(); ++it) {
    if (!out.empty()) out += '/';
    out += *it;
  }
  return out;
}

}  // namespace

std::string describe_game(const GameCore& game) {
  std::ostringstream out;
  out << "game " << game.name << "\n";
  out << "players " << game.num_players << "\n";
  for (std::size_t i = 0; i < game.nodes.size(); ++i) {
    const GameNode& n = game.nodes[i];
    std::string extras;
    if (n.gamma != 1.0) extras += " survive=" + format_number(n.gamma);
    bool shaped = false;
    for (double r : n.rewards) shaped |= r != 0.0;
    if (n.terminal) {
      out << "terminal " << path_of(game, static_cast<int>(i));
      for (double u : n.rewards) out << ' ' << format_number(u);
      out << extras << "\n";
      continue;
    }
    if (shaped) {
      extras += " reward=";
      for (std::size_t k = 0; k < n.rewards.size(); ++k) {
        if (k) extras += ';';
        extras += format_number(n.rewards[k]);
      }
    }
    if (n.actor == game.chance_actor()) {
      out << "chance " << path_of(game, static_cast<int>(i));
      for (std::size_t k = 0; k < n.actions.size(); ++k)
        out << ' ' << n.actions[k] << ':' << format_number(n.chance_probs[k]);
      out << extras << "\n";
    } else {
      out << "decision " << path_of(game, static_cast<int>(i)) << " player="
          << n.actor + 1 << " infoset=" << n.label << extras << "\n";
    }
  }
  return out.str();
}

}  // namespace pohp
