#ifndef POHP_GAME_H_
#define POHP_GAME_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pohp/types.h"

namespace pohp {

// One node of a finite sequential game with chance, simultaneous-move-free
// turn order, optional per-node continue probabilities, and per-player
// rewards delivered on arrival (interior rewards for shaped/Markov games,
// final utilities at terminals).
struct GameNode {
  int parent = -1;
  Action token;                    // edge label from the parent
  int actor = -1;                  // player index, num_players for chance, -1 terminal
  bool terminal = false;
  std::string label;               // information-set label for the actor
  double gamma = 1.0;              // survival prob. checked on leaving this node
  std::vector<double> rewards;     // per player, collected on arrival
  std::vector<Action> actions;
  std::vector<int> children;       // aligned with actions
  std::vector<double> chance_probs;  // chance nodes, aligned with actions
};

struct GameCore {
  std::string name;
  int num_players = 0;
  std::vector<GameNode> nodes;  // node 0 is the root, parents before children

  int chance_actor() const { return num_players; }
  double reward_bound() const;
  int node_at(const std::vector<Action>& path) const;  // -1 when absent
  void validate() const;  // structural invariants; throws ValidationError
};

// Parses the line-oriented description format:
//   game <id>
//   players <N>
//   decision <path> player=<k> [infoset=<label>]
//   chance <path> <token>:<prob> ...
//   terminal <path> <u1> ... <uN>
// Paths are '/'-joined tokens with '.' for the root; probabilities accept
// decimals or fractions like 1/3. Errors carry <source>:<line> positions.
GameCore parse_game(std::istream& in, const std::string& source_name);
GameCore load_game_file(const std::string& path);

// Inverse of parse_game up to formatting; parse(describe(g)) reproduces g.
std::string describe_game(const GameCore& game);

}  // namespace pohp

#endif  // POHP_GAME_H_
