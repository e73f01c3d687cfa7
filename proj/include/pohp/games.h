#ifndef POHP_GAMES_H_
#define POHP_GAMES_H_

#include <functional>
#include <string>
#include <vector>

#include "pohp/adapters.h"
#include "pohp/game.h"

namespace pohp {

// Finite Markov game (an MDP when single-player): named environment states, a
// deterministic start state, per-player action sets shared across states, a
// transition kernel over next states, rewards delivered on arrival, and
// discounting realized as a survival check at each round start.
//
// The realized game serializes each round as: player 1's turn (the round
// start, survival = discount), remaining players in order, then a chance turn
// executing the transition. Players observe only the round's (time, state)
// pair, never the other players' moves within the round.
struct MarkovSpec {
  std::string name = "markov";
  int num_players = 1;
  std::vector<std::string> states;  // names double as chance's move tokens
  int start = 0;
  std::vector<std::vector<Action>> player_actions;  // one action set per player
  // Distribution over next states given (state, per-player action indices).
  std::function<std::vector<double>(int, const std::vector<int>&)> transition;
  // Per-player reward on arrival at a live state (at their turn that round).
  std::function<double(int, int)> arrival_reward;  // (player, state) -> r
  std::vector<bool> terminal;                      // per state
  std::function<double(int, int)> terminal_utility;  // (player, state) -> u
  double discount = 1.0;
  // Rounds before hard truncation; -1 derives the depth at which the residual
  // discounted reward falls below 1e-12 (requires discount < 1).
  int max_rounds = -1;
};

GameCore markov_to_game(const MarkovSpec& m);

// markov_to_game plus the chance-state hooks that make chance's passive
// information states coincide with the environment's (time, state) pairs.
PohpFormGame markov_form(const MarkovSpec& m);

// Bundled games.
GameCore kuhn_poker();
GameCore matching_pennies();
// Single-player two-decision game whose second decision point looks the same
// regardless of the first move (pass distinguish_second to lift that).
GameCore theorem1_gadget(bool distinguish_second = false);
MarkovSpec chain_mdp3_spec(double discount = 0.9);
MarkovSpec two_player_markov_spec();
GameCore empty_game();

// Registry: bundled ids, and the factory accepting an id or a game file path.
std::vector<std::string> bundled_game_ids();
PohpFormGame make_game(const std::string& id_or_path);

}  // namespace pohp

#endif  // POHP_GAMES_H_
