#ifndef POHP_SPEC_H_
#define POHP_SPEC_H_

#include <functional>
#include <string>
#include <vector>

#include "pohp/types.h"

namespace pohp {

struct InitialHistory {
  std::vector<Action> tokens;  // may be empty (the usual case)
  double weight = 1.0;         // initial distribution, must sum to 1
};

// Environment side of a partially observable history process. The agent and
// the daimon alternate turns; `first_turn` is the parity bit: a history is
// passive (daimon to act) iff its length is congruent to `first_turn` mod 2,
// so first_turn == 1 means the agent moves at the empty history.
//
// `legal_actions` serves both sides: queried at active histories it lists the
// agent's actions, at passive histories the daimon's. `observe` and
// `continue_prob` are defined at active histories only; a continue
// probability of zero marks a terminal history. Observations at active
// initial histories exist so returns are well defined there, but they do not
// feed the information-state update (the update starts at the agent's initial
// state).
struct PohpSpec {
  std::string name;
  int first_turn = 1;
  std::vector<InitialHistory> initial_histories = {InitialHistory{}};
  std::function<std::vector<Action>(const History&)> legal_actions;
  std::function<Observation(const History&)> observe;
  std::function<double(const History&)> continue_prob;
  double reward_bound = 1.0;

  std::size_t length(const History& h) const {
    return initial_histories[h.origin].tokens.size() + h.actions.size();
  }

  bool is_passive(const History& h) const {
    return static_cast<int>(length(h) % 2) == first_turn;
  }

  bool is_active(const History& h) const { return !is_passive(h); }
};

// Agent side: explicit information-state machine. `act_update` consumes the
// agent's own action, `obs_update` the observation that follows a daimon
// action. `reward` maps observations to bounded rewards.
//
// `timed` declares that state values never repeat along a trajectory (they
// encode how many actions the agent has taken); `perfect_recall` additionally
// declares that each state has a unique predecessor state. Both are validated
// structurally when a tree index is built.
struct AgentSpec {
  InfoState initial_state;
  std::function<InfoState(const InfoState&, const Action&)> act_update;
  std::function<InfoState(const InfoState&, const Observation&)> obs_update;
  std::function<double(const Observation&)> reward;
  // Optional: the action set the agent believes available in a state, used to
  // validate consistency with the environment's legal actions.
  std::function<std::vector<Action>(const InfoState&)> state_actions;
  bool timed = true;
  bool perfect_recall = false;
};

// Behavioral policies in functional form. Probabilities are returned aligned
// with the legal-action vector passed in.
using AgentPolicy =
    std::function<std::vector<double>(const InfoState&, const std::vector<Action>&)>;
using DaimonPolicy =
    std::function<std::vector<double>(const History&, const std::vector<Action>&)>;

inline std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
}

inline AgentPolicy uniform_agent_policy() {
  return [](const InfoState&, const std::vector<Action>& legal) {
    return uniform_weights(legal.size());
  };
}

inline DaimonPolicy uniform_daimon_policy() {
  return [](const History&, const std::vector<Action>& legal) {
    return uniform_weights(legal.size());
  };
}

}  // namespace pohp

#endif  // POHP_SPEC_H_
