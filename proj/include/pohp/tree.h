#ifndef POHP_TREE_H_
#define POHP_TREE_H_

#include <map>
#include <string>
#include <vector>

#include "pohp/spec.h"
#include "pohp/types.h"

namespace pohp {

// The unified information-state update: initial histories map to the agent's
// initial state, histories whose last action was the agent's own go through
// act_update, histories that just saw a daimon action go through obs_update on
// the observation emitted there. Validates action legality along the way.
InfoState unified_update(const PohpSpec& spec, const AgentSpec& agent, const History& h);

class TreeIndex;

// True when every information state's member histories share the same
// previous decision point and arriving action, i.e. the agent never forgets
// its own choices.
bool detect_perfect_recall(const TreeIndex& tree);

struct TreeNode {
  int parent = -1;       // -1 for initial histories
  Action incoming;       // action leading here (empty for initial histories)
  int origin = 0;
  bool active = false;   // agent to act (or terminal)
  int state = -1;
  int depth = 0;         // token length including the origin's tokens
  int agent_depth = 0;   // agent actions taken strictly before this history
  double gamma = 1.0;    // continue probability; meaningful at active nodes
  Observation obs;       // active nodes only
  double reward = 0.0;   // agent's reward for obs
  bool terminal = false; // active with zero continue probability (or depth cap)
  std::vector<Action> actions;  // legal actions; empty at terminals
  std::vector<int> children;    // aligned with `actions`
};

struct StateEntry {
  InfoState value;
  bool active = false;
  bool terminal = false;      // every member history is terminal
  int agent_depth = 0;
  std::vector<int> histories; // member node ids, ascending
  std::vector<Action> actions;    // common action set (decision states)
  std::vector<int> child_states;  // sorted unique successor states (next arrivals)
  int parent_state = -1;      // previous decision state (perfect recall only)
  Action parent_action;       // action taken there toward this state
};

struct TreeOptions {
  int max_agent_depth = -1;  // cap on agent decisions; -1 means unlimited
  long node_budget = 0;      // 0: POHP_NODE_BUDGET env var or 200000
};

// Exhaustive index of the reachable history tree together with the agent's
// information-state partition. Immutable once built; all downstream
// computations (reach, values, regret, learning) run against it.
class TreeIndex {
 public:
  static TreeIndex build(PohpSpec spec, AgentSpec agent, TreeOptions opts = {});

  const PohpSpec& spec() const { return spec_; }
  const AgentSpec& agent() const { return agent_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<StateEntry>& states() const { return states_; }
  const TreeNode& node(int id) const { return nodes_[id]; }
  const StateEntry& state(int id) const { return states_[id]; }
  const std::vector<int>& roots() const { return roots_; }
  // Active non-terminal states, ascending by id (BFS discovery order).
  const std::vector<int>& decision_states() const { return decision_states_; }
  const std::vector<int>& terminal_states() const { return terminal_states_; }

  int state_id(const InfoState& s) const;
  int node_id(const History& h) const;  // -1 if unreachable/unknown
  History history_of(int node_id) const;

  // Weak precedence on states: some member of `a` is a prefix of some member
  // of `b`. A strict partial order when restricted to distinct states of a
  // timed agent.
  bool weakly_precedes(int a, int b) const { return precedes_[a][b]; }
  bool strictly_precedes(int a, int b) const { return a != b && precedes_[a][b]; }

  int horizon() const { return horizon_; }    // max agent decisions on a path
  bool truncated() const { return truncated_; }
  long num_nodes() const { return static_cast<long>(nodes_.size()); }

 private:
  TreeIndex() = default;

  PohpSpec spec_;
  AgentSpec agent_;
  std::vector<TreeNode> nodes_;
  std::vector<StateEntry> states_;
  std::map<InfoState, int> state_ids_;
  std::vector<int> roots_;
  std::vector<int> decision_states_;
  std::vector<int> terminal_states_;
  std::vector<std::vector<bool>> precedes_;
  int horizon_ = 0;
  bool truncated_ = false;
};

}  // namespace pohp

#endif  // POHP_TREE_H_
