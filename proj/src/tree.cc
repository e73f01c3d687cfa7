#include "pohp/tree.h"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>

#include "pohp/errors.h"

namespace pohp {

namespace {

long resolve_node_budget(long requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("POHP_NODE_BUDGET")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 200000;
}

std::vector<Action> sorted_copy(std::vector<Action> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

InfoState unified_update(const PohpSpec& spec, const AgentSpec& agent, const History& h) {
  if (h.origin < 0 || h.origin >= static_cast<int>(spec.initial_histories.size())) {
    throw ValidationError("unified_update: history origin out of range");
  }
  if (h.actions.empty()) return agent.initial_state;
  History parent = h.prefix(h.actions.size() - 1);
  InfoState parent_state = unified_update(spec, agent, parent);
  const Action& last = h.actions.back();
  std::vector<Action> legal = spec.legal_actions(parent);
  if (std::find(legal.begin(), legal.end(), last) == legal.end()) {
    throw ValidationError("unified_update: action '" + last + "' illegal after " +
                          to_string(parent));
  }
  if (spec.is_active(parent)) return agent.act_update(parent_state, last);
  return agent.obs_update(parent_state, spec.observe(h));
}

TreeIndex TreeIndex::build(PohpSpec spec, AgentSpec agent, TreeOptions opts) {
  if (!spec.legal_actions || !spec.observe || !spec.continue_prob) {
    throw ValidationError("build_tree_index: spec is missing a required function");
  }
  if (!agent.act_update || !agent.obs_update || !agent.reward) {
    throw ValidationError("build_tree_index: agent is missing a required function");
  }
  if (spec.first_turn != 0 && spec.first_turn != 1) {
    throw ValidationError("build_tree_index: first_turn must be 0 or 1");
  }
  if (spec.initial_histories.empty()) {
    throw ValidationError("build_tree_index: no initial histories");
  }
  double xi = 0.0;
  for (const InitialHistory& ih : spec.initial_histories) xi += ih.weight;
  if (std::abs(xi - 1.0) > 1e-9) {
    throw ValidationError("build_tree_index: initial distribution sums to " +
                          std::to_string(xi));
  }

  const long budget = resolve_node_budget(opts.node_budget);

  TreeIndex tree;
  tree.spec_ = std::move(spec);
  tree.agent_ = std::move(agent);
  const PohpSpec& sp = tree.spec_;
  const AgentSpec& ag = tree.agent_;

  // Node-local info-state values, interned into state ids after the walk so
  // that ids follow BFS discovery order.
  std::vector<InfoState> node_state;

  auto intern = [&](const InfoState& v, bool active, const TreeNode& n) {
    auto it = tree.state_ids_.find(v);
    if (it != tree.state_ids_.end()) {
      StateEntry& e = tree.states_[it->second];
      if (e.active != active) {
        throw ValidationError("information state '" + v +
                              "' contains both active and passive histories");
      }
      if (tree.agent_.timed && e.agent_depth != n.agent_depth) {
        throw ValidationError("agent declared timed but state '" + v +
                              "' mixes agent depths");
      }
      return it->second;
    }
    int id = static_cast<int>(tree.states_.size());
    tree.state_ids_.emplace(v, id);
    StateEntry e;
    e.value = v;
    e.active = active;
    e.agent_depth = n.agent_depth;
    tree.states_.push_back(std::move(e));
    return id;
  };

  std::deque<int> queue;
  for (int origin = 0; origin < static_cast<int>(sp.initial_histories.size()); ++origin) {
    TreeNode root;
    root.origin = origin;
    root.depth = static_cast<int>(sp.initial_histories[origin].tokens.size());
    root.agent_depth = 0;
    int id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back(std::move(root));
    node_state.push_back(ag.initial_state);
    tree.roots_.push_back(id);
    queue.push_back(id);
  }

  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    History h = tree.history_of(id);
    {
      TreeNode& n = tree.nodes_[id];
      n.active = sp.is_active(h);
      if (n.active) {
        n.gamma = sp.continue_prob(h);
        if (n.gamma < -1e-12 || n.gamma > 1.0 + 1e-12) {
          throw ValidationError("continue_prob outside [0,1] at " + to_string(h));
        }
        n.gamma = std::min(1.0, std::max(0.0, n.gamma));
        n.obs = sp.observe(h);
        n.reward = ag.reward(n.obs);
        if (std::abs(n.reward) > sp.reward_bound + 1e-9) {
          throw ValidationError("reward " + std::to_string(n.reward) +
                                " exceeds the declared bound at " + to_string(h));
        }
        bool capped =
            opts.max_agent_depth >= 0 && n.agent_depth >= opts.max_agent_depth;
        if (capped && n.gamma > 0.0) tree.truncated_ = true;
        n.terminal = n.gamma == 0.0 || capped;
      }
      if (!n.terminal) {
        n.actions = sp.legal_actions(h);
        if (n.actions.empty()) {
          throw ValidationError("no legal actions at non-terminal " + to_string(h));
        }
        std::vector<Action> sorted = sorted_copy(n.actions);
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          throw ValidationError("duplicate legal action at " + to_string(h));
        }
      }
      tree.horizon_ =
          std::max(tree.horizon_, n.agent_depth + (n.active && !n.terminal ? 1 : 0));
    }

    // Expansion re-indexes nodes_ on every access: push_back may reallocate.
    const bool parent_active = tree.nodes_[id].active;
    const std::vector<Action> expand = tree.nodes_[id].actions;
    for (const Action& a : expand) {
      if (static_cast<long>(tree.nodes_.size()) >= budget) {
        throw ResourceError("build_tree_index: node budget of " + std::to_string(budget) +
                            " exhausted (set POHP_NODE_BUDGET to raise)");
      }
      TreeNode child;
      child.parent = id;
      child.incoming = a;
      child.origin = tree.nodes_[id].origin;
      child.depth = tree.nodes_[id].depth + 1;
      child.agent_depth = tree.nodes_[id].agent_depth + (parent_active ? 1 : 0);
      int cid = static_cast<int>(tree.nodes_.size());
      tree.nodes_.push_back(std::move(child));

      InfoState cs;
      if (parent_active) {
        cs = ag.act_update(node_state[id], a);
      } else {
        History ch = tree.history_of(cid);
        cs = ag.obs_update(node_state[id], sp.observe(ch));
      }
      node_state.push_back(std::move(cs));
      tree.nodes_[id].children.push_back(cid);
      queue.push_back(cid);
    }
  }

  // Intern states and collect membership.
  for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
    TreeNode& n = tree.nodes_[i];
    n.state = intern(node_state[i], n.active, n);
    tree.states_[n.state].histories.push_back(static_cast<int>(i));
  }

  for (int sid = 0; sid < static_cast<int>(tree.states_.size()); ++sid) {
    StateEntry& e = tree.states_[sid];
    bool all_terminal = true;
    bool any_terminal = false;
    for (int nid : e.histories) {
      if (tree.nodes_[nid].terminal) {
        any_terminal = true;
      } else {
        all_terminal = false;
      }
    }
    if (any_terminal && !all_terminal) {
      throw ValidationError("state '" + e.value + "' mixes terminal and live histories");
    }
    e.terminal = e.active && all_terminal;

    if (e.active && !e.terminal) {
      e.actions = tree.nodes_[e.histories.front()].actions;
      std::vector<Action> canon = sorted_copy(e.actions);
      for (int nid : e.histories) {
        if (sorted_copy(tree.nodes_[nid].actions) != canon) {
          throw ValidationError("legal actions differ inside information state '" +
                                e.value + "'");
        }
      }
      if (ag.state_actions) {
        if (sorted_copy(ag.state_actions(e.value)) != canon) {
          throw ValidationError("agent's action set for state '" + e.value +
                                "' disagrees with the environment");
        }
      }
      tree.decision_states_.push_back(sid);
    } else if (e.terminal) {
      tree.terminal_states_.push_back(sid);
    }
  }

  // Successor states: the information states of the next arrivals below each
  // state. Active states reach them through a daimon reply (grandchildren);
  // passive states directly through the daimon's action (children).
  for (StateEntry& e : tree.states_) {
    std::set<int> kids;
    for (int nid : e.histories) {
      const TreeNode& n = tree.nodes_[nid];
      if (n.terminal) continue;
      if (n.active) {
        for (int mid : n.children) {
          for (int gid : tree.nodes_[mid].children) {
            kids.insert(tree.nodes_[gid].state);
          }
        }
      } else {
        for (int cid : n.children) kids.insert(tree.nodes_[cid].state);
      }
    }
    e.child_states.assign(kids.begin(), kids.end());
  }

  // Previous-decision-point links; uniqueness is the perfect-recall check.
  for (StateEntry& e : tree.states_) {
    if (!e.active) continue;
    bool first = true;
    for (int nid : e.histories) {
      int up = tree.nodes_[nid].parent;
      Action via;
      while (up >= 0 && !tree.nodes_[up].active) {
        via = tree.nodes_[up].incoming;
        up = tree.nodes_[up].parent;
      }
      int ps = up >= 0 ? tree.nodes_[up].state : -1;
      if (first) {
        e.parent_state = ps;
        e.parent_action = via;
        first = false;
      } else if (ag.perfect_recall &&
                 (e.parent_state != ps || e.parent_action != via)) {
        throw ValidationError(
            "agent declared perfect recall but state '" + e.value +
            "' has histories with different predecessor decision points");
      }
    }
  }

  // Weak precedence between states via ancestor sets per node.
  int ns = static_cast<int>(tree.states_.size());
  tree.precedes_.assign(ns, std::vector<bool>(ns, false));
  std::vector<std::vector<int>> node_ancestors(tree.nodes_.size());
  for (std::size_t i = 0; i < tree.nodes_.size(); ++i) {
    const TreeNode& n = tree.nodes_[i];
    if (n.parent >= 0) {
      node_ancestors[i] = node_ancestors[n.parent];
      node_ancestors[i].push_back(tree.nodes_[n.parent].state);
    }
    tree.precedes_[n.state][n.state] = true;
    for (int anc : node_ancestors[i]) tree.precedes_[anc][n.state] = true;
  }

  if (tree.agent_.timed) {
    // A timed agent's states never repeat along a trajectory: any two
    // distinct comparable states must differ in agent depth.
    for (int a = 0; a < ns; ++a) {
      for (int b = 0; b < ns; ++b) {
        if (a != b && tree.precedes_[a][b] && tree.precedes_[b][a]) {
          throw ValidationError("agent declared timed but states '" +
                                tree.states_[a].value + "' and '" +
                                tree.states_[b].value + "' repeat along a path");
        }
      }
    }
  }

  return tree;
}

bool detect_perfect_recall(const TreeIndex& tree) {
  for (const StateEntry& e : tree.states()) {
    if (!e.active) continue;
    bool first = true;
    int ps = -1;
    Action via;
    for (int nid : e.histories) {
      int up = tree.node(nid).parent;
      Action step;
      while (up >= 0 && !tree.node(up).active) {
        step = tree.node(up).incoming;
        up = tree.node(up).parent;
      }
      int cur = up >= 0 ? tree.node(up).state : -1;
      if (first) {
        ps = cur;
        via = step;
        first = false;
      } else if (ps != cur || via != step) {
        return false;
      }
    }
  }
  return true;
}

int TreeIndex::state_id(const InfoState& s) const {
  auto it = state_ids_.find(s);
  return it == state_ids_.end() ? -1 : it->second;
}

int TreeIndex::node_id(const History& h) const {
  if (h.origin < 0 || h.origin >= static_cast<int>(roots_.size())) return -1;
  int id = roots_[h.origin];
  for (const Action& a : h.actions) {
    const TreeNode& n = nodes_[id];
    auto it = std::find(n.actions.begin(), n.actions.end(), a);
    if (it == n.actions.end()) return -1;
    id = n.children[it - n.actions.begin()];
  }
  return id;
}

History TreeIndex::history_of(int node_id) const {
  History h;
  std::vector<Action> rev;
  int id = node_id;
  while (nodes_[id].parent >= 0) {
    rev.push_back(nodes_[id].incoming);
    id = nodes_[id].parent;
  }
  h.origin = nodes_[id].origin;
  h.actions.assign(rev.rbegin(), rev.rend());
  return h;
}

}  // namespace pohp
