#ifndef POHP_TYPES_H_
#define POHP_TYPES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace pohp {

// Actions, observations and information-state values are opaque tokens. The
// library only compares, orders and hashes them; their content is owned by
// whoever built the process.
using Action = std::string;
using Observation = std::string;
using InfoState = std::string;

// A history is a finite action string grown from one of the process's initial
// histories. `origin` indexes into the initial-history set; `actions` are the
// tokens appended since. Prefix ordering and turn parity are defined on the
// concatenation of the origin's tokens and `actions`.
struct History {
  int origin = 0;
  std::vector<Action> actions;

  bool operator==(const History& other) const {
    return origin == other.origin && actions == other.actions;
  }

  History child(const Action& a) const {
    History h = *this;
    h.actions.push_back(a);
    return h;
  }

  // Prefix of the appended part with `n` tokens (origin unchanged).
  History prefix(std::size_t n) const {
    History h;
    h.origin = origin;
    h.actions.assign(actions.begin(), actions.begin() + n);
    return h;
  }
};

// True iff `a` is a (non-strict) prefix of `b`.
inline bool is_prefix(const History& a, const History& b) {
  if (a.origin != b.origin || a.actions.size() > b.actions.size()) return false;
  for (std::size_t i = 0; i < a.actions.size(); ++i) {
    if (a.actions[i] != b.actions[i]) return false;
  }
  return true;
}

inline std::string to_string(const History& h) {
  std::string s = "@" + std::to_string(h.origin);
  for (const Action& a : h.actions) {
    s += ' ';
    s += a;
  }
  return s;
}

}  // namespace pohp

#endif  // POHP_TYPES_H_
