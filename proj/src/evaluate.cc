#include "pohp/evaluate.h"

#include <cstdlib>
#include <random>
#include <string>

#include "pohp/errors.h"
#include "pohp/tree.h"

namespace pohp {
namespace {

long resolve_budget(long requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("POHP_NODE_BUDGET")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  return 200000;
}

int sample_index(const std::vector<double>& w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(w.size()) - 1;  // guard against rounding
}

void check_distribution(const std::vector<double>& w, std::size_t n,
                        const char* who) {
  if (w.size() != n)
    throw ValidationError(std::string(who) + " returned " +
                          std::to_string(w.size()) + " weights for " +
                          std::to_string(n) + " actions");
  double sum = 0.0;
  for (double p : w) {
    if (!(p >= -1e-12))
      throw ValidationError(std::string(who) + " returned a negative weight");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError(std::string(who) + " weights sum to " +
                          std::to_string(sum));
}

}  // namespace

Episode sample_episode(const PohpSpec& spec, const AgentSpec& agent,
                       const AgentPolicy& pi, const DaimonPolicy& sigma,
                       std::uint64_t seed, const EvaluateOptions& opts) {
  std::mt19937_64 rng(seed);
  Episode ep;

  History h;
  if (spec.initial_histories.size() == 1) {
    h = History{0, spec.initial_histories[0].tokens};
  } else {
    std::vector<double> w;
    w.reserve(spec.initial_histories.size());
    for (const auto& init : spec.initial_histories) w.push_back(init.weight);
    int k = sample_index(w, rng);
    h = History{k, spec.initial_histories[k].tokens};
  }

  InfoState s = agent.initial_state;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long steps = 0;
  for (;;) {
    if (++steps > opts.step_cap) {
      ep.final_history = h;
      ep.terminated = false;
      throw ResourceError("episode exceeded step cap of " +
                          std::to_string(opts.step_cap));
    }
    if (spec.is_active(h)) {
      Observation o = spec.observe(h);
      double r = agent.reward(o);
      ep.observations.push_back(o);
      ep.rewards.push_back(r);
      ep.ret += r;
      double gamma = spec.continue_prob(h);
      if (gamma <= 0.0 || unif(rng) >= gamma) break;  // episode ends here
      std::vector<Action> acts = spec.legal_actions(h);
      std::vector<double> w = pi(s, acts);
      check_distribution(w, acts.size(), "agent policy");
      const Action& a = acts[sample_index(w, rng)];
      s = agent.act_update(s, a);
      h = h.child(a);
    } else {
      std::vector<Action> acts = spec.legal_actions(h);
      std::vector<double> w = sigma(h, acts);
      check_distribution(w, acts.size(), "daimon policy");
      const Action& a = acts[sample_index(w, rng)];
      h = h.child(a);
      s = agent.obs_update(s, spec.observe(h));
    }
  }
  ep.final_history = h;
  return ep;
}

namespace {

// Arrival-weighted recursion: the return collected at and below h, where
// agent-turn arrivals pay their observation reward before the continue check.
double arrival_value(const PohpSpec& spec, const AgentSpec& agent,
                     const AgentPolicy& pi, const DaimonPolicy& sigma,
                     const History& h, const InfoState& s, long budget,
                     long* visited) {
  if (++*visited > budget)
    throw ResourceError("expected_return exceeded node budget of " +
                        std::to_string(budget));
  if (spec.is_active(h)) {
    double value = agent.reward(spec.observe(h));
    double gamma = spec.continue_prob(h);
    if (gamma <= 0.0) return value;
    std::vector<Action> acts = spec.legal_actions(h);
    std::vector<double> w = pi(s, acts);
    check_distribution(w, acts.size(), "agent policy");
    double cont = 0.0;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      if (w[i] <= 0.0) continue;
      cont += w[i] * arrival_value(spec, agent, pi, sigma, h.child(acts[i]),
                                   agent.act_update(s, acts[i]), budget,
                                   visited);
    }
    return value + gamma * cont;
  }
  std::vector<Action> acts = spec.legal_actions(h);
  std::vector<double> w = sigma(h, acts);
  check_distribution(w, acts.size(), "daimon policy");
  double value = 0.0;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (w[i] <= 0.0) continue;
    History child = h.child(acts[i]);
    value += w[i] * arrival_value(spec, agent, pi, sigma, child,
                                  agent.obs_update(s, spec.observe(child)),
                                  budget, visited);
  }
  return value;
}

}  // namespace

double expected_return(const PohpSpec& spec, const AgentSpec& agent,
                       const AgentPolicy& pi, const DaimonPolicy& sigma,
                       const EvaluateOptions& opts) {
  long budget = resolve_budget(opts.node_budget);
  long visited = 0;
  double value = 0.0;
  for (std::size_t k = 0; k < spec.initial_histories.size(); ++k) {
    const auto& init = spec.initial_histories[k];
    if (init.weight <= 0.0) continue;
    History h{static_cast<int>(k), init.tokens};
    value += init.weight * arrival_value(spec, agent, pi, sigma, h,
                                         agent.initial_state, budget, &visited);
  }
  return value;
}

double expected_return_from(const PohpSpec& spec, const AgentSpec& agent,
                            const AgentPolicy& pi, const DaimonPolicy& sigma,
                            const History& from, const EvaluateOptions& opts) {
  long budget = resolve_budget(opts.node_budget);
  long visited = 0;
  InfoState s = unified_update(spec, agent, from);
  return arrival_value(spec, agent, pi, sigma, from, s, budget, &visited);
}

}  // namespace pohp
