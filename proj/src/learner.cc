#include "pohp/learner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/oracle.h"
#include "pohp/values.h"

namespace pohp {
namespace {

std::vector<double> positive_part_distribution(const std::vector<double>& row) {
  std::vector<double> out(row.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    out[i] = std::max(0.0, row[i]);
    total += out[i];
  }
  if (total > 0.0) {
    for (double& w : out) w /= total;
  } else if (!out.empty()) {
    out.assign(row.size(), 1.0 / static_cast<double>(row.size()));
  }
  return out;
}

// Stationary distribution of a row-stochastic matrix: Gauss-Jordan on
// (M^T - I) with the last equation replaced by the mass constraint; damped
// power iteration when elimination degenerates.
std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& M) {
  const std::size_t n = M.size();
  if (n == 0) return {};
  std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t r = 0; r + 1 < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      A[r][c] = M[c][r] - (r == c ? 1.0 : 0.0);
  for (std::size_t c = 0; c < n; ++c) A[n - 1][c] = 1.0;
  A[n - 1][n] = 1.0;

  bool ok = true;
  for (std::size_t col = 0; col < n && ok; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
    if (std::abs(A[pivot][col]) < 1e-12) {
      ok = false;
      break;
    }
    std::swap(A[col], A[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
    }
  }
  if (ok) {
    std::vector<double> mu(n, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      mu[r] = std::max(0.0, A[r][n] / A[r][r]);
      total += mu[r];
    }
    if (total > 0.0) {
      for (double& w : mu) w /= total;
      return mu;
    }
  }
  std::vector<double> mu(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> next(n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) next[y] += mu[x] * M[x][y];
    double total = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      next[y] = 0.5 * mu[y] + 0.5 * next[y];
      total += next[y];
    }
    double delta = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      next[y] /= total;
      delta = std::max(delta, std::abs(next[y] - mu[y]));
    }
    mu = std::move(next);
    if (delta < 1e-14) break;
  }
  return mu;
}

// Cache key under which two deviations produce identical transformed play:
// the forced-action map when pointwise, the pure-index table plus truncations
// otherwise.
std::string deviation_signature(const TreeIndex& tree, const Deviation& dev) {
  ForcedRegion fr = forced_region(tree, dev);
  std::ostringstream key;
  if (fr.representable) {
    key << 'f';
    for (const auto& [s, a] : fr.forced) key << ':' << s << ',' << a;
  } else {
    key << 't';
    for (long v : dev.table) key << ':' << v;
    for (const auto& [s, m] : dev.truncations)
      key << '|' << s << ',' << static_cast<int>(m);
  }
  return key.str();
}

double max_or_zero(const std::vector<double>& xs) {
  double best = 0.0;
  bool first = true;
  for (double x : xs) {
    if (first || x > best) best = x;
    first = false;
  }
  return xs.empty() ? 0.0 : best;
}

}  // namespace

RegretLedger make_ledger(const TreeIndex& tree, DeviationKind kind) {
  if (kind != DeviationKind::kExternal &&
      kind != DeviationKind::kCounterfactual && kind != DeviationKind::kSwap)
    throw ContractError(
        "learning is defined for external, counterfactual and swap deviations");
  RegretLedger ledger;
  ledger.kind = kind;
  ledger.regret.resize(tree.states().size());
  ledger.strategy_mass.resize(tree.states().size());
  for (int s : tree.decision_states()) {
    ledger.regret[s].assign(tree.state(s).actions.size(), 0.0);
    ledger.strategy_mass[s].assign(tree.state(s).actions.size(), 0.0);
  }
  if (kind == DeviationKind::kSwap) {
    const std::vector<int>& decisions = tree.decision_states();
    if (decisions.size() != 1)
      throw ContractError(
          "swap learning needs exactly one decision state, this view has " +
          std::to_string(decisions.size()));
    ledger.swap_state = decisions[0];
    std::size_t n = tree.state(decisions[0]).actions.size();
    ledger.swap_regret.assign(n, std::vector<double>(n, 0.0));
  }
  return ledger;
}

StrategyTable current_strategy(const TreeIndex& tree,
                               const RegretLedger& ledger) {
  StrategyTable out = StrategyTable::uniform(tree);
  if (ledger.kind == DeviationKind::kSwap) {
    const std::size_t n = ledger.swap_regret.size();
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
      double total = 0.0;
      for (std::size_t y = 0; y < n; ++y)
        total += std::max(0.0, ledger.swap_regret[x][y]);
      if (total > 0.0) {
        for (std::size_t y = 0; y < n; ++y)
          M[x][y] = std::max(0.0, ledger.swap_regret[x][y]) / total;
      } else {
        M[x][x] = 1.0;  // no positive regret against x: keep playing x
      }
    }
    out.rows[ledger.swap_state] = stationary_distribution(M);
    return out;
  }
  for (int s : tree.decision_states())
    out.rows[s] = positive_part_distribution(ledger.regret[s]);
  return out;
}

void observe_round(const TreeIndex& tree, RegretLedger& ledger,
                   const StrategyTable& pi, const DaimonTable& sigma) {
  if (!tree.agent().perfect_recall)
    throw ContractError("regret updates need a perfect-recall view");
  Evaluation ev = evaluate_strategies(tree, pi, sigma);
  for (int s : tree.decision_states()) {
    const StateEntry& entry = tree.state(s);
    double agent_reach =
        entry.histories.empty() ? 0.0 : ev.reach.agent[entry.histories.front()];
    for (std::size_t a = 0; a < ledger.regret[s].size(); ++a) {
      ledger.regret[s][a] += ev.action_cf[s][a] - ev.state_cf[s];
      ledger.strategy_mass[s][a] += agent_reach * pi.rows[s][a];
    }
  }
  if (ledger.kind == DeviationKind::kSwap) {
    int s = ledger.swap_state;
    const std::size_t n = ledger.swap_regret.size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        ledger.swap_regret[x][y] +=
            pi.rows[s][x] * (ev.action_cf[s][y] - ev.action_cf[s][x]);
  }
  ++ledger.rounds;
}

StrategyTable average_strategy(const TreeIndex& tree,
                               const RegretLedger& ledger) {
  StrategyTable out = StrategyTable::uniform(tree);
  for (int s : tree.decision_states()) {
    double total = 0.0;
    for (double m : ledger.strategy_mass[s]) total += m;
    if (total > 0.0)
      for (std::size_t a = 0; a < ledger.strategy_mass[s].size(); ++a)
        out.rows[s][a] = ledger.strategy_mass[s][a] / total;
  }
  return out;
}

double max_cumulative_immediate(const RegretLedger& ledger,
                                int* argmax_state) {
  double best = 0.0;
  int arg = ledger.kind == DeviationKind::kSwap ? ledger.swap_state : -1;
  if (ledger.kind == DeviationKind::kSwap) {
    for (const std::vector<double>& row : ledger.swap_regret)
      for (double r : row) best = std::max(best, r);
  } else {
    for (std::size_t s = 0; s < ledger.regret.size(); ++s) {
      if (ledger.regret[s].empty()) continue;
      if (arg < 0) arg = static_cast<int>(s);
      for (double r : ledger.regret[s]) {
        if (r > best) {
          best = r;
          arg = static_cast<int>(s);
        }
      }
    }
    best = std::max(0.0, best);
  }
  if (argmax_state) *argmax_state = arg;
  return best;
}

SelfPlayResult run_self_play(const PohpFormGame& form,
                             const LearnerConfig& config) {
  const int players = form.num_players();
  SelfPlayResult result;
  result.tracked.resize(players);
  result.cum_full.resize(players);
  for (int p = 0; p < players; ++p) {
    result.ledgers.push_back(make_ledger(form.tree(p), config.kind));
    if (config.oracle_curves) {
      DeviationSet devs =
          deviation_set(form.tree(p), config.kind, config.budget);
      for (const Deviation& dev : devs.members) {
        switch (config.kind) {
          case DeviationKind::kCounterfactual:
            result.tracked[p].push_back(TrackedDeviation{dev, dev.trigger});
            break;
          case DeviationKind::kSwap:
            result.tracked[p].push_back(
                TrackedDeviation{dev, result.ledgers[p].swap_state});
            break;
          default:  // external: audited at every decision state
            for (int s : form.tree(p).decision_states())
              result.tracked[p].push_back(TrackedDeviation{dev, s});
        }
      }
    }
    result.cum_full[p].assign(result.tracked[p].size(), 0.0);
  }

  for (long t = 0; t < config.rounds; ++t) {
    std::vector<StrategyTable> profile;
    for (int p = 0; p < players; ++p)
      profile.push_back(current_strategy(form.tree(p), result.ledgers[p]));
    std::vector<DaimonTable> sigmas;
    for (int p = 0; p < players; ++p)
      sigmas.push_back(form.daimon_for(p, profile));
    for (int p = 0; p < players; ++p)
      observe_round(form.tree(p), result.ledgers[p], profile[p], sigmas[p]);

    if (config.oracle_curves) {
      for (int p = 0; p < players; ++p) {
        const TreeIndex& tree = form.tree(p);
        // Distinct transformed strategies are far fewer than tracked pairs;
        // sweep each one once per round.
        std::map<std::string, std::vector<double>> cache;
        auto sweep = [&](const Deviation& dev) -> const std::vector<double>& {
          std::string key = deviation_signature(tree, dev);
          auto it = cache.find(key);
          if (it == cache.end())
            it = cache
                     .emplace(key, oracle_deviation_value(tree, profile[p],
                                                          sigmas[p], dev))
                     .first;
          return it->second;
        };
        for (std::size_t i = 0; i < result.tracked[p].size(); ++i) {
          const TrackedDeviation& td = result.tracked[p][i];
          const std::vector<double>& full = sweep(td.dev);
          const std::vector<double>& before =
              sweep(truncate(td.dev, td.state, TruncationMode::kBefore));
          result.cum_full[p][i] += full[td.state] - before[td.state];
        }
      }
    }

    bool last = (t + 1 == config.rounds);
    if (last || (config.stride > 0 && (t + 1) % config.stride == 0)) {
      std::vector<StrategyTable> avg;
      for (int p = 0; p < players; ++p)
        avg.push_back(average_strategy(form.tree(p), result.ledgers[p]));
      double expl = exploitability(form, avg);
      TrackedLog log;
      log.round = t + 1;
      log.cum_full = result.cum_full;
      log.state_cum_imm.resize(players);
      for (int p = 0; p < players; ++p) {
        const TreeIndex& tree = form.tree(p);
        const RegretLedger& ledger = result.ledgers[p];
        std::vector<double>& per_state = log.state_cum_imm[p];
        per_state.assign(tree.states().size(), 0.0);
        if (ledger.kind == DeviationKind::kSwap) {
          double m = 0.0;
          for (const std::vector<double>& row : ledger.swap_regret)
            for (double r : row) m = std::max(m, r);
          per_state[ledger.swap_state] = m;
        } else {
          for (int s : tree.decision_states())
            for (double r : ledger.regret[s])
              per_state[s] = std::max(per_state[s], r);
        }
        int arg = -1;
        double imm = max_cumulative_immediate(ledger, &arg);
        result.curve.push_back(CurveRow{t + 1, p, arg, imm,
                                        max_or_zero(result.cum_full[p]),
                                        expl});
      }
      result.tracked_log.push_back(std::move(log));
    }
  }

  for (int p = 0; p < players; ++p) {
    result.average.push_back(average_strategy(form.tree(p), result.ledgers[p]));
    result.final_strategy.push_back(
        current_strategy(form.tree(p), result.ledgers[p]));
  }
  return result;
}

Theorem1Result theorem1_experiment(long rounds) {
  PohpFormGame form = make_game("theorem1_gadget");
  const TreeIndex& tree = form.tree(0);
  StrategyTable pi = StrategyTable::uniform(tree);
  DaimonTable sigma = form.daimon_for(0, {pi});
  DeviationSet devs = deviation_set(tree, DeviationKind::kExternal);

  std::vector<std::pair<int, int>> pairs;  // (member index, state)
  for (std::size_t d = 0; d < devs.members.size(); ++d)
    for (int s : tree.decision_states())
      pairs.emplace_back(static_cast<int>(d), s);

  Theorem1Result result;
  std::vector<double> cum_imm(pairs.size(), 0.0);
  std::vector<double> cum_full(pairs.size(), 0.0);
  for (long t = 0; t < rounds; ++t) {
    // The agent is fixed, so every round looks the same; each is still
    // recomputed from the strategy pair rather than replayed from round one.
    std::map<std::string, std::vector<double>> cache;
    auto sweep = [&](const Deviation& dev) -> const std::vector<double>& {
      std::string key = deviation_signature(tree, dev);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, oracle_deviation_value(tree, pi, sigma, dev))
                 .first;
      return it->second;
    };
    double round_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const Deviation& dev = devs.members[pairs[i].first];
      int s = pairs[i].second;
      double imm = immediate_regret(tree, pi, sigma, dev, s);
      cum_imm[i] += imm;
      round_max = std::max(round_max, imm);
      const std::vector<double>& full = sweep(dev);
      const std::vector<double>& before =
          sweep(truncate(dev, s, TruncationMode::kBefore));
      cum_full[i] += full[s] - before[s];
    }
    Theorem1Row row;
    row.round = t + 1;
    row.max_immediate = pairs.empty() ? 0.0 : round_max;
    if (!pairs.empty()) {
      row.cum_immediate = *std::max_element(cum_imm.begin(), cum_imm.end());
      row.cum_full = *std::max_element(cum_full.begin(), cum_full.end());
    }
    result.rows.push_back(row);
  }
  result.cumulative = result.rows.empty() ? 0.0 : result.rows.back().cum_immediate;
  return result;
}

std::vector<double> gadget_pure_policy_max_regret() {
  PohpFormGame form = make_game("theorem1_gadget");
  const TreeIndex& tree = form.tree(0);
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  DeviationSet devs = deviation_set(tree, DeviationKind::kExternal);
  std::vector<double> out;
  for (long i = 0; i < universe.size; ++i) {
    StrategyTable pi = pure_table(tree, universe.at(i, tree));
    DaimonTable sigma = form.daimon_for(0, {pi});
    double best = -std::numeric_limits<double>::infinity();
    for (const Deviation& dev : devs.members)
      for (int s : tree.decision_states())
        best = std::max(best, immediate_regret(tree, pi, sigma, dev, s));
    out.push_back(best);
  }
  return out;
}

}  // namespace pohp
