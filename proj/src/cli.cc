#include "pohp/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pohp/adapters.h"
#include "pohp/errors.h"
#include "pohp/games.h"
#include "pohp/learner.h"
#include "pohp/oracle.h"
#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace pohp {
namespace {

constexpr const char* kCsvHeader =
    "round,player,state,max_cum_immediate_regret,cum_full_regret_oracle,"
    "exploitability";

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

DeviationKind parse_kind(const std::string& name) {
  if (name == "external") return DeviationKind::kExternal;
  if (name == "counterfactual") return DeviationKind::kCounterfactual;
  if (name == "swap") return DeviationKind::kSwap;
  throw ValidationError("unknown deviation class: " + name);
}

// Gain of the best enumerated pure policy over the given one; usable without
// perfect recall, where the best-response recursion is not.
double best_pure_gain(const PohpFormGame& form, const StrategyTable& pi) {
  const TreeIndex& tree = form.tree(0);
  double current = brute_force_value(form, 0, {pi});
  PureStrategySet universe = PureStrategySet::enumerate(tree);
  double best = current;
  for (long i = 0; i < universe.size; ++i)
    best = std::max(best, brute_force_value(
                              form, 0, {pure_table(tree, universe.at(i, tree))}));
  return best - current;
}

}  // namespace

int cmd_run(const ExperimentConfig& config, std::ostream& diag) {
  if (config.rounds < 0) throw ValidationError("rounds must be >= 0");
  if (config.stride < 1) throw ValidationError("stride must be >= 1");
  PohpFormGame form = make_game(config.game);

  std::ostringstream csv;
  csv << kCsvHeader << "\n";
  if (config.game == "theorem1_gadget") {
    // The forgetful gadget deliberately lacks perfect recall, so the learner
    // cannot run on it; it hosts the fixed-uniform-agent regret experiment.
    Theorem1Result exp = theorem1_experiment(config.rounds);
    const TreeIndex& tree = form.tree(0);
    int second = tree.state_id("s2");
    double expl = best_pure_gain(form, StrategyTable::uniform(tree));
    for (long t = 0; t < config.rounds; ++t) {
      if ((t + 1) % config.stride != 0 && t + 1 != config.rounds) continue;
      const Theorem1Row& row = exp.rows[t];
      csv << row.round << ",0," << second << ',' << fmt(row.cum_immediate)
          << ',' << fmt(row.cum_full) << ',' << fmt(expl) << "\n";
    }
  } else {
    LearnerConfig lc;
    lc.kind = config.kind;
    lc.rounds = config.rounds;
    lc.stride = config.stride;
    lc.seed = config.seed;
    SelfPlayResult result = run_self_play(form, lc);
    for (const CurveRow& row : result.curve)
      csv << row.round << ',' << row.player << ',' << row.state << ','
          << fmt(row.max_cum_immediate) << ',' << fmt(row.max_cum_full_oracle)
          << ',' << fmt(row.exploitability) << "\n";
  }

  if (config.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw ValidationError("cannot open output file: " + config.out);
    file << csv.str();
    diag << "wrote " << config.out << "\n";
  }
  return kExitOk;
}

int cmd_verify(double tolerance, std::uint64_t seed, const std::string& out,
               std::ostream& diag) {
  if (tolerance < 0) throw ValidationError("tolerance must be >= 0");
  std::vector<OracleReport> reports = run_verification_suite(tolerance, seed);
  bool all_pass = true;
  for (const OracleReport& r : reports) {
    all_pass = all_pass && r.pass;
    diag << (r.pass ? "[PASS] " : "[FAIL] ") << r.check << " on " << r.game
         << ": trials=" << r.trials
         << " max_discrepancy=" << fmt(r.max_discrepancy)
         << " tolerance=" << fmt(r.tolerance) << "\n";
  }
  diag << reports.size() << " checks, "
       << (all_pass ? "all passed" : "FAILURES above") << "\n";
  if (!out.empty()) {
    write_reports_jsonl(reports, out);
    diag << "wrote " << out << "\n";
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_inspect(const std::string& game, std::ostream& out) {
  PohpFormGame form = make_game(game);
  out << "game: " << form.game().name << "\n";
  out << "players: " << form.num_players() << "\n";
  out << "game nodes: " << form.game().nodes.size() << "\n";

  if (form.num_players() >= 2) {
    bool same = true;
    std::size_t shared = form.tree(0).decision_states().size();
    for (int p = 1; p < form.num_players(); ++p)
      same = same && form.tree(p).decision_states().size() == shared;
    if (same)
      out << shared << " active state" << (shared == 1 ? "" : "s")
          << " per player\n";
  }

  for (int p = 0; p < form.num_players(); ++p) {
    const TreeIndex& tree = form.tree(p);
    std::size_t actives = tree.decision_states().size();
    std::size_t total = tree.states().size();
    out << "player " << p << ": ";
    if (actives == 0 && total == 1) {
      out << "1 state (initial only)\n";
      continue;
    }
    out << actives << " active state" << (actives == 1 ? "" : "s");
    try {
      PureStrategySet universe = PureStrategySet::enumerate(tree);
      out << ", " << universe.size << " pure strateg"
          << (universe.size == 1 ? "y" : "ies");
    } catch (const ResourceError&) {
      out << ", pure strategies not enumerated (over budget)";
    }
    out << "\n";
    out << "  states: " << total << " (" << actives << " active, "
        << tree.terminal_states().size() << " terminal), horizon "
        << tree.horizon() << "\n";
    std::map<std::size_t, int> histogram;
    for (const StateEntry& e : tree.states()) ++histogram[e.histories.size()];
    out << "  histories per state:";
    bool first = true;
    for (const auto& [size, count] : histogram) {
      out << (first ? " " : ", ") << size << "x" << count;
      first = false;
    }
    out << "\n";
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"partially observable history process toolkit"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string kind_name = "counterfactual";
  CLI::App* run = app.add_subcommand(
      "run", "self-play experiment; emits the regret/exploitability curve");
  run->add_option("--game", config.game, "bundled id or game file path")
      ->capture_default_str();
  run->add_option("--rounds", config.rounds, "learning rounds")
      ->capture_default_str();
  run->add_option("--deviations", kind_name,
                  "deviation class the learner competes against")
      ->check(CLI::IsMember({"external", "counterfactual", "swap"}))
      ->capture_default_str();
  run->add_option("--seed", config.seed,
                  "recorded for provenance; the run itself is exact")
      ->capture_default_str();
  run->add_option("--stride", config.stride, "rounds between CSV rows")
      ->capture_default_str();
  run->add_option("--out", config.out, "CSV path (default: stdout)");

  double tolerance = 1e-9;
  std::uint64_t verify_seed = 7;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand(
      "verify", "numerical identity battery over the bundled games");
  verify->add_option("--tolerance", tolerance, "bound for exact identities")
      ->capture_default_str();
  verify->add_option("--seed", verify_seed, "seed for the random profiles")
      ->capture_default_str();
  verify->add_option("--out", verify_out, "JSONL report path");

  std::string inspect_game;
  CLI::App* inspect =
      app.add_subcommand("inspect", "textual summary of a game's views");
  inspect->add_option("--game", inspect_game, "bundled id or game file path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    if (run->parsed()) {
      config.kind = parse_kind(kind_name);
      return cmd_run(config, std::cerr);
    }
    if (verify->parsed())
      return cmd_verify(tolerance, verify_seed, verify_out, std::cerr);
    if (inspect->parsed()) return cmd_inspect(inspect_game, std::cout);
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const ContractError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitBadConfig;
}

}  // namespace pohp
