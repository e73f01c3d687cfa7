#ifndef POHP_CLI_H_
#define POHP_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pohp/deviations.h"

namespace pohp {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;           // command succeeded
inline constexpr int kExitCheckFailed = 1;  // verification reported failures
inline constexpr int kExitBadConfig = 2;    // invalid flags, config, or game
inline constexpr int kExitResource = 3;     // an enumeration or node budget hit

// Tree sizes are capped by the POHP_NODE_BUDGET environment variable
// (default 200000 nodes); exceeding it exits with kExitResource.
struct ExperimentConfig {
  std::string game = "kuhn";  // bundled id or game file path
  DeviationKind kind = DeviationKind::kCounterfactual;
  long rounds = 0;
  long stride = 1;         // >= 1; one CSV row per stride (plus the last round)
  std::uint64_t seed = 0;  // recorded for provenance; the run itself is exact
  std::string out;         // CSV path; empty writes the CSV to stdout
};

// Self-play (or, on the forgetful gadget, the fixed-uniform-agent experiment)
// with a regret/exploitability curve as CSV. Columns: round, player, state id,
// max cumulative immediate regret, oracle cumulative full regret,
// exploitability of the running average profile.
int cmd_run(const ExperimentConfig& config, std::ostream& diag);

// The full numerical identity battery; one line per check on `diag`, optional
// JSONL report at `out`. Returns kExitOk iff every check passed.
int cmd_verify(double tolerance, std::uint64_t seed, const std::string& out,
               std::ostream& diag);

// Textual summary of a game's views: state counts, histories-per-state
// histogram, horizon, and the pure-strategy count when enumerable.
int cmd_inspect(const std::string& game, std::ostream& out);

// Argument parsing plus dispatch; the binary's main defers here.
int run_cli(int argc, char** argv);

}  // namespace pohp

#endif  // POHP_CLI_H_
