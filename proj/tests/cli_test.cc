#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pohp/cli.h"
#include "pohp/games.h"

namespace {

using namespace pohp;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

int run_args(std::vector<std::string> args) {
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (std::string& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

const char kHeader[] =
    "round,player,state,max_cum_immediate_regret,cum_full_regret_oracle,"
    "exploitability";

TEST_CASE("run writes the pinned csv schema") {
  std::string path = "cli_test_schema.csv";
  ExperimentConfig config;
  config.game = "kuhn";
  config.rounds = 4;
  config.stride = 2;
  config.out = path;
  std::ostringstream diag;
  CHECK(cmd_run(config, diag) == kExitOk);

  std::vector<std::string> lines = lines_of(read_file(path));
  REQUIRE(lines.size() == 5);  // header + 2 logged rounds x 2 players
  CHECK(lines[0] == kHeader);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 6);
    long round = std::stol(fields[0]);
    CHECK((round == 2 || round == 4));
    int player = std::stoi(fields[1]);
    CHECK((player == 0 || player == 1));
    CHECK(std::stod(fields[5]) >= 0.0);
  }
  std::remove(path.c_str());

  // Zero rounds produce the header alone.
  config.rounds = 0;
  config.stride = 1;
  std::ostringstream diag2;
  CHECK(cmd_run(config, diag2) == kExitOk);
  std::vector<std::string> empty = lines_of(read_file(path));
  REQUIRE(empty.size() == 1);
  CHECK(empty[0] == kHeader);
  std::remove(path.c_str());
}

TEST_CASE("the gadget run reproduces the linear regret curve") {
  std::string path = "cli_test_gadget.csv";
  ExperimentConfig config;
  config.game = "theorem1_gadget";
  config.rounds = 5;
  config.out = path;
  std::ostringstream diag;
  CHECK(cmd_run(config, diag) == kExitOk);

  std::vector<std::string> lines = lines_of(read_file(path));
  REQUIRE(lines.size() == 6);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 6);
    double round = std::stod(fields[0]);
    CHECK(round == doctest::Approx(static_cast<double>(i)));
    CHECK(std::stod(fields[3]) == doctest::Approx(round));  // cum immediate
    CHECK(std::stod(fields[4]) == doctest::Approx(round));  // cum full
    CHECK(std::stod(fields[5]) == doctest::Approx(1.0));    // best pure gain
  }
  std::remove(path.c_str());
}

TEST_CASE("same configuration reproduces byte identical output") {
  ExperimentConfig config;
  config.game = "kuhn";
  config.rounds = 30;
  config.stride = 10;
  config.seed = 9;

  config.out = "cli_test_rep_a.csv";
  std::ostringstream diag_a;
  CHECK(cmd_run(config, diag_a) == kExitOk);
  config.out = "cli_test_rep_b.csv";
  std::ostringstream diag_b;
  CHECK(cmd_run(config, diag_b) == kExitOk);

  std::string a = read_file("cli_test_rep_a.csv");
  std::string b = read_file("cli_test_rep_b.csv");
  CHECK(!a.empty());
  CHECK(a == b);
  std::remove("cli_test_rep_a.csv");
  std::remove("cli_test_rep_b.csv");
}

TEST_CASE("inspect prints the pinned phrasings") {
  std::ostringstream gadget;
  CHECK(cmd_inspect("theorem1_gadget", gadget) == kExitOk);
  CHECK(gadget.str().find("2 active states, 4 pure strategies") !=
        std::string::npos);

  std::ostringstream pennies;
  CHECK(cmd_inspect("matching_pennies", pennies) == kExitOk);
  CHECK(pennies.str().find("1 active state per player") != std::string::npos);

  std::ostringstream empty;
  CHECK(cmd_inspect("empty", empty) == kExitOk);
  CHECK(empty.str().find("1 state (initial only)") != std::string::npos);

  std::ostringstream kuhn;
  CHECK(cmd_inspect("kuhn", kuhn) == kExitOk);
  CHECK(kuhn.str().find("64 pure strategies") != std::string::npos);
  CHECK(kuhn.str().find("6 active states per player") != std::string::npos);
}

TEST_CASE("verify reports every check and passes") {
  std::ostringstream diag;
  CHECK(cmd_verify(1e-9, 7, "", diag) == kExitOk);
  std::string text = diag.str();
  CHECK(text.find("[FAIL]") == std::string::npos);
  CHECK(text.find("all passed") != std::string::npos);

  int passes = 0;
  for (const std::string& line : lines_of(text))
    if (line.rfind("[PASS]", 0) == 0) ++passes;
  CHECK(passes >= 25);
}

TEST_CASE("argument contract maps errors to exit codes") {
  // Missing subcommand.
  CHECK(run_args({"pohp"}) == kExitBadConfig);
  // Unknown game id.
  CHECK(run_args({"pohp", "run", "--game", "not_a_game", "--rounds", "1",
                  "--out", "cli_test_unused.csv"}) == kExitBadConfig);
  // Negative round count.
  CHECK(run_args({"pohp", "run", "--game", "kuhn", "--rounds", "-1", "--out",
                  "cli_test_unused.csv"}) == kExitBadConfig);
  // Deviation kind outside the accepted set.
  CHECK(run_args({"pohp", "run", "--game", "kuhn", "--rounds", "1",
                  "--deviations", "bogus", "--out",
                  "cli_test_unused.csv"}) == kExitBadConfig);
  // A healthy invocation.
  CHECK(run_args({"pohp", "inspect", "--game", "theorem1_gadget"}) == kExitOk);
  std::remove("cli_test_unused.csv");
}

TEST_CASE("game files load by path") {
  std::string path = "cli_test_mini.game";
  {
    std::ofstream out(path);
    out << "game mini\n"
        << "players 1\n"
        << "decision . player=1 infoset=root\n"
        << "terminal a 1\n"
        << "terminal b 0\n";
  }
  PohpFormGame form = make_game(path);
  CHECK(form.game().name == "mini");
  CHECK(form.tree(0).decision_states().size() == 1);

  std::ostringstream out;
  CHECK(cmd_inspect(path, out) == kExitOk);
  CHECK(out.str().find("game: mini") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("node budgets become resource errors") {
  REQUIRE(setenv("POHP_NODE_BUDGET", "3", 1) == 0);
  int code = run_args({"pohp", "inspect", "--game", "kuhn"});
  REQUIRE(unsetenv("POHP_NODE_BUDGET") == 0);
  CHECK(code == kExitResource);
}

}  // namespace
