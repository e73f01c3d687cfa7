#ifndef POHP_ADAPTERS_H_
#define POHP_ADAPTERS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pohp/game.h"
#include "pohp/spec.h"
#include "pohp/strategy.h"
#include "pohp/tree.h"

namespace pohp {

// One participant's view of a GameCore. All other participants, chance, and
// survival checks fold into a single daimon whose actions are "blocks":
// maximal runs of non-viewer game moves joined with '.', the noop '#' when
// the viewer moves again immediately, and a trailing '!' when the run ends
// with a failed survival check.
struct GameView {
  int viewer = 0;  // player index; num_players means chance
  PohpSpec spec;
  AgentSpec agent;
};

// Optional overrides for the chance view's state machine: how chance's state
// digests chance's own action, and what the state is before anything is
// observed. Adapters that must expose particular chance states (e.g. Markov
// environment states) install them; the hooks must keep states non-repeating
// along trajectories. Defaults: append, and "^" / the root label.
using ChanceActUpdate = std::function<InfoState(const InfoState&, const Action&)>;

GameView make_view(std::shared_ptr<const GameCore> game, int viewer,
                   const ChanceActUpdate& chance_act = {},
                   const InfoState& chance_initial = InfoState());

// The daimon realizing everyone else's behavior inside `viewer`'s view:
// block probabilities multiply the traversed nodes' survival and action
// probabilities. `profile` holds one policy per player (the viewer's entry is
// ignored); chance plays its fixed distributions.
DaimonPolicy view_daimon(std::shared_ptr<const GameCore> game, int viewer,
                         std::vector<AgentPolicy> profile);

// View history -> underlying game path: drops '#', splits '.'-joined blocks;
// a final '!' (failed survival) is kept as the last token.
std::vector<Action> flatten_view_history(const History& h);

// A finite game bundled with the POHP views of every player and of chance,
// their tree indices, and the machinery to evaluate or sample joint play.
class PohpFormGame {
 public:
  explicit PohpFormGame(GameCore game, ChanceActUpdate chance_act = {},
                        InfoState chance_initial = InfoState());

  const GameCore& game() const { return *game_; }
  const std::shared_ptr<const GameCore>& game_ptr() const { return game_; }
  int num_players() const { return game_->num_players; }
  int chance_viewer() const { return game_->num_players; }

  const GameView& view(int viewer) const { return views_[viewer]; }
  const TreeIndex& tree(int viewer) const { return trees_[viewer]; }

  // One uniform behavioral strategy per player (players only, no chance).
  std::vector<StrategyTable> uniform_profile() const;

  // Daimon table on `viewer`'s tree realizing the constraint that the daimon
  // plays each other participant's strategy at that participant's turns.
  DaimonTable daimon_for(int viewer,
                         const std::vector<StrategyTable>& profile) const;

  // Exact expected return per player under a profile.
  std::vector<double> expected_utilities(
      const std::vector<StrategyTable>& profile) const;

  struct Playthrough {
    std::vector<Action> path;     // game tokens; ends with '!' if survival failed
    bool died = false;
    std::vector<double> returns;  // per player
  };
  Playthrough play_round(const std::vector<StrategyTable>& profile,
                         std::uint64_t seed) const;

 private:
  std::shared_ptr<const GameCore> game_;
  std::vector<GameView> views_;   // players then chance
  std::vector<TreeIndex> trees_;  // aligned with views_
};

}  // namespace pohp

#endif  // POHP_ADAPTERS_H_
