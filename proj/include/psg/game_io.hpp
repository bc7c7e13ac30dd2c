#pragma once

// JSON game files and CSV helpers.
//
//   {
//     "x_states": ["x1", "x2"],
//     "y_states": ["y1"],
//     "a_actions": ["stay", {"label": "move", "params": [0.5]}],
//     "b_actions": ["idle"],
//     "p": [["x1", "stay", "x1", 1.0], ...],      state, action, next, prob
//     "q": [["y1", "idle", "y1", 1.0]],
//     "u": {"default": 0.0, "entries": [["x2", "y1", "move", "idle", 1.0]]},
//     "a_allowed": {"x1": ["stay"]}                optional, likewise b_allowed
//   }
//
// States and actions may be given by label or by zero-based index.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "psg/game.hpp"
#include "psg/strategy.hpp"
#include "psg/value_iteration.hpp"

namespace psg {

/// The document parsed but the game violates an invariant.
class InvalidGameError : public std::runtime_error {
 public:
  explicit InvalidGameError(ValidationReport report)
      : std::runtime_error("invalid game:\n" + report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Throws ParseError (line or field path) or InvalidGameError.
ProductGame parse_game(const std::string& text);
ProductGame load_game(const std::string& path);

/// Sparse JSON form accepted by parse_game. Zero probabilities are omitted and
/// payoff entries equal to the most common value become the default.
std::string save_game(const ProductGame& game);

/// 17 significant digits, so values round-trip exactly.
std::string format_number(double v);

/// x,y,value rows.
void write_value_csv(std::ostream& out, const ProductGame& game, const ValueTable& v);
/// phase,x,y,action,weight rows for the positive weights of a bundle.
void write_strategy_csv(std::ostream& out, const ProductGame& game, const StrategyBundle& bundle, Player player);

}  // namespace psg
