#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "psg/game.hpp"

namespace psg {

enum class StrategyKind { stationary, markov, periodic, controller };

std::string to_string(StrategyKind kind);

/// A strategy that depends on the current joint state and a finite internal
/// phase. Every supported kind is a finite-state controller whose phase moves
/// deterministically with the observed joint states:
///   stationary  one phase;
///   markov      phase = stage - 1, held at the last table after it;
///   periodic    phase = (stage - 1) mod N;
///   controller  explicit next-phase table and start phase per joint state.
class StrategyBundle {
 public:
  StrategyBundle() = default;

  static StrategyBundle stationary(std::vector<MixedAction> table);
  static StrategyBundle markov(std::vector<std::vector<MixedAction>> stage_tables);
  static StrategyBundle periodic(std::vector<std::vector<MixedAction>> phase_tables);
  /// next_phase is indexed [(phase * S + s) * S + s_next] with S joint states.
  static StrategyBundle controller(std::vector<std::vector<MixedAction>> phase_tables,
                                   std::vector<std::uint32_t> initial_phase, std::vector<std::uint32_t> next_phase);

  StrategyKind kind() const { return kind_; }
  std::size_t phase_count() const { return tables_.size(); }
  std::size_t state_count() const { return tables_.empty() ? 0 : tables_.front().size(); }
  /// Period for the periodic kind, table count for markov, phase count otherwise.
  std::size_t period() const { return tables_.size(); }

  std::size_t initial_phase(std::size_t s) const;
  std::size_t advance(std::size_t phase, std::size_t s, std::size_t s_next) const;
  const MixedAction& action(std::size_t phase, std::size_t s) const { return tables_[phase][s]; }
  const std::vector<std::vector<MixedAction>>& tables() const { return tables_; }
  /// Controller start phases and transition table (empty for other kinds).
  const std::vector<std::uint32_t>& initial_phases() const { return initial_; }
  const std::vector<std::uint32_t>& next_phases() const { return next_; }
  /// Same kind and phase dynamics, different action tables (same phase count).
  StrategyBundle with_tables(std::vector<std::vector<MixedAction>> tables) const;

 private:
  StrategyKind kind_ = StrategyKind::stationary;
  std::vector<std::vector<MixedAction>> tables_;
  std::vector<std::uint32_t> initial_;
  std::vector<std::uint32_t> next_;
};

/// Checks shapes, weights, admissibility and controller phase references.
/// Returns an empty string when the bundle is usable by `player` in `game`.
std::string check_bundle(const ProductGame& game, const StrategyBundle& bundle, Player player);

}  // namespace psg
