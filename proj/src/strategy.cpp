#include "psg/strategy.hpp"

#include <algorithm>

#include "psg/errors.hpp"

namespace psg {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::stationary:
      return "stationary";
    case StrategyKind::markov:
      return "markov";
    case StrategyKind::periodic:
      return "periodic";
    case StrategyKind::controller:
      return "controller";
  }
  return "unknown";
}

namespace {

void require_tables(const std::vector<std::vector<MixedAction>>& tables) {
  if (tables.empty()) throw PreconditionError("strategy needs at least one table");
  const std::size_t states = tables.front().size();
  for (const auto& t : tables)
    if (t.size() != states) throw PreconditionError("strategy tables disagree on state count");
}

}  // namespace

StrategyBundle StrategyBundle::stationary(std::vector<MixedAction> table) {
  StrategyBundle s;
  s.kind_ = StrategyKind::stationary;
  s.tables_.push_back(std::move(table));
  require_tables(s.tables_);
  return s;
}

StrategyBundle StrategyBundle::markov(std::vector<std::vector<MixedAction>> stage_tables) {
  StrategyBundle s;
  s.kind_ = StrategyKind::markov;
  s.tables_ = std::move(stage_tables);
  require_tables(s.tables_);
  return s;
}

StrategyBundle StrategyBundle::periodic(std::vector<std::vector<MixedAction>> phase_tables) {
  StrategyBundle s;
  s.kind_ = StrategyKind::periodic;
  s.tables_ = std::move(phase_tables);
  require_tables(s.tables_);
  return s;
}

StrategyBundle StrategyBundle::controller(std::vector<std::vector<MixedAction>> phase_tables,
                                          std::vector<std::uint32_t> initial_phase,
                                          std::vector<std::uint32_t> next_phase) {
  StrategyBundle s;
  s.kind_ = StrategyKind::controller;
  s.tables_ = std::move(phase_tables);
  require_tables(s.tables_);
  const std::size_t states = s.state_count();
  const std::size_t phases = s.phase_count();
  if (initial_phase.size() != states) throw PreconditionError("controller initial phase table has wrong size");
  if (next_phase.size() != phases * states * states)
    throw PreconditionError("controller transition table has wrong size");
  auto out_of_range = [phases](std::uint32_t p) { return p >= phases; };
  if (std::any_of(initial_phase.begin(), initial_phase.end(), out_of_range) ||
      std::any_of(next_phase.begin(), next_phase.end(), out_of_range))
    throw PreconditionError("controller refers to a phase that does not exist");
  s.initial_ = std::move(initial_phase);
  s.next_ = std::move(next_phase);
  return s;
}

std::size_t StrategyBundle::initial_phase(std::size_t s) const {
  return kind_ == StrategyKind::controller ? initial_[s] : 0;
}

std::size_t StrategyBundle::advance(std::size_t phase, std::size_t s, std::size_t s_next) const {
  switch (kind_) {
    case StrategyKind::stationary:
      return 0;
    case StrategyKind::markov:
      return std::min(phase + 1, tables_.size() - 1);
    case StrategyKind::periodic:
      return (phase + 1) % tables_.size();
    case StrategyKind::controller: {
      const std::size_t states = state_count();
      return next_[(phase * states + s) * states + s_next];
    }
  }
  return 0;
}

StrategyBundle StrategyBundle::with_tables(std::vector<std::vector<MixedAction>> tables) const {
  if (tables.size() != tables_.size()) throw PreconditionError("replacement tables have the wrong phase count");
  StrategyBundle s = *this;
  s.tables_ = std::move(tables);
  require_tables(s.tables_);
  return s;
}

std::string check_bundle(const ProductGame& game, const StrategyBundle& bundle, Player player) {
  if (bundle.phase_count() == 0) return "empty strategy";
  if (bundle.state_count() != game.joint_count()) return "strategy state count does not match the game";
  const std::size_t n_actions = player == Player::one ? game.na() : game.nb();
  for (std::size_t ph = 0; ph < bundle.phase_count(); ++ph) {
    for (std::size_t s = 0; s < game.joint_count(); ++s) {
      const MixedAction& m = bundle.action(ph, s);
      if (m.size() != n_actions) return "mixed action has wrong length at phase " + std::to_string(ph);
      if (!m.valid(1e-9)) return "mixed action is not a probability vector at phase " + std::to_string(ph);
      for (std::size_t i = 0; i < n_actions; ++i) {
        if (m[i] == 0.0) continue;
        const bool ok = player == Player::one ? game.a_allowed(game.joint_x(s), i)
                                              : game.b_allowed(game.joint_y(s), i);
        if (!ok) return "weight on an inadmissible action at phase " + std::to_string(ph);
      }
    }
  }
  return {};
}

}  // namespace psg
