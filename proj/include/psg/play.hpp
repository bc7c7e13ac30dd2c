#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "psg/game.hpp"
#include "psg/strategy.hpp"

namespace psg {

struct JointState {
  std::size_t x = 0;
  std::size_t y = 0;
};

/// Expected stage payoffs E[u_1], ..., E[u_N] from `start`, computed by exact
/// propagation of the joint chain augmented with both bundles' phases.
std::vector<double> expected_stage_payoffs(const ProductGame& game, const StrategyBundle& s1,
                                           const StrategyBundle& s2, std::size_t horizon, JointState start);

/// Cesaro mean (1/N) sum_n E[u_n]. Deterministic; no sampling.
double exact_n_stage_payoff(const ProductGame& game, const StrategyBundle& s1, const StrategyBundle& s2,
                            std::size_t horizon, JointState start);

struct PlayStep {
  std::size_t x, y, a, b;
  double payoff;
};

struct Trajectory {
  std::vector<PlayStep> steps;
  double average_payoff = 0.0;
};

/// Samples one play of `horizon` stages. Identical seeds give identical plays.
Trajectory simulate_play(const ProductGame& game, const StrategyBundle& s1, const StrategyBundle& s2,
                         std::size_t horizon, JointState start, std::uint64_t seed);

}  // namespace psg
