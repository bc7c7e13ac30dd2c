#pragma once

#include <cstddef>
#include <vector>

#include "psg/game.hpp"
#include "psg/matrix_game.hpp"
#include "psg/strategy.hpp"

namespace psg {

/// Values on X x Y, indexed like ProductGame::joint.
struct ValueTable {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;
  double residual = 0.0;     // sup-norm change of the last iteration
  std::size_t iterations = 0;
  double error_bound = 0.0;  // discounted runs: residual * (1 - lambda) / lambda

  static ValueTable constant(const ProductGame& game, double c);
  double at(std::size_t x, std::size_t y) const { return values[x * ny + y]; }
  double& at(std::size_t x, std::size_t y) { return values[x * ny + y]; }
  double min() const;
  double max() const;
};

struct DiscountConfig {
  double lambda = 0.1;
  double tol = 1e-10;
  std::size_t max_iterations = 1'000'000;
};

/// Entry (a, b) = w u(x,y,a,b) + (1-w) sum p(x'|x,a) q(y'|y,b) v(x',y'), over
/// the admissible actions at x (rows) and y (columns) in index order.
MatrixGame local_matrix(const ProductGame& game, const ValueTable& v, std::size_t x, std::size_t y, double w);

struct ShapleyResult {
  ValueTable next;
  std::vector<MixedAction> player1;  // per joint state, full action length
  std::vector<MixedAction> player2;
  double max_gap = 0.0;
};

/// One synchronous application of the Shapley operator with stage weight w.
ShapleyResult shapley_step(const ProductGame& game, const ValueTable& v, double w);

struct NStageResult {
  std::vector<ValueTable> values;  // v_1 .. v_N
  StrategyBundle player1;          // markov, stage n plays the level N-n+1 solution
  StrategyBundle player2;
};

/// n-stage recursion. With keep_strategies false the bundles are left empty.
NStageResult n_stage_values(const ProductGame& game, std::size_t horizon, bool keep_strategies = true);

struct DiscountResult {
  ValueTable value;
  StrategyBundle player1;  // stationary
  StrategyBundle player2;
  double max_gap = 0.0;
};

/// Value iteration from v = 0. Stops once (1 - lambda) * residual <= tol, which
/// bounds the residual of one more application by tol.
DiscountResult discounted_value(const ProductGame& game, const DiscountConfig& cfg);

struct BestResponse {
  /// Shares the fixed bundle's phase machinery, so it is stationary whenever
  /// the fixed bundle is.
  StrategyBundle response;
  /// Discounted value of the response, per (joint state, fixed-bundle phase),
  /// indexed s * phases + phase.
  std::vector<double> value;
  std::size_t phases = 1;
  double residual = 0.0;
  std::size_t iterations = 0;

  /// Value from joint state s with the fixed bundle in its initial phase.
  double start_value(const StrategyBundle& fixed, std::size_t s) const {
    return value[s * phases + fixed.initial_phase(s)];
  }
};

/// Best response of opponent(fixed_player) to `fixed` in the lambda-discounted
/// game, solved as an MDP on joint states augmented with the fixed bundle's phase.
BestResponse stationary_best_response(const ProductGame& game, const StrategyBundle& fixed, Player fixed_player,
                                      const DiscountConfig& cfg);

/// Exact optimum of the N-stage average payoff for the free player against
/// `fixed` (max for player 1, min for player 2), from `start`.
double horizon_best_response_value(const ProductGame& game, const StrategyBundle& fixed, Player fixed_player,
                                   std::size_t horizon, std::size_t x, std::size_t y);

}  // namespace psg
