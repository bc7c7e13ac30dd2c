#pragma once

// Uniform value of a product game in which one player is strongly
// communicating: per-component values, the auxiliary minimization MDP on the
// other player's states, and finite-state strategies for both players.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "psg/classification.hpp"
#include "psg/game.hpp"
#include "psg/strategy.hpp"
#include "psg/value_iteration.hpp"

namespace psg {

/// The game restricted to X x C, with player 2 limited at each y in C to the
/// actions B_y that keep Y inside C with probability one.
struct ComponentGame {
  ProductGame game;                  // Y-states are the members of C, in order
  std::vector<std::size_t> members;  // original Y index of each local Y-state
};

/// Throws PreconditionError if some B_y is empty or C is not a valid state set.
ComponentGame restrict_component(const ProductGame& game, const std::vector<std::size_t>& component);

struct ComponentValueOptions {
  std::size_t max_horizon = 4096;
  /// Verify that player 1 is strongly communicating on the component game.
  bool check_hypothesis = true;
};

struct ComponentValue {
  double value = 0.0;
  std::size_t period = 0;            // N0
  double span = 0.0;                 // max - min of v_N0
  double lag_difference = 0.0;       // sup |v_N0 - v_2N0|
  std::vector<double> span_history;  // span of v_1 .. v_{2 N0}
  StrategyBundle player1;            // periodic with N0 phases, on the component game
  StrategyBundle player2;
};

/// Smallest N with span(v_N) <= eps and sup|v_N - v_2N| <= eps; the value is
/// the midpoint of v_N's range. Throws SolverError with the achieved span when
/// max_horizon is reached first.
ComponentValue component_uniform_value(const ComponentGame& cg, double eps, const ComponentValueOptions& opts = {});

/// The N0-stage optimal Markov strategies of `cg`, repeated with period N0.
std::pair<StrategyBundle, StrategyBundle> periodic_strategies(const ComponentGame& cg, std::size_t period);

struct AuxiliaryMdp {
  SideKernel kernel;       // player 2's states and actions
  Classification classes;  // of `kernel`
  std::vector<double> g;   // v_i on C_i, 1/2 on D
};

/// Throws PreconditionError when component_values does not match the classification.
AuxiliaryMdp build_mdp(const SideKernel& kernel, const Classification& classes,
                       const std::vector<double>& component_values);

struct MdpSolution {
  std::vector<double> w;                 // minimal long-run average cost per state
  std::vector<MixedAction> policy;       // stationary
  std::vector<bool> stop;                // states where staying put is optimal
  std::vector<std::vector<std::size_t>> recurrent_classes;  // of the policy's chain
  double average_gap = 0.0;              // sup |long-run average of policy - w|
  double bellman_gap = 0.0;              // largest one-step improvement over w
};

/// Solved as an optimal-stopping LP: maximize sum w subject to
/// w(y) <= sum_y' q(y'|y,b) w(y') for every admissible b, w <= g on components
/// and w <= 1. Throws SolverError if either certificate exceeds tol.
MdpSolution solve_mdp(const AuxiliaryMdp& mdp, double tol = 1e-9);

/// Product game on X x (Y x [1, N0]). Y-state index is y * N0 + (t - 1). The
/// clock advances modulo N0 while y and y' lie in the same component and
/// resets to 1 otherwise.
ProductGame build_clock_game(const ProductGame& game, const Classification& y_classes, std::size_t period);

struct Theorem1Options {
  Player strong_side = Player::one;
  ComponentValueOptions component;
  double mdp_tol = 1e-9;
};

struct Theorem1Result {
  Player strong_side = Player::one;
  Classification classes;  // of the non-strong side
  std::vector<ComponentGame> components;
  std::vector<ComponentValue> component_values;  // all with the common period
  std::vector<std::size_t> own_period;           // per-component stopping N
  std::size_t period = 0;                        // common N0
  AuxiliaryMdp mdp;
  MdpSolution mdp_solution;
  /// Uniform value as a function of the non-strong player's state.
  std::vector<double> w;
  /// Index of the component each recurrent class of the MDP policy lies in.
  std::vector<std::size_t> recurrent_component;
  StrategyBundle player1;  // controller on the original game
  StrategyBundle player2;  // controller on the original game

  /// w at joint state (x, y) of the original game.
  double value_at(const ProductGame& game, std::size_t x, std::size_t y) const;
};

/// Runs classify, restrict, component values, MDP and strategy construction.
/// Throws PreconditionError if the designated side is not strongly communicating.
Theorem1Result theorem1_value(const ProductGame& game, double eps, const Theorem1Options& opts = {});

/// The game with the roles of the players exchanged and payoff 1 - u. Joint
/// state (x, y) of `game` becomes (y, x).
ProductGame swap_players(const ProductGame& game);

/// Per-component rows: component,members,value,period,span,lag_difference.
void write_component_csv(std::ostream& out, const ProductGame& game, const Theorem1Result& r);
/// Per-state rows of the non-strong side: state,w,g,stop,policy_support.
void write_w_csv(std::ostream& out, const ProductGame& game, const Theorem1Result& r);

}  // namespace psg
