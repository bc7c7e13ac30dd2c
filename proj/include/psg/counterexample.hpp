#pragma once

// The circle game that is weakly communicating on both sides and has no
// asymptotic value, plus its two-state reduction.
//
// X = {x, y} x C8 and Y = {x', y'} x C8. Player 1 picks alpha in
// I = {0} u {4^-k} (truncated at k = K) and a direction p in {-1, +1}, or
// (alpha, 0) with alpha in {0, 1}. Player 2 does the same with beta in the
// grid of [0, 1/4]. Payoff 1 at circle distance >= 3, 0 at distance <= 1, and
// at distance 2 it is 1 exactly when the letters differ (x with y', y with x').

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "psg/game.hpp"

namespace psg {

struct CircleGameParams {
  std::size_t K = 10;
  /// Number of steps of the beta grid on [0, 1/4] (grid has j_grid + 1 points).
  std::size_t j_grid = 256;
};

/// {0, 1/4, 1/16, ..., 4^-K}, ascending.
std::vector<double> truncated_i(std::size_t K);
/// j_grid + 1 equally spaced points of [0, 1/4].
std::vector<double> j_grid_points(std::size_t j_grid);

/// X index is letter * 8 + k with letter 0 = x, 1 = y; likewise Y.
/// Action params are (alpha, p).
ProductGame build_circle_game(const CircleGameParams& params = {});

/// Stage continuation after the (x, y) reduction: coefficient of x_val, y_val
/// and the absorbing-1 mass. p and q are in {-1, 0, +1}.
double stage_kernel_h(double x_val, double y_val, double alpha, int p, double beta, int q);

struct DominanceViolation {
  int inequality = 0;  // 1: player 2 check at (y, x); 2: player 1 check at (x, y)
  int case_index = 0;  // 1..9 over (p, q) = (+1,+1), (+1,0), (+1,-1), (0,+1), ..., (-1,-1)
  double alpha = 0.0;
  int p = 0;
  double beta = 0.0;
  int q = 0;
  double margin = 0.0;  // signed, negative is a violation
};

struct DominanceReport {
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  std::vector<DominanceViolation> violations;  // first 64 only
  double worst_margin = 0.0;
  bool ok() const { return violation_count == 0; }
};

/// Checks h(y,x,a,p,b,q) >= h(y,x,a,p,0,+1) and h(x,y,a,p,b,q) <= h(x,y,0,+1,b,q)
/// up to `slack`. alpha ranges over alpha_grid when p != 0 and over {0, 1}
/// when p = 0; beta likewise.
DominanceReport verify_dominance(double x_val, double y_val, const std::vector<double>& alpha_grid,
                                 const std::vector<double>& beta_grid, double slack = 1e-12);

struct FixedPointSolution {
  double lambda = 0.0;
  double x_val = 0.0;  // value at (x, y', 2)
  double y_val = 0.0;  // value at (x, x', 2)
  double alpha_star = 0.0;
  double beta_star = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Value iteration on the four-state reduction (two absorbing states). The
/// beta minimum is taken in closed form. Stops once the sup residual is at
/// most tol * lambda.
FixedPointSolution solve_simplified_fixed_point(double lambda, std::size_t K = 10, double tol = 1e-12);

struct IdentityReport {
  bool beta_checked = false;  // only for lambda <= 1/17
  double beta_formula = 0.0;
  bool beta_ok = true;
  double identity_residual = 0.0;
  bool identity_ok = true;
  double alpha_unconstrained = 0.0;  // (x - y) / (2 y)
  double alpha_below = 0.0;
  double alpha_above = 0.0;  // equals alpha_below when nothing in I_K lies above
  bool alpha_ok = true;
  bool ok() const { return beta_ok && identity_ok && alpha_ok; }
};

IdentityReport check_identities(const FixedPointSolution& sol, std::size_t K = 10, double tol = 1e-12);

struct LemmaHypotheses {
  bool sqrt_in_I = false;
  bool interval_disjoint = false;  // (sqrt/2, 2 sqrt) has no point of I
  /// sqrt(lambda) is a power of two, so the answer covers all of I and not
  /// just the truncation.
  bool analytic = false;
};

LemmaHypotheses lemma_hypotheses(double lambda, std::size_t K = 10);

struct SweepRow {
  double lambda = 0.0;
  LemmaHypotheses hyp;
  FixedPointSolution sol;
  IdentityReport identities;
  /// (x - y) / (2 sqrt(lambda) (1 - x)); checked against 1 for lambda <= 2^-10.
  double asymptotic_ratio = 0.0;
  bool asymptotic_checked = false;
  bool asymptotic_ok = true;
  std::string error;  // solver failure, row flagged
  bool ok() const { return error.empty() && identities.ok() && asymptotic_ok; }
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// 2^-4, 2^-6, ..., 2^-16.
std::vector<double> default_sweep_lambdas();

SweepTable oscillation_sweep(const std::vector<double>& lambdas, std::size_t K = 10, double tol = 1e-12);

/// lambda,sqrt_in_I,interval_disjoint,x,y,gap,alpha,beta,residual
void write_sweep_csv(std::ostream& out, const SweepTable& table);

struct CrossCheckReport {
  double lambda = 0.0;
  double x_full = 0.0;  // v at ((x,2), (y',0))
  double y_full = 0.0;  // v at ((x,2), (x',0))
  double x_simplified = 0.0;
  double y_simplified = 0.0;
  double x_diff = 0.0;
  double y_diff = 0.0;
  double far_deviation = 0.0;   // max 1 - v over distance >= 3
  double near_deviation = 0.0;  // max v over distance <= 1
  double residual = 0.0;
  std::size_t iterations = 0;
};

CrossCheckReport cross_check_full_game(double lambda, const CircleGameParams& params = {}, double tol = 1e-9);

}  // namespace psg
