#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "psg/game.hpp"

namespace psg {

/// Zero-sum matrix game; the row player maximizes. Row-major storage.
struct MatrixGame {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> m;

  MatrixGame() = default;
  MatrixGame(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), m(r * c, fill) {}
  MatrixGame(std::size_t r, std::size_t c, std::vector<double> data);

  double& at(std::size_t i, std::size_t j) { return m[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return m[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {m.data() + i * cols, cols}; }
  MatrixGame transposed() const;
};

struct MinimaxSolution {
  double value = 0.0;
  MixedAction row;  // mu
  MixedAction col;  // nu
  /// max_i (M nu)_i - min_j (mu^T M)_j.
  double gap = 0.0;
  double lower = 0.0;  // min_j (mu^T M)_j
  double upper = 0.0;  // max_i (M nu)_i
};

/// Default certificate tolerance used by the recursions.
inline constexpr double kMatrixGameTol = 1e-9;

/// Throws SolverError when the certified gap exceeds tol.
MinimaxSolution solve_matrix_game(const MatrixGame& game, double tol = kMatrixGameTol);

/// Certificate of an arbitrary strategy pair: fills lower, upper and gap.
MinimaxSolution certify(const MatrixGame& game, MixedAction row, MixedAction col);

struct ValueInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Grid search over mixtures with weights in {0, 1/k, ..., 1}. Throws
/// PreconditionError when the number of mixtures exceeds `budget`.
ValueInterval brute_force_value(const MatrixGame& game, std::size_t k, std::size_t budget = 20'000'000);

}  // namespace psg
