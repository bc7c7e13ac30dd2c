#include "psg/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "psg/errors.hpp"
#include "psg/lp.hpp"
#include "psg/simd.hpp"

namespace psg {

MatrixGame::MatrixGame(std::size_t r, std::size_t c, std::vector<double> data)
    : rows(r), cols(c), m(std::move(data)) {
  if (m.size() != r * c) throw PreconditionError("matrix data has wrong size");
}

MatrixGame MatrixGame::transposed() const {
  MatrixGame t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

MinimaxSolution certify(const MatrixGame& game, MixedAction row, MixedAction col) {
  MinimaxSolution s;
  s.upper = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < game.rows; ++i) s.upper = std::max(s.upper, simd::dot(game.row(i), col.weights));
  std::vector<double> colvals(game.cols, 0.0);
  for (std::size_t i = 0; i < game.rows; ++i)
    if (row[i] != 0.0) simd::axpy(row[i], game.row(i), colvals);
  s.lower = *std::min_element(colvals.begin(), colvals.end());
  s.gap = std::max(0.0, s.upper - s.lower);
  s.value = 0.5 * (s.lower + s.upper);
  s.row = std::move(row);
  s.col = std::move(col);
  return s;
}

namespace {

void require_valid(const MatrixGame& game) {
  if (game.rows == 0 || game.cols == 0) throw PreconditionError("matrix game needs at least one row and column");
  if (game.m.size() != game.rows * game.cols) throw PreconditionError("matrix data has wrong size");
  for (double v : game.m)
    if (!std::isfinite(v)) throw PreconditionError("matrix game has a non-finite entry");
}

// Lowest-index pure saddle point, if any.
bool pure_saddle(const MatrixGame& g, std::size_t& bi, std::size_t& bj) {
  double maxmin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.rows; ++i) {
    const auto r = g.row(i);
    const double mn = *std::min_element(r.begin(), r.end());
    if (mn > maxmin) {
      maxmin = mn;
      bi = i;
    }
  }
  double minmax = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < g.cols; ++j) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.rows; ++i) mx = std::max(mx, g.at(i, j));
    if (mx < minmax) {
      minmax = mx;
      bj = j;
    }
  }
  return maxmin == minmax;
}

MixedAction normalized(std::vector<double> w) {
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0)) throw SolverError("matrix game solver produced an empty strategy");
  for (double& v : w) v /= total;
  return MixedAction{std::move(w)};
}

}  // namespace

MinimaxSolution solve_matrix_game(const MatrixGame& game, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("matrix game tolerance must be positive");
  require_valid(game);

  std::size_t si = 0, sj = 0;
  if (pure_saddle(game, si, sj))
    return certify(game, MixedAction::pure(game.rows, si), MixedAction::pure(game.cols, sj));

  // Shift so every entry is >= 1, then max sum(y) s.t. M' y <= 1. The column
  // strategy is y / sum(y) and the row strategy comes from the duals.
  const auto [lo_it, hi_it] = std::minmax_element(game.m.begin(), game.m.end());
  const double lo = *lo_it, range = *hi_it - lo;
  const double scale = range > 0.0 ? 1.0 / range : 1.0;
  LinearProgram lp;
  lp.rows = game.rows;
  lp.cols = game.cols;
  lp.a.resize(game.m.size());
  for (std::size_t k = 0; k < game.m.size(); ++k) lp.a[k] = (game.m[k] - lo) * scale + 1.0;
  lp.b.assign(game.rows, 1.0);
  lp.c.assign(game.cols, 1.0);
  const LpSolution sol = solve_lp(lp);

  MinimaxSolution s = certify(game, normalized(sol.dual), normalized(sol.x));
  if (s.gap > tol) {
    throw SolverError("matrix game gap " + std::to_string(s.gap) + " exceeds tolerance " + std::to_string(tol) +
                      " on a " + std::to_string(game.rows) + "x" + std::to_string(game.cols) + " game");
  }
  return s;
}

namespace {

// Calls f(weights) for every composition of k into n nonnegative parts.
template <typename F>
void for_each_composition(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> parts(n, 0);
  parts[n - 1] = k;
  for (;;) {
    f(parts);
    // Move one unit leftwards in reverse lexicographic order.
    std::size_t i = n - 1;
    while (i > 0 && parts[i] == 0) --i;
    if (i == 0) return;
    const std::size_t rest = parts[i];
    parts[i] = 0;
    parts[i - 1] += 1;
    parts[n - 1] = rest - 1;
  }
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

ValueInterval brute_force_value(const MatrixGame& game, std::size_t k, std::size_t budget) {
  require_valid(game);
  if (k == 0) throw PreconditionError("grid must be positive");
  const double count = binomial(k + game.rows - 1, game.rows - 1) + binomial(k + game.cols - 1, game.cols - 1);
  if (count > static_cast<double>(budget)) throw PreconditionError("brute force grid exceeds the budget");

  const double step = 1.0 / static_cast<double>(k);
  ValueInterval out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::vector<double> acc;
  acc.resize(game.cols);
  for_each_composition(game.rows, k, [&](const std::vector<std::size_t>& w) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < game.rows; ++i)
      if (w[i] != 0) simd::axpy(static_cast<double>(w[i]) * step, game.row(i), acc);
    out.lo = std::max(out.lo, *std::min_element(acc.begin(), acc.end()));
  });
  std::vector<double> nu(game.cols);
  for_each_composition(game.cols, k, [&](const std::vector<std::size_t>& w) {
    for (std::size_t j = 0; j < game.cols; ++j) nu[j] = static_cast<double>(w[j]) * step;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < game.rows; ++i) best = std::max(best, simd::dot(game.row(i), nu));
    out.hi = std::min(out.hi, best);
  });
  return out;
}

}  // namespace psg
