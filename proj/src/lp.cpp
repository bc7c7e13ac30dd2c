#include "psg/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>

#include "psg/errors.hpp"
#include "psg/simd.hpp"

namespace psg {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-12;
constexpr std::size_t kStallLimit = 50;

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp)
      : m_(lp.rows), n_(lp.cols), width_(lp.cols + lp.rows + 1), t_((m_ + 1) * width_, 0.0), basis_(m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) cell(i, j) = lp.at(i, j);
      cell(i, n_ + i) = 1.0;
      cell(i, width_ - 1) = lp.b[i];
      basis_[i] = n_ + i;
    }
    for (std::size_t j = 0; j < n_; ++j) cell(m_, j) = lp.c[j];
  }

  double& cell(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double cell(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  std::span<double> row(std::size_t i) { return {t_.data() + i * width_, width_}; }

  // Entering column, or npos at optimality.
  std::size_t entering(bool bland) const {
    std::size_t best = npos;
    double best_cost = kCostEps;
    for (std::size_t j = 0; j + 1 < width_; ++j) {
      const double r = cell(m_, j);
      if (r <= kCostEps) continue;
      if (bland) return j;
      if (r > best_cost) {
        best_cost = r;
        best = j;
      }
    }
    return best;
  }

  std::size_t leaving(std::size_t col) const {
    std::size_t best = npos;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = cell(i, col);
      if (a <= kPivotEps) continue;
      const double ratio = cell(i, width_ - 1) / a;
      if (best == npos || ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t col) {
    const double inv = 1.0 / cell(r, col);
    for (double& v : row(r)) v *= inv;
    cell(r, col) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = cell(i, col);
      if (f == 0.0) continue;
      simd::axpy(-f, row(r), row(i));
      cell(i, col) = 0.0;
    }
    basis_[r] = col;
  }

  double objective() const { return -cell(m_, width_ - 1); }
  const std::vector<std::size_t>& basis() const { return basis_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t m_, n_, width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  if (lp.a.size() != lp.rows * lp.cols || lp.b.size() != lp.rows || lp.c.size() != lp.cols)
    throw PreconditionError("linear program has inconsistent dimensions");
  for (double v : lp.b)
    if (!(v >= 0.0)) throw PreconditionError("linear program needs b >= 0");

  const std::size_t m = lp.rows, n = lp.cols;
  Tableau t(lp);
  LpSolution sol;
  const std::size_t budget = 50 * (m + n) + 1000;
  std::size_t stall = 0;
  double last_obj = 0.0;
  for (;;) {
    const std::size_t col = t.entering(stall >= kStallLimit);
    if (col == Tableau::npos) break;
    const std::size_t r = t.leaving(col);
    if (r == Tableau::npos) throw SolverError("linear program is unbounded");
    t.pivot(r, col);
    if (++sol.pivots > budget) throw SolverError("simplex pivot budget exhausted");
    const double obj = t.objective();
    stall = obj > last_obj + 1e-14 ? 0 : stall + 1;
    last_obj = std::max(last_obj, obj);
  }

  // Re-solve the final basis against the original data.
  const auto& basis = t.basis();
  Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(m)), cb(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const std::size_t col = basis[k];
    if (col < n) {
      for (std::size_t i = 0; i < m; ++i) bm(static_cast<Eigen::Index>(i), kk) = lp.at(i, col);
      cb(kk) = lp.c[col];
    } else {
      bm(static_cast<Eigen::Index>(col - n), kk) = 1.0;
      cb(kk) = 0.0;
    }
    rhs(kk) = lp.b[k];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(bm);
  if (!lu.isInvertible()) throw SolverError("simplex ended on a singular basis");
  const Eigen::VectorXd xb = lu.solve(rhs);
  const Eigen::VectorXd y = bm.transpose().fullPivLu().solve(cb);

  sol.x.assign(n, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    if (basis[k] < n) sol.x[basis[k]] = std::max(0.0, xb(static_cast<Eigen::Index>(k)));
  sol.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.dual[i] = std::max(0.0, y(static_cast<Eigen::Index>(i)));
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];
  return sol;
}

}  // namespace psg
