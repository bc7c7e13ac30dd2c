#pragma once

#include <cstddef>
#include <vector>

namespace psg {

/// maximize c.x subject to A x <= b, x >= 0, with b >= 0 so the origin is
/// feasible. A is row-major, rows x cols.
struct LinearProgram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct LpSolution {
  std::vector<double> x;     // primal, size cols
  std::vector<double> dual;  // constraint multipliers, size rows, >= 0
  double objective = 0.0;
  std::size_t pivots = 0;
};

/// Dense tableau simplex, Dantzig rule with a Bland fallback on stalling. The
/// final basis is re-solved with an LU factorization of the original data.
/// Throws SolverError if unbounded or the pivot budget is exhausted.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace psg
