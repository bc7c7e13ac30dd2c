#pragma once

// Random instances and small brute-force oracles shared by the test binaries.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "psg/classification.hpp"
#include "psg/game.hpp"
#include "psg/matrix_game.hpp"

namespace psg::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

inline void normalize(std::span<double> row) {
  double s = 0.0;
  for (double v : row) s += v;
  for (double& v : row) v /= s;
}

inline std::vector<std::string> labels(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline std::vector<Action> actions(const char* prefix, std::size_t n) {
  std::vector<Action> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({prefix + std::to_string(i), {}});
  return out;
}

/// Every action keeps a self-loop and a step along the cycle, so every policy
/// gives an irreducible aperiodic chain.
inline void strong_rows(std::vector<double>& k, std::size_t n, std::size_t na, Rng& rng, double min_prob = 0.1) {
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < na; ++a) {
      std::span<double> row{k.data() + (s * na + a) * n, n};
      for (std::size_t t = 0; t < n; ++t) row[t] = uniform(rng) < 0.4 ? uniform(rng) : 0.0;
      row[s] += min_prob + uniform(rng);
      row[(s + 1) % n] += min_prob + uniform(rng);
      normalize(row);
    }
}

/// Sparse rows with random support (one to three successors).
inline void sparse_rows(std::vector<double>& k, std::size_t n, std::size_t na, Rng& rng) {
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < na; ++a) {
      std::span<double> row{k.data() + (s * na + a) * n, n};
      std::fill(row.begin(), row.end(), 0.0);
      const std::size_t succ = 1 + pick(rng, std::min<std::size_t>(3, n));
      for (std::size_t i = 0; i < succ; ++i) row[pick(rng, n)] += 0.2 + uniform(rng);
      normalize(row);
    }
}

inline void random_payoff(ProductGame& g, Rng& rng) {
  for (double& v : g.u) v = uniform(rng);
}

/// Player 1 strongly communicating on |X| states, player 2 arbitrary.
inline ProductGame strong_fixture(Rng& rng, std::size_t nx, std::size_t ny, std::size_t na, std::size_t nb) {
  ProductGame g(labels("x", nx), labels("y", ny), actions("a", na), actions("b", nb));
  strong_rows(g.p, nx, na, rng);
  sparse_rows(g.q, ny, nb, rng);
  random_payoff(g, rng);
  return g;
}

inline ProductGame random_game(Rng& rng, std::size_t nx, std::size_t ny, std::size_t na, std::size_t nb) {
  ProductGame g(labels("x", nx), labels("y", ny), actions("a", na), actions("b", nb));
  sparse_rows(g.p, nx, na, rng);
  sparse_rows(g.q, ny, nb, rng);
  random_payoff(g, rng);
  return g;
}

inline SideKernel random_kernel(Rng& rng, std::size_t n, std::size_t na) {
  SideKernel k;
  k.states = n;
  k.actions = na;
  k.prob.assign(n * na * n, 0.0);
  sparse_rows(k.prob, n, na, rng);
  return k;
}

inline MatrixGame random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  MatrixGame m(r, c);
  for (double& v : m.m) v = uniform(rng, -1.0, 1.0);
  return m;
}

/// Closed sets of the support graph of a policy given by per-state action
/// subsets: the strongly connected components with no exit.
inline std::vector<std::vector<std::size_t>> closed_classes(const SideKernel& k,
                                                            const std::vector<std::vector<std::size_t>>& support) {
  const std::size_t n = k.states;
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    reach[s][s] = true;
    for (std::size_t a : support[s])
      for (std::size_t t = 0; t < n; ++t)
        if (k.row(s, a)[t] > 0.0) reach[s][t] = true;
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][m] && reach[m][j]) reach[i][j] = true;
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> done(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (done[s]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t t = 0; t < n; ++t)
      if (reach[s][t] && reach[t][s]) cls.push_back(t);
    for (std::size_t t : cls) done[t] = true;
    bool closed = true;
    for (std::size_t t = 0; t < n && closed; ++t)
      if (reach[s][t] && !reach[t][s]) closed = false;
    if (closed) out.push_back(cls);
  }
  return out;
}

/// Maximal sets that are a recurrent class of some stationary policy. Only the
/// support of a stationary policy matters, so every nonempty action subset per
/// state is enumerated.
inline std::pair<std::vector<std::vector<std::size_t>>, std::vector<std::size_t>> brute_force_classes(
    const SideKernel& k) {
  const std::size_t n = k.states, na = k.actions;
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << na); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t a = 0; a < na; ++a)
      if (mask >> a & 1) s.push_back(a);
    subsets.push_back(s);
  }
  std::set<std::vector<std::size_t>> found;
  std::vector<std::size_t> choice(n, 0);
  for (;;) {
    std::vector<std::vector<std::size_t>> support(n);
    for (std::size_t s = 0; s < n; ++s) support[s] = subsets[choice[s]];
    for (auto& c : closed_classes(k, support)) found.insert(c);
    std::size_t i = 0;
    while (i < n && ++choice[i] == subsets.size()) choice[i++] = 0;
    if (i == n) break;
  }
  std::vector<std::vector<std::size_t>> maximal;
  for (const auto& c : found) {
    bool dominated = false;
    for (const auto& d : found)
      if (d != c && std::includes(d.begin(), d.end(), c.begin(), c.end())) dominated = true;
    if (!dominated) maximal.push_back(c);
  }
  std::sort(maximal.begin(), maximal.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<bool> covered(n, false);
  for (const auto& c : maximal)
    for (std::size_t s : c) covered[s] = true;
  std::vector<std::size_t> transient;
  for (std::size_t s = 0; s < n; ++s)
    if (!covered[s]) transient.push_back(s);
  return {maximal, transient};
}

/// Exact value of a two-row matrix game: the lower envelope of the column
/// lines is concave in the row weight, so its maximum sits at an endpoint or
/// at a crossing of two lines.
inline double two_row_value(const MatrixGame& m) {
  std::vector<double> cand{0.0, 1.0};
  for (std::size_t i = 0; i < m.cols; ++i)
    for (std::size_t j = i + 1; j < m.cols; ++j) {
      const double si = m.at(0, i) - m.at(1, i), sj = m.at(0, j) - m.at(1, j);
      if (si == sj) continue;
      const double t = (m.at(1, j) - m.at(1, i)) / (si - sj);
      if (t > 0.0 && t < 1.0) cand.push_back(t);
    }
  double best = -1e300;
  for (double t : cand) {
    double lo = 1e300;
    for (std::size_t j = 0; j < m.cols; ++j) lo = std::min(lo, t * m.at(0, j) + (1 - t) * m.at(1, j));
    best = std::max(best, lo);
  }
  return best;
}

}  // namespace psg::test
