#include "psg/counterexample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "psg/errors.hpp"
#include "psg/game_io.hpp"
#include "psg/parallel.hpp"
#include "psg/value_iteration.hpp"

namespace psg {

namespace {

constexpr std::size_t kCircle = 8;

std::string short_number(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string direction(int p) { return p > 0 ? "+1" : (p < 0 ? "-1" : "0"); }

std::vector<Action> circle_actions(const std::vector<double>& grid) {
  std::vector<Action> out;
  for (int p : {-1, +1})
    for (double a : grid)
      out.push_back({"(" + short_number(a) + "," + direction(p) + ")", {a, double(p)}});
  out.push_back({"(0,0)", {0.0, 0.0}});
  out.push_back({"(1,0)", {1.0, 0.0}});
  return out;
}

std::size_t circle_distance(std::size_t k, std::size_t k2) {
  const std::size_t d = (k + kCircle - k2) % kCircle;
  return std::min(d, kCircle - d);
}

// Kernel on {letter} x C8 for the given actions; letter-major indexing.
void fill_side(std::vector<double>& kern, const std::vector<Action>& actions) {
  const std::size_t n = 2 * kCircle, na = actions.size();
  auto at = [&](std::size_t s, std::size_t a, std::size_t t) -> double& { return kern[(s * na + a) * n + t]; };
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < kCircle; ++k) {
      const std::size_t s = i * kCircle + k;
      for (std::size_t a = 0; a < na; ++a) {
        const double al = actions[a].params[0];
        const int p = static_cast<int>(actions[a].params[1]);
        if (p == 0) {
          at(s, a, s) += 1.0 - al;
          at(s, a, (1 - i) * kCircle + k) += al;
          continue;
        }
        const std::size_t fwd = (k + kCircle + p) % kCircle, back = (k + kCircle - p) % kCircle;
        at(s, a, i * kCircle + fwd) += 1.0 - al - al * al;
        at(s, a, (1 - i) * kCircle + fwd) += al;
        at(s, a, i * kCircle + back) += al * al;
      }
    }
}

}  // namespace

std::vector<double> truncated_i(std::size_t K) {
  std::vector<double> out{0.0};
  for (std::size_t k = K; k >= 1; --k) out.push_back(std::ldexp(1.0, -2 * static_cast<int>(k)));
  return out;
}

std::vector<double> j_grid_points(std::size_t j_grid) {
  if (j_grid == 0) throw PreconditionError("j_grid must be positive");
  std::vector<double> out;
  for (std::size_t j = 0; j <= j_grid; ++j) out.push_back(0.25 * static_cast<double>(j) / static_cast<double>(j_grid));
  out.back() = 0.25;
  return out;
}

ProductGame build_circle_game(const CircleGameParams& params) {
  if (params.K < 2) throw PreconditionError("circle game needs K >= 2");
  if (params.j_grid < 1) throw PreconditionError("circle game needs j_grid >= 1");
  std::vector<std::string> xs, ys;
  for (const char* l : {"x", "y"})
    for (std::size_t k = 0; k < kCircle; ++k) {
      xs.push_back("(" + std::string(l) + "," + std::to_string(k) + ")");
      ys.push_back("(" + std::string(l) + "'," + std::to_string(k) + ")");
    }
  ProductGame g(xs, ys, circle_actions(truncated_i(params.K)), circle_actions(j_grid_points(params.j_grid)));
  fill_side(g.p, g.a_actions);
  fill_side(g.q, g.b_actions);
  for (std::size_t x = 0; x < g.nx(); ++x)
    for (std::size_t y = 0; y < g.ny(); ++y) {
      const std::size_t d = circle_distance(x % kCircle, y % kCircle);
      double v = d >= 3 ? 1.0 : 0.0;
      if (d == 2) v = (x / kCircle != y / kCircle) ? 1.0 : 0.0;
      for (std::size_t a = 0; a < g.na(); ++a)
        for (std::size_t b = 0; b < g.nb(); ++b) g.payoff(x, y, a, b) = v;
    }
  return g;
}

double stage_kernel_h(double x, double y, double al, int p, double be, int q) {
  const double pm = p == -1, p0 = p == 0, pp = p == 1;
  const double qm = q == -1, q0 = q == 0, qp = q == 1;
  const double a2 = al * al, b2 = be * be;
  const double same = pm * qm + pp * qp, cross = pm * qp + pp * qm;
  const double xc = ((1 - al - a2) * (1 - be - b2) + al * be + a2 * b2) * same +
                    ((1 - al) * (1 - be) + al * be) * p0 * q0 + ((1 - al - a2) * b2 + (1 - be - b2) * a2) * cross;
  const double yc = ((1 - al - a2) * be + (1 - be - b2) * al) * same + ((1 - al) * be + (1 - be) * al) * p0 * q0 +
                    (al * b2 + be * a2) * cross;
  const double rest = a2 * (1 - b2) * pm * qm + b2 * (1 - a2) * pp * qp + (1 - a2) * pp * q0 + a2 * pm * q0 +
                      b2 * p0 * qp + (1 - b2) * p0 * qm + (1 - a2) * (1 - b2) * pp * qm + a2 * b2 * pm * qp;
  return xc * x + yc * y + rest;
}

DominanceReport verify_dominance(double x_val, double y_val, const std::vector<double>& alpha_grid,
                                 const std::vector<double>& beta_grid, double slack) {
  static const int order[3] = {+1, 0, -1};
  const std::vector<double> switch_grid{0.0, 1.0};
  DominanceReport rep;
  rep.worst_margin = INFINITY;
  auto record = [&](const DominanceViolation& v) {
    ++rep.checked;
    rep.worst_margin = std::min(rep.worst_margin, v.margin);
    if (v.margin < -slack) {
      ++rep.violation_count;
      if (rep.violations.size() < 64) rep.violations.push_back(v);
    }
  };
  for (int ip = 0; ip < 3; ++ip)
    for (int iq = 0; iq < 3; ++iq) {
      const int p = order[ip], q = order[iq];
      const int case_index = ip * 3 + iq + 1;
      const auto& ag = p == 0 ? switch_grid : alpha_grid;
      const auto& bg = q == 0 ? switch_grid : beta_grid;
      for (double a : ag)
        for (double b : bg) {
          const double m1 = stage_kernel_h(y_val, x_val, a, p, b, q) - stage_kernel_h(y_val, x_val, a, p, 0.0, +1);
          record({1, case_index, a, p, b, q, m1});
          const double m2 = stage_kernel_h(x_val, y_val, 0.0, +1, b, q) - stage_kernel_h(x_val, y_val, a, p, b, q);
          record({2, case_index, a, p, b, q, m2});
        }
    }
  if (rep.checked == 0) rep.worst_margin = 0.0;
  return rep;
}

FixedPointSolution solve_simplified_fixed_point(double lambda, std::size_t K, double tol) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw PreconditionError("lambda must lie in (0, 1]");
  if (K < 2) throw PreconditionError("K must be at least 2");
  using R = long double;
  const std::vector<double> grid = truncated_i(K);
  const R lam = lambda, keep = 1.0L - lam;

  // Best alpha for continuation v0 (state 0) and v1 (state 1); alpha^2 mass is absorbed at 0.
  auto alpha_step = [&](R v0, R v1, double& arg) {
    R best = -1.0L;
    for (double a : grid) {
      const R al = a;
      const R val = al * v1 + (1.0L - al - al * al) * v0;
      if (val > best) {
        best = val;
        arg = a;
      }
    }
    return best;
  };
  // f(beta) = v1 + beta (v0 - v1) + beta^2 (1 - v1) on [0, 1/4]; beta^2 mass is absorbed at 1.
  auto beta_step = [&](R v0, R v1, double& arg) {
    auto f = [&](R b) { return v1 + b * (v0 - v1) + b * b * (1.0L - v1); };
    R cand[3] = {0.0L, 0.25L, 0.0L};
    int n = 2;
    if (1.0L - v1 > 0.0L) cand[n++] = std::clamp((v1 - v0) / (2.0L * (1.0L - v1)), 0.0L, 0.25L);
    R best = f(cand[0]);
    arg = 0.0;
    for (int i = 1; i < n; ++i)
      if (f(cand[i]) < best) {
        best = f(cand[i]);
        arg = static_cast<double>(cand[i]);
      }
    return best;
  };

  const std::size_t budget = static_cast<std::size_t>(100.0 / lambda) + 10000;
  R v0 = 0.0L, v1 = 0.0L;
  FixedPointSolution sol;
  sol.lambda = lambda;
  double a_arg = 0.0, b_arg = 0.0;
  for (std::size_t it = 1; it <= budget; ++it) {
    const R n0 = keep * alpha_step(v0, v1, a_arg);
    const R n1 = lam + keep * beta_step(v0, v1, b_arg);
    const R res = std::max(std::fabs(n0 - v0), std::fabs(n1 - v1));
    v0 = n0;
    v1 = n1;
    if (res <= static_cast<R>(tol) * lam) {
      alpha_step(v0, v1, a_arg);
      beta_step(v0, v1, b_arg);
      sol.x_val = static_cast<double>(v1);
      sol.y_val = static_cast<double>(v0);
      sol.alpha_star = a_arg;
      sol.beta_star = b_arg;
      sol.residual = static_cast<double>(res);
      sol.iterations = it;
      return sol;
    }
  }
  throw SolverError("simplified fixed point did not converge within " + std::to_string(budget) +
                    " iterations at lambda = " + format_number(lambda));
}

IdentityReport check_identities(const FixedPointSolution& sol, std::size_t K, double tol) {
  IdentityReport rep;
  const double x = sol.x_val, y = sol.y_val, lam = sol.lambda;
  if (lam <= 1.0 / 17.0) {
    rep.beta_checked = true;
    rep.beta_formula = (x - y) / (2.0 * (1.0 - x));
    rep.beta_ok = rep.beta_formula <= 0.25 && std::fabs(rep.beta_formula - sol.beta_star) <= 1e-9;
    rep.identity_residual = std::fabs(4.0 * lam * (1.0 - x) * (1.0 - x) - (1.0 - lam) * (x - y) * (x - y));
    rep.identity_ok = rep.identity_residual <= 20.0 * tol;
  }
  const std::vector<double> grid = truncated_i(K);
  rep.alpha_unconstrained = y > 0.0 ? (x - y) / (2.0 * y) : INFINITY;
  rep.alpha_below = grid.front();
  for (double e : grid)
    if (e <= rep.alpha_unconstrained) rep.alpha_below = e;
  rep.alpha_above = rep.alpha_below;
  for (double e : grid)
    if (e >= rep.alpha_unconstrained) {
      rep.alpha_above = e;
      break;
    }
  rep.alpha_ok = sol.alpha_star == rep.alpha_below || sol.alpha_star == rep.alpha_above;
  return rep;
}

LemmaHypotheses lemma_hypotheses(double lambda, std::size_t K) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionError("lambda must lie in (0, 1)");
  LemmaHypotheses h;
  const double s = std::sqrt(lambda);
  int e = 0;
  const double m = std::frexp(s, &e);
  if (m == 0.5) {
    // s = 2^-n; the only power of two in (s/2, 2s) is s itself.
    const int n = 1 - e;
    h.analytic = true;
    h.sqrt_in_I = n >= 2 && n % 2 == 0;
    h.interval_disjoint = !h.sqrt_in_I;
    return h;
  }
  bool hit = false;
  for (double v : truncated_i(K)) {
    if (v == 0.0) continue;
    if (std::fabs(v - s) <= 4e-16 * s) h.sqrt_in_I = true;
    if (v > s / 2.0 && v < 2.0 * s) hit = true;
  }
  h.interval_disjoint = !hit;
  return h;
}

std::vector<double> default_sweep_lambdas() {
  std::vector<double> out;
  for (int e = 4; e <= 16; e += 2) out.push_back(std::ldexp(1.0, -e));
  return out;
}

SweepTable oscillation_sweep(const std::vector<double>& lambdas, std::size_t K, double tol) {
  SweepTable t;
  t.rows.resize(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    SweepRow& r = t.rows[i];
    r.lambda = lambdas[i];
    try {
      if (r.lambda < 1.0) r.hyp = lemma_hypotheses(r.lambda, K);
      r.sol = solve_simplified_fixed_point(r.lambda, K, tol);
      r.identities = check_identities(r.sol, K, tol);
      if (r.lambda < 1.0) {
        r.asymptotic_ratio = (r.sol.x_val - r.sol.y_val) / (2.0 * std::sqrt(r.lambda) * (1.0 - r.sol.x_val));
        if (r.lambda <= std::ldexp(1.0, -10)) {
          r.asymptotic_checked = true;
          r.asymptotic_ok = std::fabs(r.asymptotic_ratio - 1.0) <= 0.1;
        }
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  return t;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "lambda,sqrt_in_I,interval_disjoint,x,y,gap,alpha,beta,residual\n";
  for (const auto& r : table.rows) {
    out << format_number(r.lambda) << ',' << (r.hyp.sqrt_in_I ? "true" : "false") << ','
        << (r.hyp.interval_disjoint ? "true" : "false") << ',';
    if (!r.error.empty()) {
      out << "nan,nan,nan,nan,nan,nan\n";
      continue;
    }
    out << format_number(r.sol.x_val) << ',' << format_number(r.sol.y_val) << ','
        << format_number(r.sol.x_val - r.sol.y_val) << ',' << format_number(r.sol.alpha_star) << ','
        << format_number(r.sol.beta_star) << ',';
    // The identity only applies for lambda <= 1/17; leave the field empty above.
    if (r.identities.beta_checked) out << format_number(r.identities.identity_residual);
    out << '\n';
  }
}

CrossCheckReport cross_check_full_game(double lambda, const CircleGameParams& params, double tol) {
  const ProductGame g = build_circle_game(params);
  const FixedPointSolution sol = solve_simplified_fixed_point(lambda, params.K, 1e-12);
  DiscountConfig cfg;
  cfg.lambda = lambda;
  cfg.tol = tol;
  const DiscountResult r = discounted_value(g, cfg);
  CrossCheckReport rep;
  rep.lambda = lambda;
  rep.x_full = r.value.at(2, kCircle);  // (x,2) against (y',0)
  rep.y_full = r.value.at(2, 0);        // (x,2) against (x',0)
  rep.x_simplified = sol.x_val;
  rep.y_simplified = sol.y_val;
  rep.x_diff = std::fabs(rep.x_full - sol.x_val);
  rep.y_diff = std::fabs(rep.y_full - sol.y_val);
  for (std::size_t x = 0; x < g.nx(); ++x)
    for (std::size_t y = 0; y < g.ny(); ++y) {
      const std::size_t d = circle_distance(x % kCircle, y % kCircle);
      if (d >= 3) rep.far_deviation = std::max(rep.far_deviation, 1.0 - r.value.at(x, y));
      if (d <= 1) rep.near_deviation = std::max(rep.near_deviation, r.value.at(x, y));
    }
  rep.residual = r.value.residual;
  rep.iterations = r.value.iterations;
  return rep;
}

}  // namespace psg
