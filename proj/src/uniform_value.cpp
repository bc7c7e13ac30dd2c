#include "psg/uniform_value.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "psg/errors.hpp"
#include "psg/game_io.hpp"
#include "psg/lp.hpp"
#include "psg/simd.hpp"

namespace psg {

ComponentGame restrict_component(const ProductGame& game, const std::vector<std::size_t>& component) {
  if (component.empty()) throw PreconditionError("component is empty");
  std::vector<int> local(game.ny(), -1);
  for (std::size_t i = 0; i < component.size(); ++i) {
    const std::size_t y = component[i];
    if (y >= game.ny() || local[y] >= 0) throw PreconditionError("component lists an invalid or repeated state");
    local[y] = static_cast<int>(i);
  }
  std::vector<std::string> ys;
  for (std::size_t y : component) ys.push_back(game.y_states[y]);
  ComponentGame cg{ProductGame(game.x_states, ys, game.a_actions, game.b_actions), component};
  ProductGame& g = cg.game;
  g.p = game.p;
  g.a_mask = game.a_mask;
  g.b_mask.assign(g.ny() * g.nb(), 0);
  for (std::size_t i = 0; i < component.size(); ++i) {
    const std::size_t y = component[i];
    bool any = false;
    for (std::size_t b = 0; b < game.nb(); ++b) {
      const auto row = game.q_row(y, b);
      double inside = 0.0, outside = 0.0;
      for (std::size_t t = 0; t < game.ny(); ++t) {
        if (row[t] == 0.0) continue;
        if (local[t] >= 0)
          inside += row[t];
        else
          outside += row[t];
        if (local[t] >= 0) g.q_row(i, b)[static_cast<std::size_t>(local[t])] = row[t];
      }
      const bool keep = game.b_allowed(y, b) && outside == 0.0 && std::fabs(inside - 1.0) <= kInputTolerance;
      g.b_mask[i * g.nb() + b] = keep ? 1 : 0;
      any = any || keep;
    }
    if (!any) throw PreconditionError("no action keeps state '" + game.y_states[y] + "' inside the component");
  }
  for (std::size_t x = 0; x < g.nx(); ++x)
    for (std::size_t i = 0; i < component.size(); ++i)
      for (std::size_t a = 0; a < g.na(); ++a)
        for (std::size_t b = 0; b < g.nb(); ++b) g.payoff(x, i, a, b) = game.payoff(x, component[i], a, b);
  return cg;
}

namespace {

double span_of(const ValueTable& v) { return v.max() - v.min(); }

// Lazily extended n-stage recursion on one component game.
class StageRun {
 public:
  explicit StageRun(const ProductGame& g) : game_(&g) {}

  const ValueTable& at(std::size_t n) {
    while (values_.size() < n) {
      const ValueTable prev = values_.empty() ? ValueTable::constant(*game_, 0.0) : values_.back();
      const double w = 1.0 / static_cast<double>(values_.size() + 1);
      values_.push_back(shapley_step(*game_, prev, w).next);
    }
    return values_[n - 1];
  }

  bool criterion(std::size_t n, double eps) {
    if (span_of(at(n)) > eps) return false;
    at(2 * n);
    return simd::max_abs_diff(values_[n - 1].values, values_[2 * n - 1].values) <= eps;
  }

  ComponentValue summary(std::size_t n) {
    ComponentValue c;
    at(2 * n);
    const ValueTable& vn = values_[n - 1];
    c.value = 0.5 * (vn.max() + vn.min());
    c.period = n;
    c.span = span_of(vn);
    c.lag_difference = simd::max_abs_diff(vn.values, values_[2 * n - 1].values);
    for (std::size_t k = 1; k <= 2 * n; ++k) c.span_history.push_back(span_of(at(k)));
    return c;
  }

 private:
  const ProductGame* game_;
  std::vector<ValueTable> values_;
};

std::size_t find_period(StageRun& run, double eps, std::size_t from, std::size_t max_horizon) {
  for (std::size_t n = std::max<std::size_t>(from, 1); 2 * n <= max_horizon; ++n)
    if (run.criterion(n, eps)) return n;
  const std::size_t last = std::max<std::size_t>(max_horizon / 2, 1);
  throw SolverError("component values did not settle within horizon " + std::to_string(max_horizon) +
                    ": span of v_" + std::to_string(last) + " is " + format_number(span_of(run.at(last))));
}

void check_strong(const ProductGame& g) {
  const CommWitness w = strong_comm(side_kernel(g, Player::one));
  if (!w.holds())
    throw PreconditionError("player 1 is not strongly communicating (" + to_string(w.status) + ")");
}

}  // namespace

std::pair<StrategyBundle, StrategyBundle> periodic_strategies(const ComponentGame& cg, std::size_t period) {
  NStageResult r = n_stage_values(cg.game, period, true);
  return {StrategyBundle::periodic(r.player1.tables()), StrategyBundle::periodic(r.player2.tables())};
}

ComponentValue component_uniform_value(const ComponentGame& cg, double eps, const ComponentValueOptions& opts) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (opts.check_hypothesis) check_strong(cg.game);
  StageRun run(cg.game);
  const std::size_t n = find_period(run, eps, 1, opts.max_horizon);
  ComponentValue c = run.summary(n);
  std::tie(c.player1, c.player2) = periodic_strategies(cg, n);
  return c;
}

AuxiliaryMdp build_mdp(const SideKernel& kernel, const Classification& classes,
                       const std::vector<double>& component_values) {
  if (component_values.size() != classes.count())
    throw PreconditionError("expected " + std::to_string(classes.count()) + " component values, got " +
                            std::to_string(component_values.size()));
  if (classes.label.size() != kernel.states) throw PreconditionError("classification does not match the kernel");
  AuxiliaryMdp mdp;
  mdp.kernel = kernel;
  mdp.classes = classes;
  mdp.g.assign(kernel.states, 0.5);
  for (std::size_t s = 0; s < kernel.states; ++s) {
    const int l = classes.label[s];
    if (l >= 0) mdp.g[s] = component_values[static_cast<std::size_t>(l)];
  }
  for (double v : mdp.g)
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("component values must lie in [0,1]");
  return mdp;
}

namespace {

// Long-run average cost of a stationary policy from every state, plus its
// recurrent classes.
std::vector<double> long_run_average(const SideKernel& k, const std::vector<MixedAction>& policy,
                                     const std::vector<double>& g, std::vector<std::vector<std::size_t>>& classes) {
  const std::size_t n = k.states;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < k.actions; ++a) {
      if (policy[s][a] <= 0.0) continue;
      const auto row = k.row(s, a);
      for (std::size_t t = 0; t < n; ++t)
        if (row[t] > 0.0) {
          p(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) += policy[s][a] * row[t];
          adj[s].push_back(t);
        }
    }
  const auto sccs = strongly_connected_components(adj);
  std::vector<int> scc_of(n, -1);
  for (std::size_t i = 0; i < sccs.size(); ++i)
    for (std::size_t s : sccs[i]) scc_of[s] = static_cast<int>(i);
  classes.clear();
  std::vector<double> avg(n, 0.0);
  std::vector<bool> recurrent(n, false);
  std::vector<double> class_cost;
  for (std::size_t i = 0; i < sccs.size(); ++i) {
    bool closed = true;
    for (std::size_t s : sccs[i])
      for (std::size_t t : adj[s]) closed = closed && scc_of[t] == static_cast<int>(i);
    if (!closed) continue;
    // Stationary distribution on the closed class.
    const auto& c = sccs[i];
    const auto m = static_cast<Eigen::Index>(c.size());
    Eigen::MatrixXd sys(m + 1, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index col = 0; col < m; ++col)
        sys(r, col) = p(static_cast<Eigen::Index>(c[static_cast<std::size_t>(col)]),
                        static_cast<Eigen::Index>(c[static_cast<std::size_t>(r)])) -
                      (r == col ? 1.0 : 0.0);
    sys.row(m).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs(m) = 1.0;
    const Eigen::VectorXd pi = sys.colPivHouseholderQr().solve(rhs);
    double cost = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) cost += pi(r) * g[c[static_cast<std::size_t>(r)]];
    for (std::size_t s : c) {
      avg[s] = cost;
      recurrent[s] = true;
    }
    classes.push_back(c);
    class_cost.push_back(cost);
  }
  std::vector<std::size_t> transient;
  for (std::size_t s = 0; s < n; ++s)
    if (!recurrent[s]) transient.push_back(s);
  if (!transient.empty()) {
    const auto m = static_cast<Eigen::Index>(transient.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto s = static_cast<Eigen::Index>(transient[static_cast<std::size_t>(r)]);
      for (Eigen::Index col = 0; col < m; ++col)
        a(r, col) -= p(s, static_cast<Eigen::Index>(transient[static_cast<std::size_t>(col)]));
      for (std::size_t t = 0; t < n; ++t)
        if (recurrent[t]) rhs(r) += p(s, static_cast<Eigen::Index>(t)) * avg[t];
    }
    const Eigen::VectorXd h = a.fullPivLu().solve(rhs);
    for (Eigen::Index r = 0; r < m; ++r) avg[transient[static_cast<std::size_t>(r)]] = h(r);
  }
  std::sort(classes.begin(), classes.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return avg;
}

}  // namespace

MdpSolution solve_mdp(const AuxiliaryMdp& mdp, double tol) {
  const SideKernel& k = mdp.kernel;
  const std::size_t n = k.states;
  if (mdp.g.size() != n || mdp.classes.label.size() != n) throw PreconditionError("mdp data has wrong size");

  LinearProgram lp;
  lp.cols = n;
  auto add_row = [&](const std::vector<double>& coeffs, double rhs) {
    lp.a.insert(lp.a.end(), coeffs.begin(), coeffs.end());
    lp.b.push_back(rhs);
    ++lp.rows;
  };
  std::vector<double> coeffs(n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t b = 0; b < k.actions; ++b) {
      if (!k.allowed(y, b)) continue;
      const auto row = k.row(y, b);
      for (std::size_t t = 0; t < n; ++t) coeffs[t] = -row[t];
      coeffs[y] += 1.0;
      add_row(coeffs, 0.0);
    }
  }
  for (std::size_t y = 0; y < n; ++y) {
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    coeffs[y] = 1.0;
    add_row(coeffs, mdp.classes.label[y] >= 0 ? mdp.g[y] : 1.0);
  }
  lp.c.assign(n, 1.0);
  const LpSolution sol = solve_lp(lp);

  MdpSolution out;
  out.w = sol.x;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  auto expect = [&](std::size_t y, std::size_t b) { return simd::dot(k.row(y, b), out.w); };
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t b = 0; b < k.actions; ++b)
      if (k.allowed(y, b)) best[y] = std::min(best[y], expect(y, b));

  const double slack = std::max(tol, 1e-12);
  out.stop.assign(n, false);
  for (std::size_t y = 0; y < n; ++y)
    out.stop[y] = mdp.classes.label[y] >= 0 && out.w[y] >= mdp.g[y] - slack;

  // Among optimal actions, move toward the stopping set by backward layers.
  out.policy.assign(n, MixedAction{});
  std::vector<bool> ranked = out.stop;
  for (std::size_t y = 0; y < n; ++y)
    if (out.stop[y]) out.policy[y] = mdp.classes.policies[static_cast<std::size_t>(mdp.classes.label[y])][y];
  for (bool progress = true; progress;) {
    progress = false;
    const std::vector<bool> layer = ranked;
    for (std::size_t y = 0; y < n; ++y) {
      if (layer[y]) continue;
      for (std::size_t b = 0; b < k.actions && !ranked[y]; ++b) {
        if (!k.allowed(y, b) || expect(y, b) > out.w[y] + slack) continue;
        const auto row = k.row(y, b);
        for (std::size_t t = 0; t < n; ++t)
          if (row[t] > 0.0 && layer[t]) {
            ranked[y] = true;
            out.policy[y] = MixedAction::pure(k.actions, b);
            progress = true;
            break;
          }
      }
    }
  }
  for (std::size_t y = 0; y < n; ++y)
    if (!ranked[y]) throw SolverError("no optimal action leads state " + std::to_string(y) + " to a stopping state");

  const auto avg = long_run_average(k, out.policy, mdp.g, out.recurrent_classes);
  for (std::size_t y = 0; y < n; ++y) {
    out.average_gap = std::max(out.average_gap, std::fabs(avg[y] - out.w[y]));
    const double stop_value = mdp.classes.label[y] >= 0 ? mdp.g[y] : std::numeric_limits<double>::infinity();
    out.bellman_gap = std::max(out.bellman_gap, std::fabs(out.w[y] - std::min(stop_value, best[y])));
  }
  if (out.average_gap > tol || out.bellman_gap > tol)
    throw SolverError("mdp certificate failed: average gap " + format_number(out.average_gap) + ", bellman gap " +
                      format_number(out.bellman_gap));
  return out;
}

ProductGame build_clock_game(const ProductGame& game, const Classification& y_classes, std::size_t period) {
  if (period == 0) throw PreconditionError("clock period must be at least 1");
  if (y_classes.label.size() != game.ny()) throw PreconditionError("classification does not match the game");
  const std::size_t ny = game.ny(), n0 = period;
  std::vector<std::string> ys;
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t t = 1; t <= n0; ++t) ys.push_back(game.y_states[y] + "@" + std::to_string(t));
  ProductGame g(game.x_states, ys, game.a_actions, game.b_actions);
  g.p = game.p;
  g.a_mask = game.a_mask;
  if (!game.b_mask.empty()) {
    g.b_mask.resize(g.ny() * g.nb());
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t t = 0; t < n0; ++t)
        for (std::size_t b = 0; b < g.nb(); ++b) g.b_mask[(y * n0 + t) * g.nb() + b] = game.b_mask[y * g.nb() + b];
  }
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t t = 0; t < n0; ++t)
      for (std::size_t b = 0; b < g.nb(); ++b) {
        const auto row = game.q_row(y, b);
        auto out = g.q_row(y * n0 + t, b);
        for (std::size_t y2 = 0; y2 < ny; ++y2) {
          if (row[y2] == 0.0) continue;
          const int c = y_classes.label[y];
          const bool same = c >= 0 && y_classes.label[y2] == c;
          const std::size_t t2 = same ? (t + 1) % n0 : 0;
          out[y2 * n0 + t2] += row[y2];
        }
      }
  for (std::size_t x = 0; x < g.nx(); ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t t = 0; t < n0; ++t)
        for (std::size_t a = 0; a < g.na(); ++a)
          for (std::size_t b = 0; b < g.nb(); ++b) g.payoff(x, y * n0 + t, a, b) = game.payoff(x, y, a, b);
  return g;
}

ProductGame swap_players(const ProductGame& game) {
  ProductGame g(game.y_states, game.x_states, game.b_actions, game.a_actions);
  g.p = game.q;
  g.q = game.p;
  g.a_mask = game.b_mask;
  g.b_mask = game.a_mask;
  for (std::size_t x = 0; x < game.nx(); ++x)
    for (std::size_t y = 0; y < game.ny(); ++y)
      for (std::size_t a = 0; a < game.na(); ++a)
        for (std::size_t b = 0; b < game.nb(); ++b) g.payoff(y, x, b, a) = 1.0 - game.payoff(x, y, a, b);
  return g;
}

namespace {

// Re-indexes a bundle from joint states of `swapped` to joint states of `game`.
StrategyBundle unswap_bundle(const ProductGame& game, const StrategyBundle& b) {
  const std::size_t n = game.joint_count();
  std::vector<std::size_t> to_swapped(n);
  for (std::size_t x = 0; x < game.nx(); ++x)
    for (std::size_t y = 0; y < game.ny(); ++y) to_swapped[game.joint(x, y)] = y * game.nx() + x;
  std::vector<std::vector<MixedAction>> tables(b.phase_count(), std::vector<MixedAction>(n));
  for (std::size_t ph = 0; ph < b.phase_count(); ++ph)
    for (std::size_t s = 0; s < n; ++s) tables[ph][s] = b.action(ph, to_swapped[s]);
  if (b.kind() != StrategyKind::controller) return b.with_tables(std::move(tables));
  std::vector<std::uint32_t> initial(n), next(b.phase_count() * n * n);
  for (std::size_t s = 0; s < n; ++s) initial[s] = static_cast<std::uint32_t>(b.initial_phase(to_swapped[s]));
  for (std::size_t ph = 0; ph < b.phase_count(); ++ph)
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t s2 = 0; s2 < n; ++s2)
        next[(ph * n + s) * n + s2] = static_cast<std::uint32_t>(b.advance(ph, to_swapped[s], to_swapped[s2]));
  return StrategyBundle::controller(std::move(tables), std::move(initial), std::move(next));
}

Theorem1Result pipeline(const ProductGame& game, double eps, const Theorem1Options& opts) {
  check_strong(game);
  Theorem1Result r;
  r.strong_side = Player::one;
  const SideKernel ykernel = side_kernel(game, Player::two);
  r.classes = classify_states(ykernel);
  const std::size_t L = r.classes.count();
  const std::size_t nx = game.nx(), ny = game.ny(), n = game.joint_count();

  std::vector<StageRun> runs;
  runs.reserve(L);
  for (const auto& comp : r.classes.components) r.components.push_back(restrict_component(game, comp));
  for (const auto& cg : r.components) runs.emplace_back(cg.game);
  std::size_t n0 = 1;
  for (auto& run : runs) {
    r.own_period.push_back(find_period(run, eps, 1, opts.component.max_horizon));
    n0 = std::max(n0, r.own_period.back());
  }
  // Smallest common N0 at which every component meets its stopping rule.
  for (;; ++n0) {
    if (2 * n0 > opts.component.max_horizon)
      throw SolverError("no common period within horizon " + std::to_string(opts.component.max_horizon));
    bool all = true;
    for (auto& run : runs) all = all && run.criterion(n0, eps);
    if (all) break;
  }
  r.period = n0;
  std::vector<double> values;
  for (std::size_t i = 0; i < L; ++i) {
    ComponentValue c = runs[i].summary(n0);
    std::tie(c.player1, c.player2) = periodic_strategies(r.components[i], n0);
    values.push_back(c.value);
    r.component_values.push_back(std::move(c));
  }

  r.mdp = build_mdp(ykernel, r.classes, values);
  r.mdp_solution = solve_mdp(r.mdp, opts.mdp_tol);
  r.w = r.mdp_solution.w;
  for (const auto& rc : r.mdp_solution.recurrent_classes) {
    const int l = r.classes.label[rc.front()];
    if (l < 0) throw SolverError("a recurrent class of the mdp policy lies outside every component");
    r.recurrent_component.push_back(static_cast<std::size_t>(l));
  }

  // Local index of each y inside its component.
  std::vector<std::size_t> local(ny, 0);
  for (const auto& comp : r.classes.components)
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
  auto local_joint = [&](std::size_t x, std::size_t y) {
    const auto& comp = r.classes.components[static_cast<std::size_t>(r.classes.label[y])];
    return x * comp.size() + local[y];
  };

  // Player 2: follow the mdp policy, then commit to the component strategy.
  std::vector<int> base(L, -1);
  std::size_t phases = 1;
  for (std::size_t c : r.recurrent_component)
    if (base[c] < 0) {
      base[c] = static_cast<int>(phases);
      phases += n0;
    }
  std::vector<int> commit(ny, -1);
  for (std::size_t i = 0; i < r.mdp_solution.recurrent_classes.size(); ++i)
    for (std::size_t y : r.mdp_solution.recurrent_classes[i]) commit[y] = base[r.recurrent_component[i]];
  {
    std::vector<std::vector<MixedAction>> tables(phases, std::vector<MixedAction>(n));
    for (std::size_t ph = 0; ph < phases; ++ph)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) tables[ph][game.joint(x, y)] = r.mdp_solution.policy[y];
    for (std::size_t c = 0; c < L; ++c) {
      if (base[c] < 0) continue;
      for (std::size_t t = 0; t < n0; ++t)
        for (std::size_t x = 0; x < nx; ++x)
          for (std::size_t y : r.classes.components[c])
            tables[static_cast<std::size_t>(base[c]) + t][game.joint(x, y)] =
                r.component_values[c].player2.action(t, local_joint(x, y));
    }
    std::vector<std::uint32_t> initial(n), next(phases * n * n);
    for (std::size_t s = 0; s < n; ++s) initial[s] = static_cast<std::uint32_t>(std::max(0, commit[game.joint_y(s)]));
    for (std::size_t ph = 0; ph < phases; ++ph)
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t s2 = 0; s2 < n; ++s2) {
          std::size_t to;
          if (ph == 0) {
            to = static_cast<std::size_t>(std::max(0, commit[game.joint_y(s2)]));
          } else {
            const std::size_t b0 = 1 + ((ph - 1) / n0) * n0;
            to = b0 + (ph - b0 + 1) % n0;
          }
          next[(ph * n + s) * n + s2] = static_cast<std::uint32_t>(to);
        }
    r.player2 = StrategyBundle::controller(std::move(tables), std::move(initial), std::move(next));
  }

  // Player 1: component strategies driven by a clock that resets on component changes.
  {
    std::vector<std::vector<MixedAction>> tables(n0, std::vector<MixedAction>(n));
    for (std::size_t t = 0; t < n0; ++t)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
          const int c = r.classes.label[y];
          tables[t][game.joint(x, y)] =
              c >= 0 ? r.component_values[static_cast<std::size_t>(c)].player1.action(t, local_joint(x, y))
                     : MixedAction::pure(game.na(), game.allowed_a(x).front());
        }
    std::vector<std::uint32_t> initial(n, 0), next(n0 * n * n);
    for (std::size_t t = 0; t < n0; ++t)
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t s2 = 0; s2 < n; ++s2) {
          const int c = r.classes.label[game.joint_y(s)];
          const bool same = c >= 0 && r.classes.label[game.joint_y(s2)] == c;
          next[(t * n + s) * n + s2] = static_cast<std::uint32_t>(same ? (t + 1) % n0 : 0);
        }
    r.player1 = StrategyBundle::controller(std::move(tables), std::move(initial), std::move(next));
  }
  return r;
}

}  // namespace

Theorem1Result theorem1_value(const ProductGame& game, double eps, const Theorem1Options& opts) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (auto report = validate_game(game); !report.ok()) throw PreconditionError("invalid game:\n" + report.to_string());
  if (opts.strong_side == Player::one) return pipeline(game, eps, opts);

  const ProductGame swapped = swap_players(game);
  Theorem1Result s = pipeline(swapped, eps, opts);
  Theorem1Result r = std::move(s);
  r.strong_side = Player::two;
  for (double& v : r.w) v = 1.0 - v;
  for (auto& c : r.component_values) c.value = 1.0 - c.value;
  StrategyBundle p1 = unswap_bundle(game, r.player2);
  StrategyBundle p2 = unswap_bundle(game, r.player1);
  r.player1 = std::move(p1);
  r.player2 = std::move(p2);
  return r;
}

double Theorem1Result::value_at(const ProductGame& game, std::size_t x, std::size_t y) const {
  (void)game;
  return strong_side == Player::one ? w.at(y) : w.at(x);
}

void write_component_csv(std::ostream& out, const ProductGame& game, const Theorem1Result& r) {
  const auto& labels = r.strong_side == Player::one ? game.y_states : game.x_states;
  out << "component,members,value,period,span,lag_difference\n";
  for (std::size_t i = 0; i < r.classes.count(); ++i) {
    std::string members;
    for (std::size_t s : r.classes.components[i]) members += (members.empty() ? "" : ";") + labels[s];
    const auto& c = r.component_values[i];
    out << i + 1 << ',' << members << ',' << format_number(c.value) << ',' << c.period << ','
        << format_number(c.span) << ',' << format_number(c.lag_difference) << '\n';
  }
}

void write_w_csv(std::ostream& out, const ProductGame& game, const Theorem1Result& r) {
  const bool one = r.strong_side == Player::one;
  const auto& labels = one ? game.y_states : game.x_states;
  const auto& actions = one ? game.b_actions : game.a_actions;
  out << "state,w,g,stop,policy_support\n";
  for (std::size_t s = 0; s < labels.size(); ++s) {
    std::string support;
    const MixedAction& m = r.mdp_solution.policy[s];
    for (std::size_t a = 0; a < m.size(); ++a)
      if (m[a] > 0.0) support += (support.empty() ? "" : ";") + actions[a].label;
    const double g = one ? r.mdp.g[s] : 1.0 - r.mdp.g[s];
    out << labels[s] << ',' << format_number(r.w[s]) << ',' << format_number(g) << ','
        << (r.mdp_solution.stop[s] ? 1 : 0) << ',' << support << '\n';
  }
}

}  // namespace psg
