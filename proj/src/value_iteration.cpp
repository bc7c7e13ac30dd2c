#include "psg/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "psg/errors.hpp"
#include "psg/parallel.hpp"
#include "psg/simd.hpp"

namespace psg {

ValueTable ValueTable::constant(const ProductGame& game, double c) {
  ValueTable v;
  v.nx = game.nx();
  v.ny = game.ny();
  v.values.assign(game.joint_count(), c);
  return v;
}

double ValueTable::min() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }
double ValueTable::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

namespace {

// Nonzero entries of every kernel row.
struct SparseRows {
  std::vector<std::uint32_t> start;
  std::vector<std::uint32_t> index;
  std::vector<double> prob;

  SparseRows(std::span<const double> dense, std::size_t rows, std::size_t width) {
    start.reserve(rows + 1);
    start.push_back(0);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < width; ++k) {
        const double v = dense[r * width + k];
        if (v != 0.0) {
          index.push_back(static_cast<std::uint32_t>(k));
          prob.push_back(v);
        }
      }
      start.push_back(static_cast<std::uint32_t>(index.size()));
    }
  }
};

class LocalBuilder {
 public:
  explicit LocalBuilder(const ProductGame& game)
      : game_(game), p_(game.p, game.nx() * game.na(), game.nx()), q_(game.q, game.ny() * game.nb(), game.ny()) {
    rows_.resize(game.nx());
    cols_.resize(game.ny());
    for (std::size_t x = 0; x < game.nx(); ++x) rows_[x] = game.allowed_a(x);
    for (std::size_t y = 0; y < game.ny(); ++y) cols_[y] = game.allowed_b(y);
  }

  const std::vector<std::size_t>& rows(std::size_t x) const { return rows_[x]; }
  const std::vector<std::size_t>& cols(std::size_t y) const { return cols_[y]; }

  // vt is v transposed: vt[y * nx + x].
  MatrixGame build(std::span<const double> vt, std::size_t x, std::size_t y, double w) const {
    const std::size_t nx = game_.nx(), nb = game_.nb();
    const auto& ra = rows_[x];
    const auto& cb = cols_[y];
    MatrixGame m(ra.size(), cb.size());
    const auto slice = game_.payoff_slice(x, y);
    for (std::size_t i = 0; i < ra.size(); ++i)
      for (std::size_t j = 0; j < cb.size(); ++j) m.at(i, j) = w * slice[ra[i] * nb + cb[j]];
    if (w == 1.0) return m;

    // qvt[x' * |cols| + j] = sum_y' q(y'|y,b_j) v(x', y')
    std::vector<double> qv(cb.size() * nx, 0.0);
    for (std::size_t j = 0; j < cb.size(); ++j) {
      const std::size_t r = y * nb + cb[j];
      for (std::uint32_t k = q_.start[r]; k < q_.start[r + 1]; ++k)
        simd::axpy(q_.prob[k], vt.subspan(q_.index[k] * nx, nx), std::span<double>(qv.data() + j * nx, nx));
    }
    std::vector<double> qvt(nx * cb.size());
    for (std::size_t j = 0; j < cb.size(); ++j)
      for (std::size_t x2 = 0; x2 < nx; ++x2) qvt[x2 * cb.size() + j] = qv[j * nx + x2];

    const double cont = 1.0 - w;
    for (std::size_t i = 0; i < ra.size(); ++i) {
      const std::size_t r = x * game_.na() + ra[i];
      std::span<double> out(m.m.data() + i * cb.size(), cb.size());
      for (std::uint32_t k = p_.start[r]; k < p_.start[r + 1]; ++k)
        simd::axpy(cont * p_.prob[k], std::span<const double>(qvt.data() + p_.index[k] * cb.size(), cb.size()),
                   out);
    }
    return m;
  }

 private:
  const ProductGame& game_;
  SparseRows p_, q_;
  std::vector<std::vector<std::size_t>> rows_, cols_;
};

std::vector<double> transpose_values(const ValueTable& v) {
  std::vector<double> vt(v.values.size());
  for (std::size_t x = 0; x < v.nx; ++x)
    for (std::size_t y = 0; y < v.ny; ++y) vt[y * v.nx + x] = v.at(x, y);
  return vt;
}

MixedAction expand(const MixedAction& local, const std::vector<std::size_t>& index, std::size_t full) {
  MixedAction m{std::vector<double>(full, 0.0)};
  for (std::size_t i = 0; i < index.size(); ++i) m.weights[index[i]] = local[i];
  return m;
}

void require_table(const ProductGame& game, const ValueTable& v) {
  if (v.nx != game.nx() || v.ny != game.ny() || v.values.size() != game.joint_count())
    throw PreconditionError("value table does not match the game");
}

ShapleyResult step_with(const ProductGame& game, const LocalBuilder& builder, const ValueTable& v, double w,
                        bool keep_strategies) {
  const std::size_t n = game.joint_count();
  const auto vt = transpose_values(v);
  ShapleyResult out;
  out.next = ValueTable::constant(game, 0.0);
  if (keep_strategies) {
    out.player1.resize(n);
    out.player2.resize(n);
  }
  std::vector<double> gaps(n, 0.0);
  parallel_for(n, [&](std::size_t s) {
    const std::size_t x = game.joint_x(s), y = game.joint_y(s);
    const MatrixGame m = builder.build(vt, x, y, w);
    MinimaxSolution sol = solve_matrix_game(m);
    out.next.values[s] = sol.value;
    gaps[s] = sol.gap;
    if (keep_strategies) {
      out.player1[s] = expand(sol.row, builder.rows(x), game.na());
      out.player2[s] = expand(sol.col, builder.cols(y), game.nb());
    }
  });
  out.max_gap = *std::max_element(gaps.begin(), gaps.end());
  out.next.residual = simd::max_abs_diff(out.next.values, v.values);
  return out;
}

}  // namespace

MatrixGame local_matrix(const ProductGame& game, const ValueTable& v, std::size_t x, std::size_t y, double w) {
  require_table(game, v);
  if (!(w >= 0.0 && w <= 1.0)) throw PreconditionError("stage weight must lie in [0,1]");
  LocalBuilder builder(game);
  return builder.build(transpose_values(v), x, y, w);
}

ShapleyResult shapley_step(const ProductGame& game, const ValueTable& v, double w) {
  require_table(game, v);
  if (!(w >= 0.0 && w <= 1.0)) throw PreconditionError("stage weight must lie in [0,1]");
  LocalBuilder builder(game);
  return step_with(game, builder, v, w, true);
}

NStageResult n_stage_values(const ProductGame& game, std::size_t horizon, bool keep_strategies) {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  LocalBuilder builder(game);
  NStageResult out;
  out.values.reserve(horizon);
  std::vector<std::vector<MixedAction>> t1, t2;
  ValueTable v = ValueTable::constant(game, 0.0);
  for (std::size_t k = 1; k <= horizon; ++k) {
    ShapleyResult step = step_with(game, builder, v, 1.0 / static_cast<double>(k), keep_strategies);
    step.next.iterations = k;
    v = step.next;
    out.values.push_back(v);
    if (keep_strategies) {
      t1.push_back(std::move(step.player1));
      t2.push_back(std::move(step.player2));
    }
  }
  if (keep_strategies) {
    // Stage n of the N-stage game plays the level N - n + 1 solution.
    std::reverse(t1.begin(), t1.end());
    std::reverse(t2.begin(), t2.end());
    out.player1 = StrategyBundle::markov(std::move(t1));
    out.player2 = StrategyBundle::markov(std::move(t2));
  }
  return out;
}

DiscountResult discounted_value(const ProductGame& game, const DiscountConfig& cfg) {
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) throw PreconditionError("discount factor must lie in (0,1]");
  if (!(cfg.tol > 0.0)) throw PreconditionError("tolerance must be positive");
  LocalBuilder builder(game);
  const double lambda = cfg.lambda;
  ValueTable v = ValueTable::constant(game, 0.0);
  DiscountResult out;
  for (std::size_t it = 1;; ++it) {
    ShapleyResult step = step_with(game, builder, v, lambda, false);
    out.max_gap = std::max(out.max_gap, step.max_gap);
    v = std::move(step.next);
    v.iterations = it;
    v.error_bound = v.residual * (1.0 - lambda) / lambda;
    if ((1.0 - lambda) * v.residual <= cfg.tol) break;
    if (it >= cfg.max_iterations) {
      throw SolverError("discounted value iteration did not converge in " + std::to_string(it) +
                        " iterations (residual " + std::to_string(v.residual) + ")");
    }
  }
  ShapleyResult final_step = step_with(game, builder, v, lambda, true);
  out.max_gap = std::max(out.max_gap, final_step.max_gap);
  out.value = std::move(v);
  out.player1 = StrategyBundle::stationary(std::move(final_step.player1));
  out.player2 = StrategyBundle::stationary(std::move(final_step.player2));
  return out;
}

namespace {

// The free player's MDP on (joint state, fixed-bundle phase).
struct AugmentedMdp {
  std::size_t phases = 1;
  std::size_t free_actions = 0;
  bool maximize = true;
  // Per node (s * phases + ph): choices [choice_start[node], choice_start[node+1]).
  std::vector<std::uint32_t> choice_start;
  std::vector<std::uint32_t> choice_action;
  std::vector<double> choice_reward;
  // Per choice: transitions [trans_start[c], trans_start[c+1]).
  std::vector<std::uint32_t> trans_start;
  std::vector<std::uint32_t> trans_target;
  std::vector<double> trans_prob;

  std::size_t nodes() const { return choice_start.size() - 1; }
};

AugmentedMdp build_augmented(const ProductGame& game, const StrategyBundle& fixed, Player fixed_player) {
  if (auto why = check_bundle(game, fixed, fixed_player); !why.empty())
    throw PreconditionError("fixed strategy: " + why);
  const std::size_t nx = game.nx(), ny = game.ny();
  AugmentedMdp mdp;
  mdp.phases = fixed.phase_count();
  mdp.maximize = fixed_player == Player::two;
  mdp.free_actions = fixed_player == Player::one ? game.nb() : game.na();
  mdp.choice_start.push_back(0);
  mdp.trans_start.push_back(0);
  std::vector<double> other;
  for (std::size_t s = 0; s < game.joint_count(); ++s) {
    const std::size_t x = game.joint_x(s), y = game.joint_y(s);
    for (std::size_t ph = 0; ph < mdp.phases; ++ph) {
      const MixedAction& m = fixed.action(ph, s);
      if (fixed_player == Player::one) {
        other.assign(nx, 0.0);
        mixed_p_row(game, x, m, other);
      } else {
        other.assign(ny, 0.0);
        mixed_q_row(game, y, m, other);
      }
      for (std::size_t c = 0; c < mdp.free_actions; ++c) {
        const bool allowed = fixed_player == Player::one ? game.b_allowed(y, c) : game.a_allowed(x, c);
        if (!allowed) continue;
        const MixedAction pure = MixedAction::pure(mdp.free_actions, c);
        const double r = fixed_player == Player::one ? mixed_payoff(game, x, y, m, pure)
                                                     : mixed_payoff(game, x, y, pure, m);
        const auto own = fixed_player == Player::one ? game.q_row(y, c) : game.p_row(x, c);
        for (std::size_t o = 0; o < other.size(); ++o) {
          if (other[o] == 0.0) continue;
          for (std::size_t f = 0; f < own.size(); ++f) {
            if (own[f] == 0.0) continue;
            const std::size_t s2 = fixed_player == Player::one ? game.joint(o, f) : game.joint(f, o);
            const std::size_t ph2 = fixed.advance(ph, s, s2);
            mdp.trans_target.push_back(static_cast<std::uint32_t>(s2 * mdp.phases + ph2));
            mdp.trans_prob.push_back(other[o] * own[f]);
          }
        }
        mdp.choice_action.push_back(static_cast<std::uint32_t>(c));
        mdp.choice_reward.push_back(r);
        mdp.trans_start.push_back(static_cast<std::uint32_t>(mdp.trans_target.size()));
      }
      mdp.choice_start.push_back(static_cast<std::uint32_t>(mdp.choice_action.size()));
    }
  }
  return mdp;
}

// One Bellman sweep: out[node] = opt_c [wr * r + wc * sum p V]. Returns argopt choices.
void bellman(const AugmentedMdp& mdp, std::span<const double> v, double wr, double wc, std::span<double> out,
             std::vector<std::uint32_t>* best) {
  for (std::size_t node = 0; node < mdp.nodes(); ++node) {
    double best_val = mdp.maximize ? -std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::infinity();
    std::uint32_t best_choice = mdp.choice_start[node];
    for (std::uint32_t c = mdp.choice_start[node]; c < mdp.choice_start[node + 1]; ++c) {
      double cont = 0.0;
      for (std::uint32_t t = mdp.trans_start[c]; t < mdp.trans_start[c + 1]; ++t)
        cont += mdp.trans_prob[t] * v[mdp.trans_target[t]];
      const double val = wr * mdp.choice_reward[c] + wc * cont;
      const double margin = 1e-13 * std::max(1.0, std::fabs(val));
      if (mdp.maximize ? val > best_val + margin : val < best_val - margin) {
        best_val = val;
        best_choice = c;
      }
    }
    out[node] = best_val;
    if (best) (*best)[node] = best_choice;
  }
}

}  // namespace

BestResponse stationary_best_response(const ProductGame& game, const StrategyBundle& fixed, Player fixed_player,
                                      const DiscountConfig& cfg) {
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) throw PreconditionError("discount factor must lie in (0,1]");
  const AugmentedMdp mdp = build_augmented(game, fixed, fixed_player);
  const double lambda = cfg.lambda;
  std::vector<double> v(mdp.nodes(), 0.0), next(mdp.nodes(), 0.0);
  BestResponse out;
  out.phases = mdp.phases;
  for (std::size_t it = 1;; ++it) {
    bellman(mdp, v, lambda, 1.0 - lambda, next, nullptr);
    out.residual = simd::max_abs_diff(next, v);
    v.swap(next);
    out.iterations = it;
    if ((1.0 - lambda) * out.residual <= cfg.tol) break;
    if (it >= cfg.max_iterations)
      throw SolverError("best-response value iteration did not converge (residual " +
                        std::to_string(out.residual) + ")");
  }
  std::vector<std::uint32_t> best(mdp.nodes());
  bellman(mdp, v, lambda, 1.0 - lambda, next, &best);
  std::vector<std::vector<MixedAction>> tables(mdp.phases, std::vector<MixedAction>(game.joint_count()));
  for (std::size_t s = 0; s < game.joint_count(); ++s)
    for (std::size_t ph = 0; ph < mdp.phases; ++ph)
      tables[ph][s] = MixedAction::pure(mdp.free_actions, mdp.choice_action[best[s * mdp.phases + ph]]);
  out.response = fixed.with_tables(std::move(tables));
  out.value = std::move(v);
  return out;
}

double horizon_best_response_value(const ProductGame& game, const StrategyBundle& fixed, Player fixed_player,
                                   std::size_t horizon, std::size_t x, std::size_t y) {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  if (x >= game.nx() || y >= game.ny()) throw PreconditionError("start state out of range");
  const AugmentedMdp mdp = build_augmented(game, fixed, fixed_player);
  // Markov fixed bundles hold their last table, so backward induction on
  // (state, phase) is exact for every kind.
  std::vector<double> v(mdp.nodes(), 0.0), next(mdp.nodes(), 0.0);
  for (std::size_t k = 0; k < horizon; ++k) {
    bellman(mdp, v, 1.0, 1.0, next, nullptr);
    v.swap(next);
  }
  const std::size_t s = game.joint(x, y);
  return v[s * mdp.phases + fixed.initial_phase(s)] / static_cast<double>(horizon);
}

}  // namespace psg
