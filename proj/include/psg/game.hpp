#pragma once

// Product stochastic games: player 1 moves on X with kernel p, player 2 moves
// on Y with kernel q, and player 1 receives u(x, y, a, b) in [0, 1].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psg {

/// Row-sum and range tolerance applied to user-supplied data.
inline constexpr double kInputTolerance = 1e-9;
/// Mass-conservation tolerance for internally propagated distributions.
inline constexpr double kPropagationTolerance = 1e-12;

enum class Player { one, two };

inline Player opponent(Player p) { return p == Player::one ? Player::two : Player::one; }

/// A point of a (discretized) compact action set. `params` carries the numeric
/// coordinates the action was generated from, e.g. (alpha, direction).
struct Action {
  std::string label;
  std::vector<double> params;
};

struct MixedAction {
  std::vector<double> weights;

  static MixedAction pure(std::size_t count, std::size_t index);
  static MixedAction uniform(std::size_t count);
  /// Uniform over the indices with mask[i] true.
  static MixedAction uniform_over(const std::vector<bool>& mask);

  std::size_t size() const { return weights.size(); }
  bool empty() const { return weights.empty(); }
  double operator[](std::size_t i) const { return weights[i]; }
  bool valid(double tol = kPropagationTolerance) const;
};

struct ProductGame {
  std::vector<std::string> x_states;
  std::vector<std::string> y_states;
  std::vector<Action> a_actions;
  std::vector<Action> b_actions;
  /// Dense rows: p[(x * |A| + a) * |X| + x'].
  std::vector<double> p;
  /// Dense rows: q[(y * |B| + b) * |Y| + y'].
  std::vector<double> q;
  /// u[((x * |Y| + y) * |A| + a) * |B| + b].
  std::vector<double> u;
  /// Optional per-state admissible actions, flat [x * |A| + a]; empty = all.
  std::vector<std::uint8_t> a_mask;
  /// Optional per-state admissible actions, flat [y * |B| + b]; empty = all.
  std::vector<std::uint8_t> b_mask;

  ProductGame() = default;
  /// Allocates zero kernels and a zero payoff tensor for the given labels.
  ProductGame(std::vector<std::string> xs, std::vector<std::string> ys, std::vector<Action> as,
              std::vector<Action> bs);

  std::size_t nx() const { return x_states.size(); }
  std::size_t ny() const { return y_states.size(); }
  std::size_t na() const { return a_actions.size(); }
  std::size_t nb() const { return b_actions.size(); }
  std::size_t joint_count() const { return nx() * ny(); }
  std::size_t joint(std::size_t x, std::size_t y) const { return x * ny() + y; }
  std::size_t joint_x(std::size_t s) const { return s / ny(); }
  std::size_t joint_y(std::size_t s) const { return s % ny(); }

  std::span<double> p_row(std::size_t x, std::size_t a) { return {p.data() + (x * na() + a) * nx(), nx()}; }
  std::span<const double> p_row(std::size_t x, std::size_t a) const {
    return {p.data() + (x * na() + a) * nx(), nx()};
  }
  std::span<double> q_row(std::size_t y, std::size_t b) { return {q.data() + (y * nb() + b) * ny(), ny()}; }
  std::span<const double> q_row(std::size_t y, std::size_t b) const {
    return {q.data() + (y * nb() + b) * ny(), ny()};
  }

  double& payoff(std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
    return u[((x * ny() + y) * na() + a) * nb() + b];
  }
  double payoff(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return u[((x * ny() + y) * na() + a) * nb() + b];
  }
  /// The |A| x |B| payoff matrix at joint state (x, y), row-major.
  std::span<const double> payoff_slice(std::size_t x, std::size_t y) const {
    return {u.data() + (x * ny() + y) * na() * nb(), na() * nb()};
  }

  bool a_allowed(std::size_t x, std::size_t a) const { return a_mask.empty() || a_mask[x * na() + a] != 0; }
  bool b_allowed(std::size_t y, std::size_t b) const { return b_mask.empty() || b_mask[y * nb() + b] != 0; }
  std::vector<std::size_t> allowed_a(std::size_t x) const;
  std::vector<std::size_t> allowed_b(std::size_t y) const;

  std::optional<std::size_t> x_index(std::string_view label) const;
  std::optional<std::size_t> y_index(std::string_view label) const;
  std::optional<std::size_t> a_index(std::string_view label) const;
  std::optional<std::size_t> b_index(std::string_view label) const;
};

struct ValidationIssue {
  enum class Kind { label, row_sum, negative_probability, payoff_range, shape, no_admissible_action };
  Kind kind;
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Lists every violated invariant. Rows of inadmissible actions are not checked.
ValidationReport validate_game(const ProductGame& game);

struct JointDistribution {
  std::vector<double> mass;  // indexed by ProductGame::joint(x, y)

  static JointDistribution point(const ProductGame& game, std::size_t x, std::size_t y);
  double total() const;
};

/// Per joint state mixed actions of both players; an empty entry means undefined.
struct StageProfile {
  std::vector<MixedAction> player1;
  std::vector<MixedAction> player2;
};

/// One step of the joint chain. Throws PreconditionError when a state carrying
/// mass has no profile entry.
JointDistribution evolve_distribution(const ProductGame& game, const JointDistribution& d,
                                      const StageProfile& profile);

/// Player-1 kernel marginal sum_a mu(a) p(.|x, a), written into out (size |X|).
void mixed_p_row(const ProductGame& game, std::size_t x, const MixedAction& mu, std::span<double> out);
/// Player-2 kernel marginal sum_b nu(b) q(.|y, b), written into out (size |Y|).
void mixed_q_row(const ProductGame& game, std::size_t y, const MixedAction& nu, std::span<double> out);
/// Expected stage payoff u(x, y, mu, nu).
double mixed_payoff(const ProductGame& game, std::size_t x, std::size_t y, const MixedAction& mu,
                    const MixedAction& nu);

/// One player's controlled chain, viewed on its own states.
struct SideKernel {
  std::size_t states = 0;
  std::size_t actions = 0;
  std::vector<double> prob;          // [(s * actions + a) * states + s']
  std::vector<std::uint8_t> mask;    // [s * actions + a]; empty = all admissible

  std::span<const double> row(std::size_t s, std::size_t a) const {
    return {prob.data() + (s * actions + a) * states, states};
  }
  bool allowed(std::size_t s, std::size_t a) const { return mask.empty() || mask[s * actions + a] != 0; }
};

SideKernel side_kernel(const ProductGame& game, Player side);

}  // namespace psg
