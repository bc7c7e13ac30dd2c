#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psg/game.hpp"

namespace psg {

enum class CommStatus { holds, fails, inconclusive };

std::string to_string(CommStatus status);

struct CommWitness {
  CommStatus status = CommStatus::fails;
  /// Horizon at which the reachability predicate is all-true (when holds).
  std::size_t T = 0;
  /// Per-state mixed action (weak communication only).
  std::vector<MixedAction> witness_policy;
  /// A pair (s, s') that is not reached at the last examined horizon.
  std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
  /// Horizons examined before a verdict.
  std::size_t steps = 0;

  bool holds() const { return status == CommStatus::holds; }
};

inline constexpr std::size_t kCommHorizonCap = 4096;

/// Reach_T(s, s') = "P(S_T = s') > 0 under every policy", computed by
/// Reach_T(s) = AND_a OR_{s1 in supp p(.|s,a)} Reach_{T-1}(s1) from the identity.
/// Holds iff some T has every pair reachable. The sequence of boolean matrices
/// is eventually periodic; a repeat without success means fails.
CommWitness strong_comm(const SideKernel& kernel, std::size_t cap = kCommHorizonCap);

/// Boolean powers of the OR-graph (edge s -> s' iff some admissible action
/// charges s'). The witness policy mixes all admissible actions uniformly.
CommWitness weak_comm(const SideKernel& kernel, std::size_t cap = kCommHorizonCap);

struct Classification {
  std::vector<std::vector<std::size_t>> components;  // sorted, ordered by smallest member
  std::vector<std::size_t> transient;                // D, sorted
  /// policies[i][s] for every state s; only entries for members of C_i are
  /// meaningful (uniform over the actions that keep mass in C_i).
  std::vector<std::vector<MixedAction>> policies;
  /// label[s] = component index, or -1 for D.
  std::vector<int> label;

  std::size_t count() const { return components.size(); }
};

/// Maximal end components of the kernel: the maximal sets that are a
/// recurrent class under some stationary policy. Supports are strict (p > 0).
Classification classify_states(const SideKernel& kernel);

/// True iff `members` is closed under `policy` and strongly connected through
/// positive-probability edges.
bool is_recurrent_class(const SideKernel& kernel, const std::vector<MixedAction>& policy,
                        const std::vector<std::size_t>& members);

struct JointClassification {
  Player strong_side = Player::one;
  Classification other;                              // classification of the other side
  std::vector<std::vector<std::size_t>> components;  // joint states X x C_i (or C_i x Y)
  std::vector<std::size_t> transient;                // joint states over D
  std::vector<bool> verified;                        // recurrence check per component
};

/// Throws PreconditionError if strong_comm does not hold on `strong_side`.
JointClassification joint_classification(const ProductGame& game, Player strong_side);

/// Strongly connected components (Tarjan) of a graph given by adjacency lists.
std::vector<std::vector<std::size_t>> strongly_connected_components(const std::vector<std::vector<std::size_t>>& adj);

}  // namespace psg
