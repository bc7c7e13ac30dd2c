#include "psg/classification.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "psg/errors.hpp"
#include "psg/simd.hpp"

namespace psg {

std::string to_string(CommStatus status) {
  switch (status) {
    case CommStatus::holds:
      return "holds";
    case CommStatus::fails:
      return "fails";
    case CommStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

using Words = std::vector<std::uint64_t>;

class BitMatrix {
 public:
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  bool get(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U; }
  std::span<std::uint64_t> row(std::size_t i) { return {bits_.data() + i * words_, words_}; }
  std::span<const std::uint64_t> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }
  std::size_t words() const { return words_; }
  const Words& raw() const { return bits_; }

  bool all_set() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (!get(i, j)) return false;
    return true;
  }

  std::optional<std::pair<std::size_t, std::size_t>> first_missing() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (!get(i, j)) return std::make_pair(i, j);
    return std::nullopt;
  }

 private:
  std::size_t n_, words_;
  Words bits_;
};

// Supports of every admissible (state, action) row; actions[s] lists them.
struct Supports {
  std::vector<std::vector<std::size_t>> actions;
  std::vector<std::vector<std::vector<std::size_t>>> support;  // [s][k] for actions[s][k]
};

Supports supports_of(const SideKernel& k) {
  Supports sp;
  sp.actions.resize(k.states);
  sp.support.resize(k.states);
  for (std::size_t s = 0; s < k.states; ++s) {
    for (std::size_t a = 0; a < k.actions; ++a) {
      if (!k.allowed(s, a)) continue;
      std::vector<std::size_t> supp;
      const auto row = k.row(s, a);
      for (std::size_t t = 0; t < k.states; ++t)
        if (row[t] > 0.0) supp.push_back(t);
      sp.actions[s].push_back(a);
      sp.support[s].push_back(std::move(supp));
    }
  }
  return sp;
}

// Iterates prev -> next until an all-true matrix, a repeat, or the cap.
CommWitness iterate_reach(std::size_t n, const std::vector<std::vector<std::vector<std::size_t>>>& support,
                          std::size_t cap) {
  CommWitness w;
  if (n == 0) {
    w.status = CommStatus::holds;
    w.T = 1;
    return w;
  }
  BitMatrix prev = BitMatrix::identity(n);
  std::map<Words, std::size_t> seen;
  seen.emplace(prev.raw(), 0);
  Words acc(prev.words());
  for (std::size_t T = 1; T <= cap; ++T) {
    BitMatrix next(n);
    for (std::size_t s = 0; s < n; ++s) {
      auto out = next.row(s);
      bool first = true;
      for (const auto& supp : support[s]) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t t : supp) simd::or_into(acc, prev.row(t));
        if (first) {
          std::copy(acc.begin(), acc.end(), out.begin());
          first = false;
        } else {
          simd::and_into(out, acc);
        }
      }
    }
    w.steps = T;
    if (next.all_set()) {
      w.status = CommStatus::holds;
      w.T = T;
      return w;
    }
    if (!seen.emplace(next.raw(), T).second) {
      w.status = CommStatus::fails;
      w.failing_pair = next.first_missing();
      return w;
    }
    prev = std::move(next);
  }
  w.status = CommStatus::inconclusive;
  w.failing_pair = prev.first_missing();
  return w;
}

void require_kernel(const SideKernel& k) {
  if (k.prob.size() != k.states * k.actions * k.states) throw PreconditionError("kernel has wrong size");
  for (std::size_t s = 0; s < k.states; ++s) {
    bool any = false;
    for (std::size_t a = 0; a < k.actions; ++a) any = any || k.allowed(s, a);
    if (!any) throw PreconditionError("state " + std::to_string(s) + " has no admissible action");
  }
}

}  // namespace

CommWitness strong_comm(const SideKernel& kernel, std::size_t cap) {
  require_kernel(kernel);
  const Supports sp = supports_of(kernel);
  return iterate_reach(kernel.states, sp.support, cap);
}

CommWitness weak_comm(const SideKernel& kernel, std::size_t cap) {
  require_kernel(kernel);
  const Supports sp = supports_of(kernel);
  std::vector<std::vector<std::vector<std::size_t>>> unions(kernel.states);
  for (std::size_t s = 0; s < kernel.states; ++s) {
    std::vector<std::size_t> all;
    for (const auto& supp : sp.support[s]) all.insert(all.end(), supp.begin(), supp.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    unions[s].push_back(std::move(all));
  }
  CommWitness w = iterate_reach(kernel.states, unions, cap);
  if (w.holds()) {
    for (std::size_t s = 0; s < kernel.states; ++s) {
      std::vector<bool> mask(kernel.actions, false);
      for (std::size_t a : sp.actions[s]) mask[a] = true;
      w.witness_policy.push_back(MixedAction::uniform_over(mask));
    }
  }
  return w;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  struct Frame {
    std::size_t v;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_edge < adj[f.v].size()) {
        const std::size_t w = adj[f.v][f.next_edge++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return out;
}

Classification classify_states(const SideKernel& kernel) {
  require_kernel(kernel);
  const std::size_t n = kernel.states;
  const Supports sp = supports_of(kernel);
  // live[s][k]: action sp.actions[s][k] still keeps its support inside s's block.
  std::vector<std::vector<bool>> live(n);
  for (std::size_t s = 0; s < n; ++s) live[s].assign(sp.actions[s].size(), true);
  std::vector<int> block(n, 0);

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (block[s] < 0) continue;
      bool any = false;
      for (std::size_t k = 0; k < live[s].size(); ++k) {
        if (!live[s][k]) continue;
        const auto& supp = sp.support[s][k];
        const bool inside = std::all_of(supp.begin(), supp.end(), [&](std::size_t t) { return block[t] == block[s]; });
        if (!inside) {
          live[s][k] = false;
          changed = true;
        } else {
          any = true;
        }
      }
      if (!any) {
        block[s] = -1;
        changed = true;
      }
    }
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t s = 0; s < n; ++s) {
      if (block[s] < 0) continue;
      for (std::size_t k = 0; k < live[s].size(); ++k)
        if (live[s][k])
          for (std::size_t t : sp.support[s][k])
            if (block[t] >= 0) adj[s].push_back(t);
    }
    const auto sccs = strongly_connected_components(adj);
    std::vector<int> fresh(n, -1);
    int id = 0;
    for (const auto& comp : sccs) {
      if (block[comp.front()] < 0) continue;
      for (std::size_t s : comp) fresh[s] = id;
      ++id;
    }
    // A split of any block invalidates actions that crossed the new boundary.
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t)
        if (block[s] >= 0 && block[t] >= 0 && (block[s] == block[t]) != (fresh[s] == fresh[t])) changed = true;
    block = std::move(fresh);
  }

  Classification c;
  c.label.assign(n, -1);
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t s = 0; s < n; ++s) {
    if (block[s] < 0)
      c.transient.push_back(s);
    else
      groups[block[s]].push_back(s);
  }
  for (auto& [id, members] : groups) c.components.push_back(std::move(members));
  std::sort(c.components.begin(), c.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    std::vector<MixedAction> policy(n);
    for (std::size_t s : c.components[i]) {
      c.label[s] = static_cast<int>(i);
      std::vector<bool> mask(kernel.actions, false);
      for (std::size_t k = 0; k < live[s].size(); ++k)
        if (live[s][k]) mask[sp.actions[s][k]] = true;
      policy[s] = MixedAction::uniform_over(mask);
    }
    c.policies.push_back(std::move(policy));
  }
  return c;
}

bool is_recurrent_class(const SideKernel& kernel, const std::vector<MixedAction>& policy,
                        const std::vector<std::size_t>& members) {
  if (members.empty()) return false;
  std::vector<int> local(kernel.states, -1);
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);
  std::vector<std::vector<std::size_t>> adj(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::size_t s = members[i];
    if (s >= policy.size() || policy[s].size() != kernel.actions) return false;
    for (std::size_t a = 0; a < kernel.actions; ++a) {
      if (policy[s][a] <= 0.0) continue;
      if (!kernel.allowed(s, a)) return false;
      const auto row = kernel.row(s, a);
      for (std::size_t t = 0; t < kernel.states; ++t) {
        if (row[t] <= 0.0) continue;
        if (local[t] < 0) return false;
        adj[i].push_back(static_cast<std::size_t>(local[t]));
      }
    }
  }
  return strongly_connected_components(adj).size() == 1;
}

JointClassification joint_classification(const ProductGame& game, Player strong_side) {
  const SideKernel strong = side_kernel(game, strong_side);
  const CommWitness w = strong_comm(strong);
  if (!w.holds())
    throw PreconditionError("strong communication does not hold for player " +
                            std::string(strong_side == Player::one ? "1" : "2") + " (" + to_string(w.status) + ")");
  const SideKernel other_kernel = side_kernel(game, opponent(strong_side));

  JointClassification jc;
  jc.strong_side = strong_side;
  jc.other = classify_states(other_kernel);
  auto joint_of = [&](std::size_t strong_state, std::size_t other_state) {
    return strong_side == Player::one ? game.joint(strong_state, other_state) : game.joint(other_state, strong_state);
  };

  // Joint kernel under (uniform on the strong side, component policy on the other).
  std::vector<MixedAction> strong_policy(strong.states);
  for (std::size_t s = 0; s < strong.states; ++s) {
    std::vector<bool> mask(strong.actions);
    for (std::size_t a = 0; a < strong.actions; ++a) mask[a] = strong.allowed(s, a);
    strong_policy[s] = MixedAction::uniform_over(mask);
  }
  std::vector<double> srow(strong.states), orow(other_kernel.states);
  auto marginal = [](const SideKernel& k, std::size_t s, const MixedAction& m, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t a = 0; a < k.actions; ++a)
      if (m[a] > 0.0) simd::axpy(m[a], k.row(s, a), out);
  };

  for (std::size_t i = 0; i < jc.other.count(); ++i) {
    const auto& comp = jc.other.components[i];
    std::vector<std::size_t> joint;
    for (std::size_t xs = 0; xs < strong.states; ++xs)
      for (std::size_t o : comp) joint.push_back(joint_of(xs, o));
    std::sort(joint.begin(), joint.end());

    // Graph check on the product chain restricted to the component.
    std::vector<int> local(game.joint_count(), -1);
    for (std::size_t k = 0; k < joint.size(); ++k) local[joint[k]] = static_cast<int>(k);
    std::vector<std::vector<std::size_t>> adj(joint.size());
    bool closed = true;
    for (std::size_t xs = 0; xs < strong.states && closed; ++xs) {
      marginal(strong, xs, strong_policy[xs], srow);
      for (std::size_t o : comp) {
        marginal(other_kernel, o, jc.other.policies[i][o], orow);
        const int from = local[joint_of(xs, o)];
        for (std::size_t xs2 = 0; xs2 < strong.states; ++xs2) {
          if (srow[xs2] <= 0.0) continue;
          for (std::size_t o2 = 0; o2 < other_kernel.states; ++o2) {
            if (orow[o2] <= 0.0) continue;
            const int to = local[joint_of(xs2, o2)];
            if (to < 0) {
              closed = false;
              continue;
            }
            adj[static_cast<std::size_t>(from)].push_back(static_cast<std::size_t>(to));
          }
        }
      }
    }
    jc.verified.push_back(closed && strongly_connected_components(adj).size() == 1);
    jc.components.push_back(std::move(joint));
  }
  for (std::size_t xs = 0; xs < strong.states; ++xs)
    for (std::size_t o : jc.other.transient) jc.transient.push_back(joint_of(xs, o));
  std::sort(jc.transient.begin(), jc.transient.end());
  return jc;
}

}  // namespace psg
