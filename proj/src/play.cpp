#include "psg/play.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "psg/errors.hpp"

namespace psg {

namespace {

void require_playable(const ProductGame& game, const StrategyBundle& s1, const StrategyBundle& s2,
                      std::size_t horizon, JointState start) {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  if (start.x >= game.nx() || start.y >= game.ny()) throw PreconditionError("start state out of range");
  if (auto why = check_bundle(game, s1, Player::one); !why.empty())
    throw PreconditionError("player 1 strategy: " + why);
  if (auto why = check_bundle(game, s2, Player::two); !why.empty())
    throw PreconditionError("player 2 strategy: " + why);
}

struct Mass {
  std::uint64_t key;
  double mass;
};

}  // namespace

std::vector<double> expected_stage_payoffs(const ProductGame& game, const StrategyBundle& s1,
                                           const StrategyBundle& s2, std::size_t horizon, JointState start) {
  require_playable(game, s1, s2, horizon, start);
  const std::size_t nx = game.nx(), ny = game.ny();
  const std::uint64_t p1 = s1.phase_count(), p2 = s2.phase_count();
  auto encode = [&](std::size_t s, std::size_t ph1, std::size_t ph2) -> std::uint64_t {
    return (static_cast<std::uint64_t>(s) * p1 + ph1) * p2 + ph2;
  };

  const std::size_t s0 = game.joint(start.x, start.y);
  std::vector<Mass> current{{encode(s0, s1.initial_phase(s0), s2.initial_phase(s0)), 1.0}};
  std::vector<double> payoffs;
  payoffs.reserve(horizon);
  std::vector<double> px(nx), qy(ny);
  std::unordered_map<std::uint64_t, double> next;

  for (std::size_t n = 0; n < horizon; ++n) {
    double stage = 0.0;
    next.clear();
    const bool last = n + 1 == horizon;
    for (const auto& [key, m] : current) {
      const std::size_t ph2 = key % p2;
      const std::size_t ph1 = (key / p2) % p1;
      const std::size_t s = key / (p1 * p2);
      const std::size_t x = game.joint_x(s), y = game.joint_y(s);
      const MixedAction& mu = s1.action(ph1, s);
      const MixedAction& nu = s2.action(ph2, s);
      stage += m * mixed_payoff(game, x, y, mu, nu);
      if (last) continue;
      mixed_p_row(game, x, mu, px);
      mixed_q_row(game, y, nu, qy);
      for (std::size_t x2 = 0; x2 < nx; ++x2) {
        if (px[x2] == 0.0) continue;
        for (std::size_t y2 = 0; y2 < ny; ++y2) {
          if (qy[y2] == 0.0) continue;
          const std::size_t s_next = game.joint(x2, y2);
          next[encode(s_next, s1.advance(ph1, s, s_next), s2.advance(ph2, s, s_next))] += m * px[x2] * qy[y2];
        }
      }
    }
    payoffs.push_back(stage);
    if (last) break;
    current.clear();
    current.reserve(next.size());
    for (const auto& [key, m] : next) current.push_back({key, m});
    std::sort(current.begin(), current.end(), [](const Mass& a, const Mass& b) { return a.key < b.key; });
  }
  return payoffs;
}

double exact_n_stage_payoff(const ProductGame& game, const StrategyBundle& s1, const StrategyBundle& s2,
                            std::size_t horizon, JointState start) {
  const auto payoffs = expected_stage_payoffs(game, s1, s2, horizon, start);
  double total = 0.0;
  for (double v : payoffs) total += v;
  return total / static_cast<double>(horizon);
}

namespace {

std::size_t sample(std::span<const double> weights, double r) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (r < acc) return i;
  }
  return last_positive;
}

}  // namespace

Trajectory simulate_play(const ProductGame& game, const StrategyBundle& s1, const StrategyBundle& s2,
                         std::size_t horizon, JointState start, std::uint64_t seed) {
  require_playable(game, s1, s2, horizon, start);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Trajectory t;
  t.steps.reserve(horizon);
  std::size_t x = start.x, y = start.y;
  std::size_t s = game.joint(x, y);
  std::size_t ph1 = s1.initial_phase(s), ph2 = s2.initial_phase(s);
  double total = 0.0;
  for (std::size_t n = 0; n < horizon; ++n) {
    const std::size_t a = sample(s1.action(ph1, s).weights, unit(rng));
    const std::size_t b = sample(s2.action(ph2, s).weights, unit(rng));
    const double r = game.payoff(x, y, a, b);
    t.steps.push_back({x, y, a, b, r});
    total += r;
    const std::size_t x2 = sample(game.p_row(x, a), unit(rng));
    const std::size_t y2 = sample(game.q_row(y, b), unit(rng));
    const std::size_t s2_next = game.joint(x2, y2);
    ph1 = s1.advance(ph1, s, s2_next);
    ph2 = s2.advance(ph2, s, s2_next);
    x = x2;
    y = y2;
    s = s2_next;
  }
  t.average_payoff = total / static_cast<double>(horizon);
  return t;
}

}  // namespace psg
