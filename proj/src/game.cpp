#include "psg/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "psg/errors.hpp"
#include "psg/simd.hpp"

namespace psg {

MixedAction MixedAction::pure(std::size_t count, std::size_t index) {
  MixedAction m{std::vector<double>(count, 0.0)};
  m.weights.at(index) = 1.0;
  return m;
}

MixedAction MixedAction::uniform(std::size_t count) {
  return MixedAction{std::vector<double>(count, 1.0 / static_cast<double>(count))};
}

MixedAction MixedAction::uniform_over(const std::vector<bool>& mask) {
  const auto k = static_cast<double>(std::count(mask.begin(), mask.end(), true));
  MixedAction m{std::vector<double>(mask.size(), 0.0)};
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) m.weights[i] = 1.0 / k;
  return m;
}

bool MixedAction::valid(double tol) const {
  if (weights.empty()) return false;
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) return false;
    total += w;
  }
  return std::fabs(total - 1.0) <= tol;
}

ProductGame::ProductGame(std::vector<std::string> xs, std::vector<std::string> ys, std::vector<Action> as,
                         std::vector<Action> bs)
    : x_states(std::move(xs)), y_states(std::move(ys)), a_actions(std::move(as)), b_actions(std::move(bs)) {
  p.assign(nx() * na() * nx(), 0.0);
  q.assign(ny() * nb() * ny(), 0.0);
  u.assign(nx() * ny() * na() * nb(), 0.0);
}

std::vector<std::size_t> ProductGame::allowed_a(std::size_t x) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < na(); ++a)
    if (a_allowed(x, a)) out.push_back(a);
  return out;
}

std::vector<std::size_t> ProductGame::allowed_b(std::size_t y) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < nb(); ++b)
    if (b_allowed(y, b)) out.push_back(b);
  return out;
}

namespace {

template <typename T, typename Key>
std::optional<std::size_t> find_label(const std::vector<T>& items, std::string_view label, Key key) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (key(items[i]) == label) return i;
  return std::nullopt;
}

const std::string& self(const std::string& s) { return s; }
const std::string& action_label(const Action& a) { return a.label; }

void check_unique(const std::vector<std::string>& labels, const char* what, ValidationReport& report) {
  std::set<std::string_view> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      report.issues.push_back({ValidationIssue::Kind::label, what, "duplicate label '" + l + "'"});
    }
  }
  if (labels.empty()) report.issues.push_back({ValidationIssue::Kind::shape, what, "empty list"});
}

std::vector<std::string> labels_of(const std::vector<Action>& actions) {
  std::vector<std::string> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(a.label);
  return out;
}

void check_rows(std::span<const double> data, std::size_t states, std::size_t actions,
                const std::vector<std::string>& state_labels, const std::vector<Action>& action_labels,
                const std::vector<std::uint8_t>& mask, const char* kernel, ValidationReport& report) {
  for (std::size_t s = 0; s < states; ++s) {
    bool any_allowed = false;
    for (std::size_t a = 0; a < actions; ++a) {
      if (!mask.empty() && mask[s * actions + a] == 0) continue;
      any_allowed = true;
      const auto row = data.subspan((s * actions + a) * states, states);
      const std::string where = std::string(kernel) + "(" + state_labels[s] + ", " + action_labels[a].label + ")";
      double total = 0.0;
      bool negative = false;
      for (double v : row) {
        if (v < 0.0 || !std::isfinite(v)) negative = true;
        total += v;
      }
      if (negative) {
        report.issues.push_back(
            {ValidationIssue::Kind::negative_probability, where, "negative or non-finite probability"});
      }
      if (std::fabs(total - 1.0) > kInputTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "row sums to " << total;
        report.issues.push_back({ValidationIssue::Kind::row_sum, where, msg.str()});
      }
    }
    if (!any_allowed) {
      report.issues.push_back({ValidationIssue::Kind::no_admissible_action,
                               std::string(kernel) + "(" + state_labels[s] + ")", "no admissible action"});
    }
  }
}

}  // namespace

std::optional<std::size_t> ProductGame::x_index(std::string_view label) const {
  return find_label(x_states, label, self);
}
std::optional<std::size_t> ProductGame::y_index(std::string_view label) const {
  return find_label(y_states, label, self);
}
std::optional<std::size_t> ProductGame::a_index(std::string_view label) const {
  return find_label(a_actions, label, action_label);
}
std::optional<std::size_t> ProductGame::b_index(std::string_view label) const {
  return find_label(b_actions, label, action_label);
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) out << issue.location << ": " << issue.message << '\n';
  return out.str();
}

ValidationReport validate_game(const ProductGame& game) {
  ValidationReport report;
  check_unique(game.x_states, "x_states", report);
  check_unique(game.y_states, "y_states", report);
  check_unique(labels_of(game.a_actions), "a_actions", report);
  check_unique(labels_of(game.b_actions), "b_actions", report);

  const std::size_t nx = game.nx(), ny = game.ny(), na = game.na(), nb = game.nb();
  bool shapes_ok = true;
  auto shape = [&](bool ok, const char* what) {
    if (!ok) {
      report.issues.push_back({ValidationIssue::Kind::shape, what, "wrong size"});
      shapes_ok = false;
    }
  };
  shape(game.p.size() == nx * na * nx, "p");
  shape(game.q.size() == ny * nb * ny, "q");
  shape(game.u.size() == nx * ny * na * nb, "u");
  shape(game.a_mask.empty() || game.a_mask.size() == nx * na, "a_mask");
  shape(game.b_mask.empty() || game.b_mask.size() == ny * nb, "b_mask");
  if (!shapes_ok) return report;

  check_rows(game.p, nx, na, game.x_states, game.a_actions, game.a_mask, "p", report);
  check_rows(game.q, ny, nb, game.y_states, game.b_actions, game.b_mask, "q", report);

  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
          const double v = game.payoff(x, y, a, b);
          if (!(v >= -kInputTolerance && v <= 1.0 + kInputTolerance)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "payoff " << v << " outside [0,1]";
            report.issues.push_back({ValidationIssue::Kind::payoff_range,
                                     "u(" + game.x_states[x] + ", " + game.y_states[y] + ", " +
                                         game.a_actions[a].label + ", " + game.b_actions[b].label + ")",
                                     msg.str()});
          }
        }
  return report;
}

JointDistribution JointDistribution::point(const ProductGame& game, std::size_t x, std::size_t y) {
  JointDistribution d{std::vector<double>(game.joint_count(), 0.0)};
  d.mass.at(game.joint(x, y)) = 1.0;
  return d;
}

double JointDistribution::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

void mixed_p_row(const ProductGame& game, std::size_t x, const MixedAction& mu, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t a = 0; a < game.na(); ++a)
    if (mu.weights[a] > 0.0) simd::axpy(mu.weights[a], game.p_row(x, a), out);
}

void mixed_q_row(const ProductGame& game, std::size_t y, const MixedAction& nu, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < game.nb(); ++b)
    if (nu.weights[b] > 0.0) simd::axpy(nu.weights[b], game.q_row(y, b), out);
}

double mixed_payoff(const ProductGame& game, std::size_t x, std::size_t y, const MixedAction& mu,
                    const MixedAction& nu) {
  const auto slice = game.payoff_slice(x, y);
  double total = 0.0;
  for (std::size_t a = 0; a < game.na(); ++a) {
    if (mu.weights[a] == 0.0) continue;
    total += mu.weights[a] * simd::dot(slice.subspan(a * game.nb(), game.nb()), nu.weights);
  }
  return total;
}

JointDistribution evolve_distribution(const ProductGame& game, const JointDistribution& d,
                                      const StageProfile& profile) {
  const std::size_t nx = game.nx(), ny = game.ny();
  if (d.mass.size() != game.joint_count()) throw PreconditionError("distribution has wrong size");
  JointDistribution next{std::vector<double>(game.joint_count(), 0.0)};
  std::vector<double> px(nx), qy(ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const std::size_t s = game.joint(x, y);
      const double m = d.mass[s];
      if (m == 0.0) continue;
      if (s >= profile.player1.size() || s >= profile.player2.size() || profile.player1[s].empty() ||
          profile.player2[s].empty()) {
        throw PreconditionError("no profile entry for charged state (" + game.x_states[x] + ", " +
                                game.y_states[y] + ")");
      }
      mixed_p_row(game, x, profile.player1[s], px);
      mixed_q_row(game, y, profile.player2[s], qy);
      for (std::size_t x2 = 0; x2 < nx; ++x2) {
        if (px[x2] == 0.0) continue;
        simd::axpy(m * px[x2], qy, std::span<double>(next.mass.data() + x2 * ny, ny));
      }
    }
  }
  return next;
}

SideKernel side_kernel(const ProductGame& game, Player side) {
  SideKernel k;
  if (side == Player::one) {
    k.states = game.nx();
    k.actions = game.na();
    k.prob = game.p;
    k.mask = game.a_mask;
  } else {
    k.states = game.ny();
    k.actions = game.nb();
    k.prob = game.q;
    k.mask = game.b_mask;
  }
  return k;
}

}  // namespace psg
