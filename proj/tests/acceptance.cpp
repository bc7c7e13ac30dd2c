// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "psg/classification.hpp"
#include "psg/counterexample.hpp"
#include "psg/fixtures.hpp"
#include "psg/matrix_game.hpp"
#include "psg/play.hpp"
#include "psg/uniform_value.hpp"
#include "psg/value_iteration.hpp"
#include "support.hpp"

using namespace psg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) o.require(false, fmt2("runtime %.2fs exceeds %.0fs", secs, budget_s));
  std::printf("%s %s: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.empty() ? "" : " -- ",
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double lam(int e) { return std::ldexp(1.0, -e); }

// Shared by criteria 1 to 3.
std::vector<FixedPointSolution> sweep_solutions;

MixedAction random_mixed(test::Rng& rng, std::size_t n) {
  MixedAction m;
  for (std::size_t a = 0; a < n; ++a) m.weights.push_back(test::uniform(rng) < 0.5 ? test::uniform(rng) : 0.0);
  m.weights[test::pick(rng, n)] += 0.1;
  test::normalize(m.weights);
  return m;
}

std::vector<MixedAction> random_table(test::Rng& rng, std::size_t states, std::size_t n) {
  std::vector<MixedAction> t;
  for (std::size_t s = 0; s < states; ++s) t.push_back(random_mixed(rng, n));
  return t;
}

// At least 50 strategies for `free` against a bundle of the other player.
std::vector<StrategyBundle> adversary_panel(const ProductGame& g, const StrategyBundle& fixed, Player free,
                                            std::size_t N, test::Rng& rng) {
  const Player fixed_player = opponent(free);
  const std::size_t n = free == Player::one ? g.na() : g.nb();
  const std::size_t S = g.joint_count();
  std::vector<StrategyBundle> panel;
  for (double l : {1.0 / N, 0.01, 0.05, 0.2}) panel.push_back(stationary_best_response(g, fixed, fixed_player, {l, 1e-10, 10'000'000}).response);
  for (std::size_t a = 0; a < n; ++a) panel.push_back(StrategyBundle::stationary(std::vector<MixedAction>(S, MixedAction::pure(n, a))));
  panel.push_back(StrategyBundle::stationary(std::vector<MixedAction>(S, MixedAction::uniform(n))));
  const NStageResult opt = n_stage_values(g, N, true);
  panel.push_back(free == Player::one ? opt.player1 : opt.player2);
  for (int i = 0; i < 20; ++i) panel.push_back(StrategyBundle::stationary(random_table(rng, S, n)));
  for (int i = 0; i < 12; ++i) {
    std::vector<std::vector<MixedAction>> tables;
    for (std::size_t k = 0; k < 2 + test::pick(rng, 6); ++k) tables.push_back(random_table(rng, S, n));
    panel.push_back(StrategyBundle::periodic(tables));
  }
  for (int i = 0; i < 12; ++i) {
    std::vector<std::vector<MixedAction>> tables;
    for (std::size_t k = 0; k < N; ++k) tables.push_back(random_table(rng, S, n));
    panel.push_back(StrategyBundle::markov(tables));
  }
  return panel;
}

struct PipelineFixture {
  ProductGame game;
  Theorem1Result result;
};

std::vector<PipelineFixture> pipeline_fixtures;

constexpr double kEps = 0.05;
constexpr std::size_t kHorizon = 400;

void build_pipeline_fixtures() {
  if (!pipeline_fixtures.empty()) return;
  test::Rng rng(2024);
  for (int i = 0; i < 20; ++i) {
    const std::size_t nx = 1 + test::pick(rng, 3), ny = 1 + test::pick(rng, 4);
    const std::size_t na = 2 + test::pick(rng, 2), nb = 2 + test::pick(rng, 2);
    ProductGame g = test::strong_fixture(rng, nx, ny, na, nb);
    Theorem1Options opts;
    opts.strong_side = Player::one;
    Theorem1Result r = theorem1_value(g, kEps, opts);
    pipeline_fixtures.push_back({std::move(g), std::move(r)});
  }
}

}  // namespace

int main() {
  criterion("AC1", "oscillation of the simplified fixed point", 10, [] {
    Outcome o;
    sweep_solutions.clear();
    for (int e = 4; e <= 16; e += 2) sweep_solutions.push_back(solve_simplified_fixed_point(lam(e), 10, 1e-12));
    auto x_at = [](int e) { return sweep_solutions[(e - 4) / 2].x_val; };
    for (const auto& s : sweep_solutions) o.require(s.residual <= 1e-12 * s.lambda, fmt("residual at lambda=%g", s.lambda));
    o.require(x_at(16) >= 0.47, fmt("x at 2^-16 = %.6f < 0.47", x_at(16)));
    // Along decreasing lambda the values fall towards 1/2: x is increasing in lambda.
    for (int e = 4; e < 16; e += 4)
      o.require(x_at(e) > x_at(e + 4), fmt2("x not monotone in lambda: %.6f vs %.6f", x_at(e), x_at(e + 4)));
    for (int e : {6, 10, 14})
      o.require(x_at(e) <= 4.0 / 9.0 + 0.02, "x at 2^-" + std::to_string(e) + " = " + fmt("%.6f", x_at(e)) +
                                                  fmt(" > 4/9 + 0.02 = %.6f", 4.0 / 9.0 + 0.02));
    std::string vals;
    for (int e = 4; e <= 16; e += 2) vals += (e > 4 ? " " : "") + fmt("%.4f", x_at(e));
    if (o.pass) o.detail = "x = " + vals;
    else o.detail += "; x = " + vals;
    return o;
  });

  criterion("AC2", "identity and beta bound for lambda <= 1/17", 1, [] {
    Outcome o;
    const double tol = 1e-12;
    for (const auto& s : sweep_solutions) {
      if (s.lambda > 1.0 / 17.0) continue;
      const double l = s.lambda, x = s.x_val, y = s.y_val;
      const double id = std::fabs(4 * l * (1 - x) * (1 - x) - (1 - l) * (x - y) * (x - y));
      const double beta = (x - y) / (2 * (1 - x));
      o.require(id <= 20 * tol, fmt2("identity residual %.3g at lambda=%g", id, l));
      o.require(beta <= 0.25, fmt2("beta %.6f > 1/4 at lambda=%g", beta, l));
      const IdentityReport r = check_identities(s, 10, tol);
      o.require(r.beta_checked && r.identity_ok && r.beta_ok, fmt("check_identities at lambda=%g", l));
    }
    o.require(!sweep_solutions.empty(), "no sweep solutions");
    return o;
  });

  criterion("AC3", "dominance inequalities on the action grids", 5, [] {
    Outcome o;
    const auto alpha = truncated_i(10);
    std::size_t checked = 0;
    double worst = 1e300;
    for (std::size_t grid : {std::size_t{255}, std::size_t{256}}) {
      const auto beta = j_grid_points(grid);
      for (const auto& s : sweep_solutions) {
        const DominanceReport d = verify_dominance(s.x_val, s.y_val, alpha, beta, 1e-12);
        checked += d.checked;
        worst = std::min(worst, d.worst_margin);
        o.require(d.ok(), fmt2("%g violations at lambda=%g", double(d.violation_count), s.lambda));
      }
    }
    o.require(!sweep_solutions.empty(), "no sweep solutions");
    if (o.pass) o.detail = fmt2("%.0f inequalities, worst margin %.3g", double(checked), worst);
    return o;
  });

  criterion("AC4", "full circle game agrees with the simplified solver at 2^-4", 60, [] {
    Outcome o;
    const CrossCheckReport r = cross_check_full_game(lam(4), CircleGameParams{});
    o.require(r.x_diff <= 5e-3, fmt("x difference %.3g", r.x_diff));
    o.require(r.y_diff <= 5e-3, fmt("y difference %.3g", r.y_diff));
    o.require(r.far_deviation <= 5e-3, fmt("distance >= 3 deviation %.3g", r.far_deviation));
    o.require(r.near_deviation <= 5e-3, fmt("distance <= 1 deviation %.3g", r.near_deviation));
    if (o.pass) o.detail = fmt2("x diff %.2g, y diff %.2g", r.x_diff, r.y_diff);
    return o;
  });

  criterion("AC5", "classify_states against the examples and the oracle", 30, [] {
    Outcome o;
    using Sets = std::vector<std::vector<std::size_t>>;
    const auto c2 = classify_states(side_kernel(example_4_2(), Player::two));
    o.require(c2.components == Sets{{1}, {2}} && c2.transient == std::vector<std::size_t>{0}, "example_4_2");
    const auto c3 = classify_states(side_kernel(example_4_3(), Player::two));
    o.require(c3.components == Sets{{0}, {1}, {2}} && c3.transient.empty(), "example_4_3");
    test::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const SideKernel k = test::random_kernel(rng, 1 + test::pick(rng, 4), 1 + test::pick(rng, 3));
      const auto c = classify_states(k);
      const auto [comps, transient] = test::brute_force_classes(k);
      o.require(c.components == comps && c.transient == transient, "random instance " + std::to_string(i));
    }
    return o;
  });

  criterion("AC6", "communication certificates", 10, [] {
    Outcome o;
    const SideKernel f = side_kernel(fig_1(), Player::one), fe = side_kernel(fig_1_eps(), Player::one);
    o.require(strong_comm(f).status == CommStatus::fails, "strong_comm accepts fig_1");
    o.require(strong_comm(fe).holds(), "strong_comm rejects the interior grid");
    o.require(weak_comm(f).holds(), "weak_comm rejects fig_1");
    o.require(weak_comm(fe).holds(), "weak_comm rejects the interior grid");
    test::Rng rng(6);
    int strong = 0;
    for (int i = 0; i < 200; ++i) {
      const SideKernel k = test::random_kernel(rng, 1 + test::pick(rng, 4), 1 + test::pick(rng, 3));
      if (strong_comm(k).holds()) {
        ++strong;
        o.require(weak_comm(k).holds(), "strong without weak, instance " + std::to_string(i));
      }
    }
    if (o.pass) o.detail = std::to_string(strong) + " of 200 random kernels strongly communicating";
    return o;
  });

  criterion("AC7", "uniform value pipeline against v_N", 600, [] {
    Outcome o;
    build_pipeline_fixtures();
    double worst_w = 0.0, worst_span = 0.0;
    for (std::size_t i = 0; i < pipeline_fixtures.size(); ++i) {
      const auto& [g, r] = pipeline_fixtures[i];
      const ValueTable vN = n_stage_values(g, kHorizon, false).values.back();
      for (std::size_t y = 0; y < g.ny(); ++y) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t x = 0; x < g.nx(); ++x) {
          const double d = std::fabs(vN.at(x, y) - r.w[y]);
          worst_w = std::max(worst_w, d);
          o.require(d <= 3 * kEps, "fixture " + std::to_string(i) + fmt(": |v_N - w| = %.4f", d));
          lo = std::min(lo, vN.at(x, y));
          hi = std::max(hi, vN.at(x, y));
        }
        worst_span = std::max(worst_span, hi - lo);
        o.require(hi - lo <= 3 * kEps, "fixture " + std::to_string(i) + fmt(": x-spread %.4f", hi - lo));
      }
    }
    if (o.pass) o.detail = fmt2("max |v_N - w| %.4f, max x-spread %.4f", worst_w, worst_span);
    return o;
  });

  criterion("AC8", "guarantees of the constructed strategies", 600, [] {
    Outcome o;
    build_pipeline_fixtures();
    test::Rng rng(8);
    double slack1 = 1e300, slack2 = 1e300;
    std::size_t panel_size = 1e9;
    for (std::size_t i = 0; i < pipeline_fixtures.size(); ++i) {
      const auto& [g, r] = pipeline_fixtures[i];
      const auto vs1 = adversary_panel(g, r.player2, Player::one, kHorizon, rng);
      const auto vs2 = adversary_panel(g, r.player1, Player::two, kHorizon, rng);
      panel_size = std::min({panel_size, vs1.size(), vs2.size()});
      for (std::size_t x = 0; x < g.nx(); ++x)
        for (std::size_t y = 0; y < g.ny(); ++y) {
          const double w = r.w[y];
          for (const auto& adv : vs1) {
            const double v = exact_n_stage_payoff(g, adv, r.player2, kHorizon, {x, y});
            slack2 = std::min(slack2, w + 3 * kEps - v);
            o.require(v <= w + 3 * kEps, "fixture " + std::to_string(i) + fmt2(": player 2 bundle concedes %.4f > w + 3eps, w = %.4f", v, w));
          }
          for (const auto& adv : vs2) {
            const double v = exact_n_stage_payoff(g, r.player1, adv, kHorizon, {x, y});
            slack1 = std::min(slack1, v - (w - 3 * kEps));
            o.require(v >= w - 3 * kEps, "fixture " + std::to_string(i) + fmt2(": player 1 bundle gets %.4f < w - 3eps, w = %.4f", v, w));
          }
        }
    }
    o.require(panel_size >= 50, "panel smaller than 50");
    if (o.pass)
      o.detail = std::to_string(panel_size) + "+ adversaries per side" + fmt2(", min slack p1 %.4f p2 %.4f", slack1, slack2);
    return o;
  });

  criterion("AC9", "solver certificates", 60, [] {
    Outcome o;
    test::Rng rng(9);
    double worst_gap = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const MatrixGame m = test::random_matrix(rng, 1 + test::pick(rng, 8), 1 + test::pick(rng, 8));
      const MinimaxSolution s = solve_matrix_game(m, 1e-9);
      const MinimaxSolution c = certify(m, s.row, s.col);
      worst_gap = std::max(worst_gap, c.gap);
      o.require(c.gap <= 1e-9, fmt("matrix gap %.3g", c.gap));
    }
    double worst_ratio = 0.0;
    for (int i = 0; i < 30; ++i) {
      const ProductGame g = test::random_game(rng, 1 + test::pick(rng, 3), 1 + test::pick(rng, 3), 2 + test::pick(rng, 2),
                                              2 + test::pick(rng, 2));
      for (double l : {0.5, 0.1, 0.02}) {
        const DiscountResult loose = discounted_value(g, {l, 1e-6, 10'000'000});
        const DiscountResult tight = discounted_value(g, {l, 1e-10, 10'000'000});
        double diff = 0.0;
        for (std::size_t k = 0; k < loose.value.values.size(); ++k)
          diff = std::max(diff, std::fabs(loose.value.values[k] - tight.value.values[k]));
        const double bound = loose.value.error_bound + tight.value.error_bound;
        if (bound > 0) worst_ratio = std::max(worst_ratio, diff / bound);
        o.require(diff <= bound + 1e-15, fmt2("tol 1e-6 run off by %.3g, bound %.3g", diff, bound));
        o.require(loose.value.error_bound <= 1e-6 / l, fmt("loose bound %.3g", loose.value.error_bound));
      }
    }
    if (o.pass) o.detail = fmt2("max matrix gap %.2g, max observed/bound %.3f", worst_gap, worst_ratio);
    return o;
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
