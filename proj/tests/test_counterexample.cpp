#include <doctest.h>

#include <cmath>
#include <sstream>

#include "psg/counterexample.hpp"
#include "psg/errors.hpp"
#include "psg/value_iteration.hpp"

using namespace psg;

namespace {

using R = long double;

// Independent oracle: nested bisection on the two scalar equations
//   lambda y = (1 - lambda) max_{alpha in I_K} (-alpha^2 y + alpha (x - y))
//   lambda x = lambda + (1 - lambda) min_{beta in [0,1/4]} (beta^2 (1 - x) + beta (y - x)).
struct Pair {
  R x, y;
};

R y_given_x(R lambda, R x, std::size_t K) {
  auto f = [&](R y) {
    R best = 0;
    for (std::size_t k = 1; k <= K; ++k) {
      const R a = std::pow(R(4), -R(k));
      best = std::max(best, -a * a * y + a * (x - y));
    }
    return (1 - lambda) * best - lambda * y;  // decreasing in y
  };
  R lo = 0, hi = x;
  for (int i = 0; i < 200; ++i) {
    const R mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

Pair oracle(R lambda, std::size_t K = 10) {
  auto g = [&](R x) {
    const R y = y_given_x(lambda, x, K);
    R b = (x - y) / (2 * (1 - x));
    b = std::clamp(b, R(0), R(0.25));
    const R m = std::min({R(0), R(0.0625) * (1 - x) + R(0.25) * (y - x), b * b * (1 - x) + b * (y - x)});
    return lambda + (1 - lambda) * m - lambda * x;
  };
  R lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    const R mid = (lo + hi) / 2;
    (g(mid) > 0 ? lo : hi) = mid;
  }
  const R x = (lo + hi) / 2;
  return {x, y_given_x(lambda, x, K)};
}

// Frozen oracle output, K = 10.
struct Golden {
  int exponent;
  double x, y;
};
constexpr Golden kGolden[] = {
    {4, 0.60264900662251656, 0.39735099337748344},  {6, 0.51355925971088356, 0.39098771434182071},
    {8, 0.52946555916898619, 0.47053353984087643},  {10, 0.46316363119008269, 0.42959496318463611},
    {12, 0.50769323060990148, 0.49230676572123158}, {14, 0.44923006168530383, 0.44062401875954174},
    {16, 0.50194554007020247, 0.49805445991530202},
};

}  // namespace

TEST_CASE("circle game: payoffs and transitions") {
  const ProductGame g = build_circle_game();
  const std::size_t x2 = 2, xp0 = 0, yp0 = 8;
  CHECK(g.payoff(x2, xp0, 0, 0) == 0.0);
  CHECK(g.payoff(x2, yp0, 0, 0) == 1.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(g.payoff(i * 8 + 5, j * 8, 3, 7) == 1.0);
  CHECK(g.payoff(8 + 2, xp0, 1, 1) == 1.0);  // (y,2) against (x',0)
  CHECK(g.payoff(8 + 2, yp0, 1, 1) == 0.0);
  CHECK(g.payoff(1, 8 + 0, 0, 0) == 0.0);    // distance 1

  const std::size_t a = *g.a_index("(0.25,+1)");
  CHECK(g.p_row(x2, a)[3] == doctest::Approx(1 - 0.25 - 0.0625));
  CHECK(g.p_row(x2, a)[8 + 3] == doctest::Approx(0.25));
  CHECK(g.p_row(x2, a)[1] == doctest::Approx(0.0625));
  const std::size_t sw = *g.a_index("(1,0)");
  CHECK(g.p_row(x2, sw)[8 + 2] == 1.0);
  const std::size_t b = *g.b_index("(0.125,-1)");
  CHECK(g.q_row(0, b)[7] == doctest::Approx(1 - 0.125 - 0.015625));
  CHECK(g.q_row(0, b)[8 + 7] == doctest::Approx(0.125));
  CHECK(g.q_row(0, b)[1] == doctest::Approx(0.015625));
  CHECK_THROWS_AS(build_circle_game({1, 256}), PreconditionError);
}

TEST_CASE("stage_kernel_h: documented evaluations") {
  const double x = 0.55, y = 0.41;
  CHECK(stage_kernel_h(x, y, 0, +1, 0, +1) == x);
  CHECK(stage_kernel_h(x, y, 0, +1, 0, 0) == 1.0);
  CHECK(stage_kernel_h(x, y, 0, 0, 0, 0) == x);
}

TEST_CASE("verify_dominance: clean grid, ties and the negative control") {
  const auto alpha = truncated_i(10), beta = j_grid_points(63);
  REQUIRE(beta.size() == 64);
  const auto clean = verify_dominance(0.5, 0.4, alpha, beta);
  CHECK(clean.ok());
  CHECK(clean.checked == 2 * (4 * 11 * 64 + 2 * 11 * 2 + 2 * 2 * 64 + 2 * 2));

  const auto ties = verify_dominance(0.5, 0.4, {0.0}, {0.0});
  CHECK(ties.ok());
  CHECK(ties.worst_margin == 0.0);

  const auto broken = verify_dominance(0.4, 0.5, alpha, beta);
  CHECK_FALSE(broken.ok());
  REQUIRE_FALSE(broken.violations.empty());
  for (const auto& v : broken.violations) {
    CHECK(v.case_index >= 1);
    CHECK(v.case_index <= 9);
  }
}

TEST_CASE("simplified fixed point: lambda = 1 and the golden table") {
  const auto one = solve_simplified_fixed_point(1.0);
  CHECK(one.x_val == 1.0);
  CHECK(one.y_val == 0.0);

  for (const auto& gold : kGolden) {
    const double lambda = std::ldexp(1.0, -gold.exponent);
    const auto s = solve_simplified_fixed_point(lambda, 10, 1e-12);
    const Pair o = oracle(lambda);
    CHECK(std::fabs(double(o.x) - gold.x) <= 1e-13);
    CHECK(std::fabs(double(o.y) - gold.y) <= 1e-13);
    CHECK(std::fabs(s.x_val - gold.x) <= 2e-12);
    CHECK(std::fabs(s.y_val - gold.y) <= 2e-12);
    CHECK(s.residual <= 1e-12 * lambda);
    CHECK(0.0 < s.y_val);
    CHECK(s.y_val < s.x_val);
    CHECK(s.x_val < 1.0);
  }
  CHECK(solve_simplified_fixed_point(std::ldexp(1.0, -14)).x_val <= 4.0 / 9.0 + 0.02);
  CHECK_THROWS_AS(solve_simplified_fixed_point(0.0), PreconditionError);
}

TEST_CASE("check_identities") {
  const auto s32 = solve_simplified_fixed_point(1.0 / 32.0);
  const auto r32 = check_identities(s32);
  CHECK(r32.beta_checked);
  CHECK(r32.identity_residual <= 20e-12);
  CHECK(r32.ok());

  const auto s12 = solve_simplified_fixed_point(std::ldexp(1.0, -12));
  CHECK(s12.alpha_star == std::ldexp(1.0, -6));
  CHECK(check_identities(s12).ok());

  const auto r1 = check_identities(solve_simplified_fixed_point(1.0));
  CHECK_FALSE(r1.beta_checked);
  CHECK(r1.alpha_ok);

  FixedPointSolution fake = s12;
  fake.alpha_star = 0.25;
  CHECK_FALSE(check_identities(fake).alpha_ok);
}

TEST_CASE("lemma_hypotheses") {
  auto h = lemma_hypotheses(std::ldexp(1.0, -12));
  CHECK(h.sqrt_in_I);
  CHECK_FALSE(h.interval_disjoint);
  h = lemma_hypotheses(std::ldexp(1.0, -14));
  CHECK_FALSE(h.sqrt_in_I);
  CHECK(h.interval_disjoint);
  h = lemma_hypotheses(1.0 / 8.0);
  CHECK_FALSE(h.sqrt_in_I);
  CHECK_FALSE(h.interval_disjoint);
  // Odd exponents never satisfy either hypothesis.
  for (int e = 3; e <= 21; e += 2) {
    h = lemma_hypotheses(std::ldexp(1.0, -e));
    CHECK_FALSE(h.sqrt_in_I);
    CHECK_FALSE(h.interval_disjoint);
  }
  for (int e = 4; e <= 40; e += 2) {
    h = lemma_hypotheses(std::ldexp(1.0, -e));
    CHECK(h.sqrt_in_I == (e % 4 == 0));
    CHECK(h.interval_disjoint == (e % 4 == 2));
  }
}

TEST_CASE("oscillation sweep") {
  const auto t = oscillation_sweep(default_sweep_lambdas());
  REQUIRE(t.rows.size() == 7);
  for (const auto& r : t.rows) {
    CHECK(r.ok());
    CHECK(r.hyp.sqrt_in_I != r.hyp.interval_disjoint);
  }
  std::ostringstream csv;
  write_sweep_csv(csv, t);
  std::string line;
  std::istringstream in(csv.str());
  std::getline(in, line);
  CHECK(line == "lambda,sqrt_in_I,interval_disjoint,x,y,gap,alpha,beta,residual");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 7);

  const auto single = oscillation_sweep({1.0});
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].sol.x_val == 1.0);
  CHECK(single.rows[0].sol.y_val == 0.0);
  CHECK_FALSE(single.rows[0].asymptotic_checked);
}

TEST_CASE("cross check at lambda = 1 is exact") {
  const auto r = cross_check_full_game(1.0, {4, 8});
  CHECK(r.x_full == 1.0);
  CHECK(r.y_full == 0.0);
  CHECK(r.far_deviation == 0.0);
  CHECK(r.near_deviation == 0.0);
}

TEST_CASE("discounted values rise under a payoff bump") {
  const ProductGame g = build_circle_game({3, 4});
  ProductGame up = g;
  for (double& v : up.u) v = std::min(1.0, v + 0.01);
  const auto a = discounted_value(g, {0.25, 1e-11, 100000});
  const auto b = discounted_value(up, {0.25, 1e-11, 100000});
  for (std::size_t i = 0; i < a.value.values.size(); ++i) CHECK(b.value.values[i] >= a.value.values[i] - 1e-10);
  CHECK(b.value.at(2, 8) > a.value.at(2, 8));
  CHECK(b.value.at(2, 0) > a.value.at(2, 0));
}
