#include "psg/fixtures.hpp"

#include "psg/counterexample.hpp"
#include "psg/errors.hpp"

namespace psg {

namespace {

std::vector<Action> grid_actions(const char* name, const std::vector<double>& grid, const std::vector<const char*>& labels) {
  std::vector<Action> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back({std::string(name) + "=" + labels[i], {grid[i]}});
  return out;
}

ProductGame fig_1_with(const std::vector<double>& grid, const std::vector<const char*>& labels) {
  ProductGame g({"x", "y", "z"}, {"o"}, grid_actions("alpha", grid, labels), {{"stay", {}}});
  for (std::size_t a = 0; a < g.na(); ++a) {
    g.p_row(0, a)[0] = grid[a];
    g.p_row(0, a)[1] = 1.0 - grid[a];
    g.p_row(1, a)[2] = 1.0;
    g.p_row(2, a)[0] = 1.0;
  }
  g.q_row(0, 0)[0] = 1.0;
  const double pay[3] = {1.0, 0.0, 0.5};
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t a = 0; a < g.na(); ++a) g.payoff(x, 0, a, 0) = pay[x];
  return g;
}

ProductGame example_4(bool x_loops) {
  const std::vector<double> grid{0.0, 0.125, 0.25, 0.375, 0.5};
  ProductGame g({"s"}, {"x", "y", "z"}, {{"play", {}}},
                grid_actions("beta", grid, {"0", "1/8", "1/4", "3/8", "1/2"}));
  g.p_row(0, 0)[0] = 1.0;
  for (std::size_t b = 0; b < g.nb(); ++b) {
    const double be = grid[b];
    if (x_loops) {
      g.q_row(0, b)[0] = 1.0 - 2.0 * be;
      g.q_row(0, b)[1] = 2.0 * be;
    } else {
      g.q_row(0, b)[1] = 1.0;
    }
    g.q_row(1, b)[0] = be;
    g.q_row(1, b)[1] = 1.0 - be - be * be;
    g.q_row(1, b)[2] = be * be;
    g.q_row(2, b)[2] = 1.0;
  }
  const double pay[3] = {0.5, 0.3, 0.7};
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t b = 0; b < g.nb(); ++b) g.payoff(0, y, 0, b) = pay[y];
  return g;
}

}  // namespace

ProductGame fig_1() { return fig_1_with({0.0, 0.25, 0.5, 0.75, 1.0}, {"0", "1/4", "1/2", "3/4", "1"}); }

ProductGame fig_1_eps() { return fig_1_with({0.125, 0.375, 0.625, 0.875}, {"1/8", "3/8", "5/8", "7/8"}); }

ProductGame example_4_2() { return example_4(false); }

ProductGame example_4_3() { return example_4(true); }

std::vector<std::string> builtin_names() { return {"fig_1", "fig_1_eps", "example_4_2", "example_4_3", "circle"}; }

ProductGame builtin_game(const std::string& name) {
  if (name == "fig_1") return fig_1();
  if (name == "fig_1_eps") return fig_1_eps();
  if (name == "example_4_2") return example_4_2();
  if (name == "example_4_3") return example_4_3();
  if (name == "circle") return build_circle_game();
  throw PreconditionError("unknown built-in game '" + name + "'");
}

}  // namespace psg
