#include <CLI11.hpp>
#include <iostream>

#include "psg/cli.hpp"
#include "psg/fixtures.hpp"

namespace {

void game_options(CLI::App* sub, psg::RunConfig& cfg) {
  auto* g = sub->add_option("--game", cfg.game_path, "JSON game file");
  auto* b = sub->add_option("--builtin", cfg.builtin, "built-in game")->check(CLI::IsMember(psg::builtin_names()));
  g->excludes(b);
}

}  // namespace

int main(int argc, char** argv) {
  psg::RunConfig cfg;
  CLI::App app{"Product stochastic game solver"};
  app.require_subcommand(1);
  app.add_option("--out", cfg.out_path, "write the result here instead of stdout");

  auto* validate = app.add_subcommand("validate", "check a game against the model invariants");
  game_options(validate, cfg);

  auto* classify = app.add_subcommand("classify", "maximal communicating sets and transient states");
  game_options(classify, cfg);
  classify->add_option("--side", cfg.side, "player whose states are classified")->check(CLI::Range(1, 2));

  auto* comm = app.add_subcommand("comm-check", "strong and weak communication for both players");
  game_options(comm, cfg);

  auto* solve = app.add_subcommand("solve", "n-stage or discounted values as CSV");
  game_options(solve, cfg);
  auto* ns = solve->add_option("--n-stage", cfg.n_stage, "horizon N")->check(CLI::PositiveNumber);
  auto* ds = solve->add_option("--discount", cfg.discount, "discount factor lambda in (0, 1]")
                 ->check(CLI::Range(0.0, 1.0));
  ns->excludes(ds);
  solve->add_option("--tol", cfg.tol, "discounted stopping tolerance")->check(CLI::PositiveNumber);

  auto* uv = app.add_subcommand("uniform-value", "uniform value when one side is strongly communicating");
  game_options(uv, cfg);
  uv->add_option("--eps", cfg.eps, "target precision")->check(CLI::PositiveNumber);
  uv->add_option("--strong-side", cfg.strong_side, "1 or 2; detected when omitted")->check(CLI::Range(1, 2));

  auto* sweep = app.add_subcommand("circle-sweep", "oscillation table of the circle game reduction");
  sweep->add_option("--K", cfg.K, "truncation depth of I")->check(CLI::Range(2, 30));
  sweep->add_option("--lambda", cfg.lambdas, "discount factors (repeatable)");

  auto* dom = app.add_subcommand("circle-dominance", "dominance inequalities at the solved values");
  dom->add_option("--K", cfg.K, "truncation depth of I")->check(CLI::Range(2, 30));
  dom->add_option("--j-grid", cfg.j_grid, "steps of the beta grid")->check(CLI::PositiveNumber);
  dom->add_option("--lambda", cfg.lambdas, "discount factors (repeatable)");

  auto* sim = app.add_subcommand("simulate", "sample a play of the N-stage optimal strategies");
  game_options(sim, cfg);
  sim->add_option("--seed", cfg.seed, "random seed");
  sim->add_option("--N", cfg.horizon, "number of stages")->check(CLI::PositiveNumber);
  sim->add_option("--start", cfg.start, "x_label,y_label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // same status as run() uses for bad configuration
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return psg::run(cfg, std::cout, std::cerr);
}
