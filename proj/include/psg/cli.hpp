#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace psg {

struct RunConfig {
  std::string command;  // validate, classify, comm-check, solve, uniform-value, circle-sweep, circle-dominance, simulate
  std::string game_path;
  std::string builtin;  // fig_1, fig_1_eps, example_4_2, example_4_3, circle
  std::string out_path;  // empty = the `out` stream

  int side = 2;  // classify: whose states
  std::optional<std::size_t> n_stage;
  std::optional<double> discount;
  double tol = 1e-10;
  double eps = 0.05;
  int strong_side = 0;  // uniform-value: 0 = detect
  std::size_t K = 10;
  std::size_t j_grid = 256;
  std::vector<double> lambdas;  // circle-sweep / circle-dominance; empty = defaults
  std::uint64_t seed = 1;
  std::size_t horizon = 100;
  std::string start;  // simulate: "x_label,y_label"; empty = first states
};

/// Exit status: 0 success, 1 failed check or solver error, 2 bad configuration.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace psg
