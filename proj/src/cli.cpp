#include "psg/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "psg/classification.hpp"
#include "psg/counterexample.hpp"
#include "psg/errors.hpp"
#include "psg/fixtures.hpp"
#include "psg/game_io.hpp"
#include "psg/play.hpp"
#include "psg/uniform_value.hpp"
#include "psg/value_iteration.hpp"

namespace psg {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProductGame source_game(const RunConfig& cfg) {
  if (!cfg.game_path.empty() && !cfg.builtin.empty()) throw UsageError("give either --game or --builtin, not both");
  if (!cfg.game_path.empty()) return load_game(cfg.game_path);
  if (!cfg.builtin.empty()) {
    for (const auto& n : builtin_names())
      if (n == cfg.builtin) return builtin_game(n);
    throw UsageError("unknown built-in game '" + cfg.builtin + "'");
  }
  throw UsageError(cfg.command + " needs --game or --builtin");
}

std::string state_set(const std::vector<std::size_t>& members, const std::vector<std::string>& labels) {
  std::string s = "{";
  for (std::size_t i = 0; i < members.size(); ++i) s += (i ? ", " : "") + labels[members[i]];
  return s + "}";
}

const std::vector<std::string>& side_labels(const ProductGame& g, Player side) {
  return side == Player::one ? g.x_states : g.y_states;
}

void print_comm(std::ostream& out, const char* kind, const CommWitness& w, const std::vector<std::string>& labels) {
  out << kind << ": " << to_string(w.status);
  if (w.holds()) out << " T=" << w.T;
  if (w.failing_pair) out << " pair=(" << labels[w.failing_pair->first] << ", " << labels[w.failing_pair->second] << ")";
  out << '\n';
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const ProductGame g = source_game(cfg);  // loading already validates files
  const ValidationReport rep = validate_game(g);
  if (!rep.ok()) {
    out << rep.to_string();
    return 1;
  }
  out << "ok: " << g.nx() << " x-states, " << g.ny() << " y-states, " << g.na() << " a-actions, " << g.nb()
      << " b-actions\n";
  return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.side != 1 && cfg.side != 2) throw UsageError("--side must be 1 or 2");
  const ProductGame g = source_game(cfg);
  const Player side = cfg.side == 1 ? Player::one : Player::two;
  const Classification c = classify_states(side_kernel(g, side));
  const auto& labels = side_labels(g, side);
  for (std::size_t i = 0; i < c.count(); ++i) out << "C" << i + 1 << " = " << state_set(c.components[i], labels) << '\n';
  out << "D = " << state_set(c.transient, labels) << '\n';
  return 0;
}

int cmd_comm_check(const RunConfig& cfg, std::ostream& out) {
  const ProductGame g = source_game(cfg);
  for (Player side : {Player::one, Player::two}) {
    const SideKernel k = side_kernel(g, side);
    out << "player " << (side == Player::one ? 1 : 2) << '\n';
    print_comm(out, "  strong", strong_comm(k), side_labels(g, side));
    print_comm(out, "  weak", weak_comm(k), side_labels(g, side));
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_stage.has_value() == cfg.discount.has_value()) throw UsageError("solve needs exactly one of --n-stage, --discount");
  const ProductGame g = source_game(cfg);
  if (cfg.n_stage) {
    if (*cfg.n_stage == 0) throw UsageError("--n-stage must be positive");
    const NStageResult r = n_stage_values(g, *cfg.n_stage, false);
    write_value_csv(out, g, r.values.back());
  } else {
    if (!(*cfg.discount > 0.0 && *cfg.discount <= 1.0)) throw UsageError("--discount must lie in (0, 1]");
    DiscountConfig dc;
    dc.lambda = *cfg.discount;
    dc.tol = cfg.tol;
    const DiscountResult r = discounted_value(g, dc);
    write_value_csv(out, g, r.value);
  }
  return 0;
}

int cmd_uniform_value(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.eps > 0.0)) throw UsageError("--eps must be positive");
  const ProductGame g = source_game(cfg);
  Theorem1Options opts;
  if (cfg.strong_side == 1 || cfg.strong_side == 2) {
    opts.strong_side = cfg.strong_side == 1 ? Player::one : Player::two;
  } else if (cfg.strong_side == 0) {
    if (strong_comm(side_kernel(g, Player::one)).holds())
      opts.strong_side = Player::one;
    else if (strong_comm(side_kernel(g, Player::two)).holds())
      opts.strong_side = Player::two;
    else
      throw PreconditionError("neither player is strongly communicating");
  } else {
    throw UsageError("--strong-side must be 1 or 2");
  }
  const Theorem1Result r = theorem1_value(g, cfg.eps, opts);
  write_component_csv(out, g, r);
  out << '\n';
  write_w_csv(out, g, r);
  return 0;
}

std::vector<double> sweep_lambdas(const RunConfig& cfg) {
  for (double l : cfg.lambdas)
    if (!(l > 0.0 && l <= 1.0)) throw UsageError("lambda values must lie in (0, 1]");
  return cfg.lambdas.empty() ? default_sweep_lambdas() : cfg.lambdas;
}

int cmd_circle_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.K < 2) throw UsageError("--K must be at least 2");
  const SweepTable t = oscillation_sweep(sweep_lambdas(cfg), cfg.K, 1e-12);
  write_sweep_csv(out, t);
  int status = 0;
  for (const auto& r : t.rows)
    if (!r.ok()) {
      err << "row lambda=" << format_number(r.lambda) << " flagged";
      if (!r.error.empty()) err << ": " << r.error;
      err << '\n';
      status = 1;
    }
  return status;
}

int cmd_circle_dominance(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.K < 2) throw UsageError("--K must be at least 2");
  if (cfg.j_grid < 1) throw UsageError("--j-grid must be positive");
  const std::vector<double> alpha = truncated_i(cfg.K), beta = j_grid_points(cfg.j_grid);
  out << "lambda,x,y,checked,violations,worst_margin\n";
  int status = 0;
  for (double l : sweep_lambdas(cfg)) {
    const FixedPointSolution s = solve_simplified_fixed_point(l, cfg.K, 1e-12);
    const DominanceReport d = verify_dominance(s.x_val, s.y_val, alpha, beta);
    out << format_number(l) << ',' << format_number(s.x_val) << ',' << format_number(s.y_val) << ',' << d.checked
        << ',' << d.violation_count << ',' << format_number(d.worst_margin) << '\n';
    for (const auto& v : d.violations)
      err << "lambda=" << format_number(l) << " inequality " << v.inequality << " case " << v.case_index
          << " alpha=" << format_number(v.alpha) << " p=" << v.p << " beta=" << format_number(v.beta) << " q=" << v.q
          << " margin=" << format_number(v.margin) << '\n';
    if (!d.ok()) status = 1;
  }
  return status;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.horizon == 0) throw UsageError("--N must be positive");
  const ProductGame g = source_game(cfg);
  JointState start{0, 0};
  if (!cfg.start.empty()) {
    const auto comma = cfg.start.find(',');
    if (comma == std::string::npos) throw UsageError("--start expects x_label,y_label");
    const auto x = g.x_index(cfg.start.substr(0, comma));
    const auto y = g.y_index(cfg.start.substr(comma + 1));
    if (!x || !y) throw UsageError("unknown start state '" + cfg.start + "'");
    start = {*x, *y};
  }
  const NStageResult r = n_stage_values(g, cfg.horizon, true);
  const Trajectory t = simulate_play(g, r.player1, r.player2, cfg.horizon, start, cfg.seed);
  out << "stage,x,y,a,b,payoff\n";
  for (std::size_t n = 0; n < t.steps.size(); ++n) {
    const PlayStep& s = t.steps[n];
    out << n + 1 << ',' << g.x_states[s.x] << ',' << g.y_states[s.y] << ',' << g.a_actions[s.a].label << ','
        << g.b_actions[s.b].label << ',' << format_number(s.payoff) << '\n';
  }
  out << "# average," << format_number(t.average_payoff) << ",value," << format_number(r.values.back().at(start.x, start.y))
      << '\n';
  return 0;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& c = cfg.command;
  if (c == "validate") return cmd_validate(cfg, out);
  if (c == "classify") return cmd_classify(cfg, out);
  if (c == "comm-check") return cmd_comm_check(cfg, out);
  if (c == "solve") return cmd_solve(cfg, out);
  if (c == "uniform-value") return cmd_uniform_value(cfg, out);
  if (c == "circle-sweep") return cmd_circle_sweep(cfg, out, err);
  if (c == "circle-dominance") return cmd_circle_dominance(cfg, out, err);
  if (c == "simulate") return cmd_simulate(cfg, out);
  throw UsageError("unknown command '" + c + "'");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.out_path.empty()) return dispatch(cfg, out, err);
    // Write to a buffer first so a failed run leaves no partial file.
    std::ostringstream buf;
    const int status = dispatch(cfg, buf, err);
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + cfg.out_path + "'");
    file << buf.str();
    return status;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidGameError& e) {
    err << e.what();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace psg
