#include "psg/game_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include "json.hpp"
#include <ostream>
#include <sstream>

#include "psg/errors.hpp"

namespace psg {

using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
  return "line " + std::to_string(line);
}

const json& field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw ParseError(name, "missing field");
  return doc.at(name);
}

std::vector<std::string> label_list(const json& doc, const char* name) {
  const json& arr = field(doc, name);
  if (!arr.is_array()) throw ParseError(name, "expected an array of labels");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw ParseError(std::string(name) + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

std::vector<Action> action_list(const json& doc, const char* name) {
  const json& arr = field(doc, name);
  if (!arr.is_array()) throw ParseError(name, "expected an array of actions");
  std::vector<Action> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = std::string(name) + "[" + std::to_string(i) + "]";
    const json& a = arr[i];
    if (a.is_string()) {
      out.push_back({a.get<std::string>(), {}});
    } else if (a.is_object()) {
      if (!a.contains("label") || !a["label"].is_string()) throw ParseError(where + ".label", "expected a string");
      Action act{a["label"].get<std::string>(), {}};
      if (a.contains("params")) {
        const json& ps = a["params"];
        if (!ps.is_array()) throw ParseError(where + ".params", "expected an array of numbers");
        for (std::size_t k = 0; k < ps.size(); ++k) {
          if (!ps[k].is_number())
            throw ParseError(where + ".params[" + std::to_string(k) + "]", "expected a number");
          act.params.push_back(ps[k].get<double>());
        }
      }
      out.push_back(std::move(act));
    } else {
      throw ParseError(where, "expected a label or an object with label and params");
    }
  }
  return out;
}

template <typename Lookup>
std::size_t resolve(const json& v, std::size_t count, Lookup lookup, const std::string& where, const char* what) {
  if (v.is_number_unsigned()) {
    const auto i = v.get<std::size_t>();
    if (i >= count) throw ParseError(where, std::string(what) + " index out of range");
    return i;
  }
  if (v.is_string()) {
    const auto label = v.get<std::string>();
    if (auto i = lookup(label)) return *i;
    throw ParseError(where, "unknown " + std::string(what) + " '" + label + "'");
  }
  throw ParseError(where, std::string("expected a ") + what + " label or index");
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where, "expected a number");
  return v.get<double>();
}

void read_kernel(const json& doc, const char* name, ProductGame& g, bool first) {
  const json& arr = field(doc, name);
  if (!arr.is_array()) throw ParseError(name, "expected an array of [state, action, next, prob]");
  const std::size_t ns = first ? g.nx() : g.ny();
  const std::size_t na = first ? g.na() : g.nb();
  auto state = [&](const std::string& l) { return first ? g.x_index(l) : g.y_index(l); };
  auto action = [&](const std::string& l) { return first ? g.a_index(l) : g.b_index(l); };
  std::vector<bool> seen(ns * na * ns, false);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = std::string(name) + "[" + std::to_string(i) + "]";
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 4) throw ParseError(where, "expected [state, action, next, prob]");
    const std::size_t s = resolve(e[0], ns, state, where + "[0]", "state");
    const std::size_t a = resolve(e[1], na, action, where + "[1]", "action");
    const std::size_t t = resolve(e[2], ns, state, where + "[2]", "state");
    const double pr = number(e[3], where + "[3]");
    const std::size_t k = (s * na + a) * ns + t;
    if (seen[k]) throw ParseError(where, "duplicate transition entry");
    seen[k] = true;
    (first ? g.p : g.q)[k] = pr;
  }
}

void read_allowed(const json& doc, const char* name, ProductGame& g, bool first) {
  if (!doc.contains(name)) return;
  const json& obj = doc.at(name);
  if (!obj.is_object()) throw ParseError(name, "expected an object mapping states to action lists");
  const std::size_t ns = first ? g.nx() : g.ny();
  const std::size_t na = first ? g.na() : g.nb();
  auto& mask = first ? g.a_mask : g.b_mask;
  mask.assign(ns * na, 1);
  for (const auto& [key, list] : obj.items()) {
    const std::string where = std::string(name) + "." + key;
    const auto s = first ? g.x_index(key) : g.y_index(key);
    if (!s) throw ParseError(where, "unknown state '" + key + "'");
    if (!list.is_array()) throw ParseError(where, "expected an array of actions");
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(*s * na),
              mask.begin() + static_cast<std::ptrdiff_t>((*s + 1) * na), 0);
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto action = [&](const std::string& l) { return first ? g.a_index(l) : g.b_index(l); };
      mask[*s * na + resolve(list[i], na, action, where + "[" + std::to_string(i) + "]", "action")] = 1;
    }
  }
}

}  // namespace

ProductGame parse_game(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError("line 1", "expected a JSON object");

  ProductGame g(label_list(doc, "x_states"), label_list(doc, "y_states"), action_list(doc, "a_actions"),
                action_list(doc, "b_actions"));
  read_kernel(doc, "p", g, true);
  read_kernel(doc, "q", g, false);

  const json& u = field(doc, "u");
  if (!u.is_object()) throw ParseError("u", "expected an object with default and entries");
  const double def = number(field(u, "default"), "u.default");
  std::fill(g.u.begin(), g.u.end(), def);
  if (u.contains("entries")) {
    const json& arr = u["entries"];
    if (!arr.is_array()) throw ParseError("u.entries", "expected an array of [x, y, a, b, value]");
    std::vector<bool> seen(g.u.size(), false);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "u.entries[" + std::to_string(i) + "]";
      const json& e = arr[i];
      if (!e.is_array() || e.size() != 5) throw ParseError(where, "expected [x, y, a, b, value]");
      const std::size_t x = resolve(e[0], g.nx(), [&](const std::string& l) { return g.x_index(l); }, where + "[0]", "state");
      const std::size_t y = resolve(e[1], g.ny(), [&](const std::string& l) { return g.y_index(l); }, where + "[1]", "state");
      const std::size_t a = resolve(e[2], g.na(), [&](const std::string& l) { return g.a_index(l); }, where + "[2]", "action");
      const std::size_t b = resolve(e[3], g.nb(), [&](const std::string& l) { return g.b_index(l); }, where + "[3]", "action");
      const std::size_t k = ((x * g.ny() + y) * g.na() + a) * g.nb() + b;
      if (seen[k]) throw ParseError(where, "duplicate payoff entry");
      seen[k] = true;
      g.u[k] = number(e[4], where + "[4]");
    }
  }
  read_allowed(doc, "a_allowed", g, true);
  read_allowed(doc, "b_allowed", g, false);

  ValidationReport report = validate_game(g);
  if (!report.ok()) throw InvalidGameError(std::move(report));
  return g;
}

ProductGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_game(buf.str());
}

namespace {

json actions_json(const std::vector<Action>& actions) {
  json arr = json::array();
  for (const auto& a : actions) {
    if (a.params.empty())
      arr.push_back(a.label);
    else
      arr.push_back({{"label", a.label}, {"params", a.params}});
  }
  return arr;
}

json kernel_json(const std::vector<double>& k, const std::vector<std::string>& states,
                 const std::vector<Action>& actions) {
  json arr = json::array();
  const std::size_t ns = states.size(), na = actions.size();
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t t = 0; t < ns; ++t) {
        const double v = k[(s * na + a) * ns + t];
        if (v != 0.0) arr.push_back({states[s], actions[a].label, states[t], v});
      }
  return arr;
}

json allowed_json(const std::vector<std::uint8_t>& mask, const std::vector<std::string>& states,
                  const std::vector<Action>& actions) {
  json obj = json::object();
  for (std::size_t s = 0; s < states.size(); ++s) {
    json list = json::array();
    for (std::size_t a = 0; a < actions.size(); ++a)
      if (mask[s * actions.size() + a]) list.push_back(actions[a].label);
    obj[states[s]] = list;
  }
  return obj;
}

}  // namespace

std::string save_game(const ProductGame& game) {
  json doc;
  doc["x_states"] = game.x_states;
  doc["y_states"] = game.y_states;
  doc["a_actions"] = actions_json(game.a_actions);
  doc["b_actions"] = actions_json(game.b_actions);
  doc["p"] = kernel_json(game.p, game.x_states, game.a_actions);
  doc["q"] = kernel_json(game.q, game.y_states, game.b_actions);

  std::map<double, std::size_t> counts;
  for (double v : game.u) ++counts[v];
  double def = 0.0;
  std::size_t best = 0;
  for (const auto& [v, c] : counts)
    if (c > best) {
      best = c;
      def = v;
    }
  json entries = json::array();
  for (std::size_t x = 0; x < game.nx(); ++x)
    for (std::size_t y = 0; y < game.ny(); ++y)
      for (std::size_t a = 0; a < game.na(); ++a)
        for (std::size_t b = 0; b < game.nb(); ++b) {
          const double v = game.payoff(x, y, a, b);
          if (v != def)
            entries.push_back(
                {game.x_states[x], game.y_states[y], game.a_actions[a].label, game.b_actions[b].label, v});
        }
  doc["u"] = {{"default", def}, {"entries", entries}};
  if (!game.a_mask.empty()) doc["a_allowed"] = allowed_json(game.a_mask, game.x_states, game.a_actions);
  if (!game.b_mask.empty()) doc["b_allowed"] = allowed_json(game.b_mask, game.y_states, game.b_actions);
  return doc.dump(1) + "\n";
}

void write_value_csv(std::ostream& out, const ProductGame& game, const ValueTable& v) {
  out << "x,y,value\n";
  for (std::size_t x = 0; x < game.nx(); ++x)
    for (std::size_t y = 0; y < game.ny(); ++y)
      out << game.x_states[x] << ',' << game.y_states[y] << ',' << format_number(v.at(x, y)) << '\n';
}

void write_strategy_csv(std::ostream& out, const ProductGame& game, const StrategyBundle& bundle, Player player) {
  const auto& actions = player == Player::one ? game.a_actions : game.b_actions;
  out << "phase,x,y,action,weight\n";
  for (std::size_t ph = 0; ph < bundle.phase_count(); ++ph)
    for (std::size_t s = 0; s < game.joint_count(); ++s) {
      const MixedAction& m = bundle.action(ph, s);
      for (std::size_t a = 0; a < m.size(); ++a)
        if (m[a] > 0.0)
          out << ph << ',' << game.x_states[game.joint_x(s)] << ',' << game.y_states[game.joint_y(s)] << ','
              << actions[a].label << ',' << format_number(m[a]) << '\n';
    }
}

}  // namespace psg
