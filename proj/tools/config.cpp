#include "config.hpp"

#include "hymglue/geometry.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

namespace hymglue::cli {

namespace {

double parse_plain(const std::string& s, const std::string& whole) {
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("not a number: '" + whole + "'");
  return x;
}

int parse_int(const std::string& s) {
  int x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("not an integer: '" + s + "'");
  return x;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.id", [](RunConfig& c, const std::string& v) {
         try {
           c.scenario.id = parse_scenario(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {"scenario.n", [](RunConfig& c, const std::string& v) { c.n = parse_int(v); }},
      {"scenario.rank", [](RunConfig& c, const std::string& v) { c.rank = parse_int(v); }},
      {"scenario.degree", [](RunConfig& c, const std::string& v) { c.scenario.degree = parse_int(v); }},
      {"scenario.dsigma", [](RunConfig& c, const std::string& v) { c.scenario.dsigma = parse_number(v); }},
      {"scenario.torus_nodes", [](RunConfig& c, const std::string& v) { c.scenario.torus_nodes = parse_int(v); }},
      {"scenario.block_bump", [](RunConfig& c, const std::string& v) { c.scenario.block_bump = parse_number(v); }},
      {"scenario.gauge_amplitude",
       [](RunConfig& c, const std::string& v) { c.scenario.gauge_amplitude = parse_number(v); }},
      {"scenario.ladder_subdivisions",
       [](RunConfig& c, const std::string& v) { c.scenario.ladder_subdivisions = parse_int(v); }},
      {"scenario.cutoff", [](RunConfig& c, const std::string& v) {
         if (v == "smoothstep7") c.scenario.cutoff = CutoffKind::Smoothstep7;
         else if (v == "smoothstep5") c.scenario.cutoff = CutoffKind::Smoothstep5;
         else throw ConfigError("unknown cutoff '" + v + "' (smoothstep7 or smoothstep5)");
       }},
      {"sweep.eps", [](RunConfig& c, const std::string& v) { c.epsilons = parse_number_list(v); }},
      {"sweep.delta", [](RunConfig& c, const std::string& v) { c.delta = parse_number(v); }},
      {"sweep.k", [](RunConfig& c, const std::string& v) { c.k = parse_int(v); }},
      {"sweep.alpha", [](RunConfig& c, const std::string& v) { c.alpha = parse_number(v); }},
      {"solver.ball_constant", [](RunConfig& c, const std::string& v) { c.ball_constant = parse_number(v); }},
      {"solver.tol", [](RunConfig& c, const std::string& v) { c.tol = parse_number(v); }},
      {"solver.max_iter", [](RunConfig& c, const std::string& v) { c.max_iter = parse_int(v); }},
      {"solver.seed", [](RunConfig& c, const std::string& v) { c.seed = static_cast<unsigned>(parse_int(v)); }},
      {"solver.probes", [](RunConfig& c, const std::string& v) { c.probes = parse_int(v); }},
      {"solver.pairs", [](RunConfig& c, const std::string& v) { c.pairs = parse_int(v); }},
      {"solver.directions", [](RunConfig& c, const std::string& v) { c.directions = parse_int(v); }},
      {"indicial.window", [](RunConfig& c, const std::string& v) {
         std::tie(c.indicial_lo, c.indicial_hi) = parse_window(v);
       }},
      {"acceptance.criteria", [](RunConfig& c, const std::string& v) {
         c.criteria.clear();
         for (const std::string& s : split(v)) c.criteria.push_back(parse_int(s));
       }},
      {"output.dir", [](RunConfig& c, const std::string& v) { c.output = v; }},
  };
  return table;
}

// Accepts "section.name", "name" when unique, and a few flag spellings.
const Setter& find_setter(const std::string& key) {
  static const std::map<std::string, std::string> aliases = {
      {"scenario", "scenario.id"}, {"eps", "sweep.eps"}, {"window", "indicial.window"},
      {"out", "output.dir"},       {"output", "output.dir"}};
  std::string k = key;
  for (char& ch : k)
    if (ch == '-') ch = '_';
  if (const auto a = aliases.find(k); a != aliases.end()) k = a->second;
  const auto& table = setters();
  if (const auto it = table.find(k); it != table.end()) return it->second;
  const Setter* hit = nullptr;
  for (const auto& [name, setter] : table) {
    if (name.size() > k.size() && name.compare(name.size() - k.size(), k.size(), k) == 0 &&
        name[name.size() - k.size() - 1] == '.') {
      if (hit) throw ConfigError("ambiguous key '" + key + "'");
      hit = &setter;
    }
  }
  if (!hit) throw ConfigError("unknown key '" + key + "'");
  return *hit;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  const auto e = s.find_first_of("eE");
  if (e == std::string::npos) return parse_plain(s, text);
  const double mantissa = parse_plain(s.substr(0, e), text);
  const double exponent = parse_plain(s.substr(e + 1), text);
  if (exponent == std::floor(exponent)) return parse_plain(s, text);
  return mantissa * std::pow(10.0, exponent);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& s : split(text)) out.push_back(parse_number(s));
  return out;
}

std::pair<int, int> parse_window(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ConfigError("window must look like a..b, got '" + text + "'");
  const int lo = parse_int(trim(text.substr(0, dots)));
  const int hi = parse_int(trim(text.substr(dots + 2)));
  if (lo > hi) throw ConfigError("window " + text + " is empty");
  return {lo, hi};
}

void load_ini(RunConfig& c, const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.message() + " (" + e.filename() + ":" + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError(path + ": key '" + section + "' outside a [section]");
    for (const auto& [name, value] : body) {
      const std::string key = section + "." + name;
      if (!setters().count(key)) throw ConfigError(path + ": unknown key '" + key + "'");
      try {
        setters().at(key)(c, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + key + ": " + e.what());
      }
    }
  }
}

void apply_override(RunConfig& c, const std::string& key, const std::string& value) {
  try {
    find_setter(key)(c, value);
  } catch (const ConfigError& e) {
    throw ConfigError("--" + key + ": " + e.what());
  }
}

void validate(const RunConfig& c) {
  if (c.n != 2) throw ConfigError("n = " + std::to_string(c.n) + " unsupported: scenarios are complex surfaces (n = 2)");
  const double lo = 2.0 - 2.0 * c.n;
  if (!(c.delta > lo && c.delta < 0.0))
    throw ConfigError("delta = " + std::to_string(c.delta) + " must lie in the open interval (2 - 2n, 0) = (" +
                      std::to_string(static_cast<int>(lo)) + ", 0)");
  const int rank = c.scenario.id == ScenarioId::Rank2Diag || c.scenario.id == ScenarioId::Rank2GaugeFlat ? 2 : 1;
  if (c.rank != 1 && c.rank != rank)
    throw ConfigError("rank " + std::to_string(c.rank) + " does not match scenario " + to_string(c.scenario.id));
  if (c.epsilons.empty()) throw ConfigError("eps list is empty");
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    const double e = c.epsilons[i];
    if (!(e > 0.0 && 2.0 * r_epsilon(e, c.n) < 1.0))
      throw ConfigError("eps = " + std::to_string(e) + " outside (0, eps_max): the neck 2 r_eps must stay below 1");
    if (i && !(e < c.epsilons[i - 1])) throw ConfigError("eps list must be strictly decreasing");
  }
  if (c.k < 0 || c.k > 4) throw ConfigError("k must lie in [0, 4]");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(c.ball_constant > 0.0)) throw ConfigError("ball_constant must be positive");
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.max_iter < 1 || c.probes < 1 || c.pairs < 1 || c.directions < 1)
    throw ConfigError("iteration, probe, pair and direction counts must be positive");
  if (!(c.scenario.dsigma > 0.0)) throw ConfigError("dsigma must be positive");
  for (int id : c.criteria)
    if (id < 1 || id > 9) throw ConfigError("criterion " + std::to_string(id) + " outside 1..9");
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.delta = delta;
  o.alpha = alpha;
  o.tol = tol;
  o.max_iter = max_iter;
  o.ball_constant = ball_constant;
  return o;
}

AcceptanceConfig RunConfig::acceptance() const {
  AcceptanceConfig a;
  a.epsilons = epsilons;
  a.delta = delta;
  a.alpha = alpha;
  a.dsigma = scenario.dsigma;
  a.ball_constant = ball_constant;
  a.probes = probes;
  a.contraction_pairs = pairs;
  a.fd_directions = directions;
  a.seed = seed;
  return a;
}

}  // namespace hymglue::cli
