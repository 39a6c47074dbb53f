// hymglue: command-line runner. Every subcommand writes its tables as CSV and a
// manifest.json (config echo, file hashes, checks, diagnostics) into the
// output directory. Exit codes: 0 all checks passed, 1 a check failed, 2 bad
// configuration, 3 runtime error.

#include "config.hpp"

#include "hymglue/acceptance.hpp"
#include "hymglue/geometry.hpp"
#include "hymglue/linear.hpp"
#include "hymglue/oracle.hpp"
#include "hymglue/report.hpp"
#include "hymglue/solver.hpp"
#include "hymglue/weighted.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace hymglue::cli {
namespace {

json echo(const RunConfig& c) {
  return {{"scenario", to_string(c.scenario.id)},
          {"n", c.n},
          {"eps", c.epsilons},
          {"delta", c.delta},
          {"k", c.k},
          {"alpha", c.alpha},
          {"dsigma", c.scenario.dsigma},
          {"torus_nodes", c.scenario.torus_nodes},
          {"degree", c.scenario.degree},
          {"block_bump", c.scenario.block_bump},
          {"gauge_amplitude", c.scenario.gauge_amplitude},
          {"ladder_subdivisions", c.scenario.ladder_subdivisions},
          {"cutoff", c.scenario.cutoff == CutoffKind::Smoothstep7 ? "smoothstep7" : "smoothstep5"},
          {"ball_constant", c.ball_constant},
          {"tol", c.tol},
          {"max_iter", c.max_iter},
          {"seed", c.seed},
          {"probes", c.probes},
          {"pairs", c.pairs},
          {"directions", c.directions},
          {"indicial_window", {c.indicial_lo, c.indicial_hi}},
          {"criteria", c.criteria}};
}

// Collects the artifacts and verdicts of one subcommand run.
class Run {
 public:
  Run(std::string command, const RunConfig& c) : command_(std::move(command)), config_(c) {
    fs::create_directories(c.output);
    manifest_["command"] = command_;
    manifest_["config"] = echo(c);
    manifest_["outputs"] = json::array();
    manifest_["checks"] = json::array();
    manifest_["diagnostics"] = json::object();
  }

  void table(const std::string& name, const Table& t) {
    const std::string bytes = to_csv(t);
    const fs::path path = fs::path(config_.output) / (name + ".csv");
    write(path, bytes);
    manifest_["outputs"].push_back(
        {{"file", path.filename().string()}, {"rows", t.rows.size()}, {"sha256", sha256_hex(bytes)}});
  }

  void text(const std::string& file, const std::string& bytes) {
    const fs::path path = fs::path(config_.output) / file;
    write(path, bytes);
    manifest_["outputs"].push_back({{"file", file}, {"sha256", sha256_hex(bytes)}});
  }

  void check(const std::string& name, bool pass, const std::string& detail) {
    pass_ = pass_ && pass;
    manifest_["checks"].push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
  }

  json& diagnostics() { return manifest_["diagnostics"]; }

  int finish() {
    manifest_["pass"] = pass_;
    write(fs::path(config_.output) / "manifest.json", manifest_.dump(2) + "\n");
    std::cout << command_ << ": " << (pass_ ? "all checks passed" : "some checks failed") << " (" << config_.output
              << "/manifest.json)\n";
    return pass_ ? 0 : 1;
  }

 private:
  static void write(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    if (!out) throw Error("cli", "cannot write " + path.string());
  }

  std::string command_;
  const RunConfig& config_;
  json manifest_;
  bool pass_ = true;
};

ScenarioConfig scenario_at(const RunConfig& c, double eps) {
  ScenarioConfig s = c.scenario;
  s.epsilon = eps;
  return s;
}

std::string num(double x) { return cell(x); }

// The torus has no blowup, so eps plays no role there.
std::string eps_cell(const Scenario& s, double eps) { return s.radial() ? num(eps) : ""; }

int cmd_indicial(const RunConfig& c) {
  Run run("indicial", c);
  const std::vector<int> roots = indicial_roots(c.n, c.indicial_lo, c.indicial_hi);
  std::vector<int> oracle;
  for (int k : harmonic_degree_oracle(c.n, std::max(std::abs(c.indicial_lo), std::abs(c.indicial_hi)) + 2 * c.n))
    if (k >= c.indicial_lo && k <= c.indicial_hi) oracle.push_back(k);
  Table t;
  t.columns = {"n", "root"};
  for (int k : roots) t.add({cell(c.n), cell(k)});
  run.table("indicial", t);
  run.check("harmonic-degree oracle", roots == oracle,
            std::to_string(roots.size()) + " roots in [" + std::to_string(c.indicial_lo) + ", " +
                std::to_string(c.indicial_hi) + "]");
  return run.finish();
}

int cmd_criterion(const RunConfig& c, const std::string& command, int id, const std::string& name) {
  Run run(command, c);
  const CriterionResult r = run_acceptance(c.acceptance(), {id}).front();
  run.table(name, r.table);
  run.check(r.name, r.pass, r.summary);
  return run.finish();
}

int cmd_norms(const RunConfig& c) {
  Run run("norms", c);
  const CriterionResult r = run_acceptance(c.acceptance(), {7}).front();
  run.table("weighted_calculus", r.table);
  run.check(r.name, r.pass, r.summary);
  if (c.scenario.id != ScenarioId::FlatTorusLine) {
    Table t;
    t.columns = {"epsilon", "r", "sup_part", "seminorm_part", "outer", "annulus", "inner", "total"};
    for (double eps : c.epsilons) {
      const Scenario s = make_scenario(scenario_at(c, eps));
      const Solver solver(s);
      const NormReport rep =
          s.field_norm_report(solver.n_map(solver.zero(), solver.target(c.solver_options())), c.k, c.delta, c.alpha);
      for (const LadderEntry& e : rep.ladder)
        t.add({num(eps), num(e.r), num(e.norm.sup_part), num(e.norm.seminorm_part), num(rep.outer),
               num(rep.annulus), num(rep.inner), num(rep.total())});
    }
    run.table("n0_ladder", t);
  }
  return run.finish();
}

int cmd_residual_sweep(const RunConfig& c) {
  Run run("residual-sweep", c);
  const ResidualSweep sw = residual_sweep(scenario_at(c, c.epsilons.front()), c.epsilons, c.delta, c.alpha);
  Table t;
  t.columns = {"epsilon", "r_eps", "residual_norm", "n0_norm", "inner", "transition", "neck", "outer"};
  bool inner_ok = true;
  for (const ResidualRow& r : sw.rows) {
    inner_ok = inner_ok && r.inner < r.neck;
    t.add({num(r.epsilon), num(r.r_eps), num(r.residual_norm), num(r.n0_norm), num(r.inner), num(r.transition),
           num(r.neck), num(r.outer)});
  }
  run.table("residual_sweep", t);
  Table e;
  e.columns = {"quantity", "exponent", "expected"};
  const double target = 2.0 - c.delta;
  e.add({"n0_norm", num(sw.n0_exponent), num(target)});
  e.add({"residual_norm", num(sw.residual_exponent), ""});
  e.add({"neck", num(sw.neck_exponent), ""});
  run.table("exponents", e);
  run.check("inner below neck", inner_ok, "varrho-weighted residual at |z| <= eps against the neck, every eps");
  if (c.scenario.id == ScenarioId::RadialBallLine)
    run.check("N(0) exponent", std::abs(sw.n0_exponent - target) <= 0.15 * target,
              num(sw.n0_exponent) + " against 2 - delta = " + num(target) + " (15%)");
  return run.finish();
}

int cmd_linearize(const RunConfig& c) {
  Run run("linearize-check", c);
  const std::vector<double> steps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  Table t;
  t.columns = {"epsilon", "seed", "step", "error"};
  Table f;
  f.columns = {"epsilon", "seed", "slope"};
  double lo = 1e300, hi = -1e300;
  for (double eps : c.epsilons) {
    const Scenario s = make_scenario(scenario_at(c, eps));
    const Solver solver(s);
    for (int j = 0; j < c.directions; ++j) {
      const unsigned seed = c.seed + static_cast<unsigned>(j);
      const Solver::FdCheck fd = solver.linearization_fd_check(random_direction(s, seed), steps);
      for (std::size_t i = 0; i < fd.steps.size(); ++i)
        t.add({eps_cell(s, eps), cell(static_cast<int>(seed)), num(fd.steps[i]), num(fd.errors[i])});
      f.add({eps_cell(s, eps), cell(static_cast<int>(seed)), num(fd.slope)});
      lo = std::min(lo, fd.slope);
      hi = std::max(hi, fd.slope);
    }
    if (!s.radial()) break;
  }
  run.table("fd_errors", t);
  run.table("fd_slopes", f);
  run.check("second-order remainder", std::abs(lo - 2.0) <= 0.1 && std::abs(hi - 2.0) <= 0.1,
            "slopes in [" + num(lo) + ", " + num(hi) + "], target 2 +- 0.1");
  return run.finish();
}

int cmd_contraction(const RunConfig& c) {
  Run run("contraction", c);
  const SolverOptions o = c.solver_options();
  Table t;
  t.columns = {"epsilon", "pair", "radius", "ratio"};
  double worst = 0.0;
  for (double eps : c.epsilons) {
    const Scenario s = make_scenario(scenario_at(c, eps));
    const Solver solver(s);
    const double radius = 0.5 * c.ball_constant * std::pow(eps, -c.delta);
    for (int k = 0; k < c.pairs; ++k) {
      const unsigned seed = c.seed + 1000u + 2u * static_cast<unsigned>(k);
      EndoField a1 = random_direction(s, seed), a2 = random_direction(s, seed + 1);
      a1 = (radius / s.field_norm(a1, 2, c.delta, c.alpha)) * a1;
      a2 = (radius / s.field_norm(a2, 2, c.delta, c.alpha)) * a2;
      const double ratio = solver.contraction_ratio(a1, a2, o);
      worst = std::max(worst, ratio);
      t.add({eps_cell(s, eps), cell(k), num(radius), num(ratio)});
    }
    if (!s.radial()) break;
  }
  run.table("contraction", t);
  run.check("contraction", worst < 1.0, "largest ratio " + num(worst) + " (target < 1)");
  return run.finish();
}

int cmd_solve(const RunConfig& c) {
  Run run("solve", c);
  const SolverOptions o = c.solver_options();
  Table summary;
  summary.columns = {"epsilon", "iterations", "converged", "sup_residual", "tr_q", "c_eps_minus_c0",
                     "m_times_c_eps_minus_c0", "min_eig", "ball_exits", "monotone_residual"};
  Table history;
  history.columns = {"epsilon", "iteration", "weighted_residual", "difference", "increment_norm"};
  json runs = json::array();
  for (double eps : c.epsilons) {
    const Scenario s = make_scenario(scenario_at(c, eps));
    const Solver solver(s);
    const SolverState st = solver.iterate(o);
    const double shift = s.c_eps - s.c0;
    summary.add({eps_cell(s, eps), cell(st.iterations), cell(st.converged), num(st.final_residual), num(st.trace_q.real()),
                 num(shift), num(s.rank * shift), num(st.min_eig), cell(st.ball_exits),
                 cell(st.monotone_residual)});
    for (std::size_t i = 0; i < st.residual_history.size(); ++i)
      history.add({eps_cell(s, eps), cell(static_cast<int>(i)), num(st.residual_history[i]),
                   i < st.difference_history.size() ? num(st.difference_history[i]) : "",
                   i < st.increment_norms.size() ? num(st.increment_norms[i]) : ""});
    runs.push_back({{"epsilon", s.radial() ? json(eps) : json(nullptr)},
                    {"iterations", st.iterations},
                    {"converged", st.converged},
                    {"residual_history", st.residual_history},
                    {"ratio_estimates", st.ratio_estimates},
                    {"final_residual", st.final_residual},
                    {"tr_q", st.trace_q.real()},
                    {"c_eps_minus_c0", shift},
                    {"ball_radius", st.ball_radius},
                    {"ball_exits", st.ball_exits},
                    {"damping_events", st.damping_events},
                    {"monotone_residual", st.monotone_residual}});
    run.check(s.radial() ? "fixed point eps=" + num(eps) : "fixed point", st.converged && st.final_residual < 1e-8,
              std::to_string(st.iterations) + " iterations, sup residual " + num(st.final_residual));
    if (!s.radial()) break;
  }
  run.diagnostics()["runs"] = runs;
  run.table("solve", summary);
  run.table("residual_history", history);
  return run.finish();
}

int cmd_oracle(const RunConfig& c) {
  Run run("oracle-compare", c);
  const SolverOptions o = c.solver_options();
  Table t;
  t.columns = {"epsilon", "oracle", "quantity", "main_size", "oracle_size", "abs_deviation", "rel_deviation",
               "tolerance", "pass"};
  json reports = json::array();
  for (double eps : c.epsilons) {
    const Scenario s = make_scenario(scenario_at(c, eps));
    const Solver solver(s);
    const SolverState st = solver.iterate(o);
    std::vector<OracleReport> out;
    switch (c.scenario.id) {
      case ScenarioId::FlatTorusLine:
      case ScenarioId::RadialBallLine: out.push_back(compare_line(solver, st)); break;
      case ScenarioId::Rank2Diag: out = compare_blocks(solver, st); break;
      case ScenarioId::Rank2GaugeFlat: out.push_back(compare_flat(solver, st)); break;
    }
    for (const OracleReport& r : out) {
      t.add({eps_cell(s, eps), r.id, r.quantity, num(r.main_size()), num(r.oracle_size()), num(r.absolute_deviation()),
             num(r.relative_deviation()), num(r.tolerance), cell(r.pass())});
      reports.push_back({{"epsilon", eps}, {"oracle", r.id}, {"quantity", r.quantity},
                         {"abs_deviation", r.absolute_deviation()}, {"tolerance", r.tolerance}, {"pass", r.pass()}});
      run.check(r.id + "/" + r.quantity + (s.radial() ? " eps=" + num(eps) : ""), r.pass(),
                "deviation " + num(r.absolute_deviation()) + ", tolerance " + num(r.tolerance));
    }
    if (!s.radial()) break;
  }
  run.table("oracle", t);
  run.diagnostics()["oracle_reports"] = reports;
  if (c.scenario.id == ScenarioId::RadialBallLine) {
    const RefinementStudy rs = refinement_study(scenario_at(c, c.epsilons.front()), 4);
    Table r;
    r.columns = {"cells", "self_deviation", "ratio"};
    for (std::size_t i = 0; i < rs.self_deviation.size(); ++i)
      r.add({cell(rs.cells[i]), num(rs.self_deviation[i]), i ? num(rs.ratios[i - 1]) : ""});
    run.table("refinement", r);
  }
  return run.finish();
}

int cmd_accept(const RunConfig& c) {
  Run run("accept", c);
  json verdicts = json::array();
  for (const CriterionResult& r : run_acceptance(c.acceptance(), c.criteria)) {
    run.table("criterion_" + std::to_string(r.id), r.table);
    run.check(std::to_string(r.id) + " " + r.name, r.pass, r.summary);
    verdicts.push_back(verdict_line(r));
  }
  run.diagnostics()["verdicts"] = verdicts;
  return run.finish();
}

}  // namespace
}  // namespace hymglue::cli

int main(int argc, char** argv) {
  using namespace hymglue;
  using namespace hymglue::cli;

  if (const char* t = std::getenv("HYMGLUE_THREADS")) {
    const int threads = std::atoi(t);
    if (threads > 0) Eigen::setNbThreads(threads);
  }

  CLI::App app{"Gluing construction for Hermitian Yang-Mills metrics on blowups"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "ini file with [scenario], [sweep], [solver], ... sections")
      ->check(CLI::ExistingFile);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"geometry-check", "Burns-Simanca decay, branch agreement, neck flatness, cutoff norms"},
      {"indicial", "indicial roots of the Euclidean Laplacian in a window"},
      {"norms", "weighted-norm calculus and the ladder of N(0)"},
      {"residual-sweep", "approximate-solution residual against eps"},
      {"linearize-check", "finite-difference check of the linearization"},
      {"contraction", "contraction ratios of the fixed-point map"},
      {"solve", "fixed-point solve"},
      {"oracle-compare", "solver against the independent oracles"},
      {"accept", "the full acceptance suite"}};

  // Flags recognised on every subcommand; anything else of the form
  // --key value is taken as a config override.
  std::map<std::string, std::string> flags;
  const std::vector<std::string> known = {"scenario", "eps", "delta", "n", "window", "out", "seed", "criteria"};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->allow_extras();
    for (const std::string& key : known) sub->add_option("--" + key, flags[key + "@" + name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) load_ini(config, config_path);
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    for (const std::string& key : known)
      if (sub->count("--" + key)) apply_override(config, key, flags[key + "@" + name]);
    const std::vector<std::string> extra = sub->remaining();
    for (std::size_t i = 0; i < extra.size(); ++i) {
      if (extra[i].rfind("--", 0) != 0 || i + 1 == extra.size())
        throw ConfigError("expected --key value, got '" + extra[i] + "'");
      apply_override(config, extra[i].substr(2), extra[i + 1]);
      ++i;
    }
    validate(config);

    try {
      if (name == "geometry-check") return cmd_criterion(config, name, 8, "geometry");
      if (name == "indicial") return cmd_indicial(config);
      if (name == "norms") return cmd_norms(config);
      if (name == "residual-sweep") return cmd_residual_sweep(config);
      if (name == "linearize-check") return cmd_linearize(config);
      if (name == "contraction") return cmd_contraction(config);
      if (name == "solve") return cmd_solve(config);
      if (name == "oracle-compare") return cmd_oracle(config);
      return cmd_accept(config);
    } catch (const Error& e) {
      std::cerr << "hymglue: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "hymglue: runtime error: " << e.what() << "\n";
      return 3;
    }
  } catch (const ConfigError& e) {
    std::cerr << "hymglue: config error: " << e.what() << "\n";
    return 2;
  }
}
