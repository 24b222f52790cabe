#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pointopt/asymptotics.hpp"
#include "pointopt/configurations.hpp"
#include "pointopt/kernels.hpp"
#include "pointopt/optimizer.hpp"
#include "pointopt/spectral.hpp"

using nlohmann::json;
using namespace pointopt;

namespace {

struct OutputSink {
  std::string path;    // empty -> stdout
  std::string format;  // json or csv
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

// Atomic write: temp file + rename, so failures never leave partial output.
void emit(const OutputSink& sink, const std::string& payload) {
  if (sink.path.empty()) {
    std::cout << payload << "\n";
    return;
  }
  const std::string tmp = sink.path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    out << payload << "\n";
  }
  if (std::rename(tmp.c_str(), sink.path.c_str()) != 0)
    throw std::runtime_error("cannot rename output into place: " + sink.path);
}

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json runspec_json(const std::string& command, const json& fields) {
  json j = fields;
  j["schema_version"] = 1;
  j["command"] = command;
  return j;
}

json config_json(const Configuration& c) { return json::parse(to_json_string(c)); }

std::vector<double> geometric_grid(double lo, double hi, int steps) {
  if (steps < 1 || !(lo > 0.0) || !(hi >= lo))
    throw CLI::ValidationError("--alpha-min/--alpha-max/--alpha-steps form an invalid grid");
  std::vector<double> g;
  if (steps == 1) return {lo};
  for (int i = 0; i < steps; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1)));
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state optimization for finite point-interaction families"};
  app.require_subcommand(1);

  std::string setting_name_arg = "loop";
  std::string config_arg = "canonical";
  std::string out_path;
  std::string format = "json";
  double alpha = -1.0;
  double alpha_min = 0.0, alpha_max = 0.0;
  int alpha_steps = 0;
  double kappa = 1.0;
  int n = 2;
  int trials = 100;
  int starts = 20;
  std::uint64_t seed = 1;
  double congruence_tol = 1e-5;
  std::string objective = "lambda1";
  std::string mode = "weak";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--setting", setting_name_arg, "loop|circle2|circle3|sphere");
    cmd->add_option("--out", out_path, "output file (atomic write); stdout if absent");
    cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", seed);
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "ground-state eigenvalue for one configuration");
  add_common(spectrum);
  spectrum->add_option("--alpha", alpha)->required();
  spectrum->add_option("--n", n);
  spectrum->add_option("--config", config_arg, "JSON file or builtin name");

  CLI::App* optimize = app.add_subcommand("optimize", "multistart search for the optimal configuration");
  add_common(optimize);
  optimize->add_option("--alpha", alpha);
  optimize->add_option("--kappa", kappa);
  optimize->add_option("--n", n)->required();
  optimize->add_option("--starts", starts);
  optimize->add_option("--objective", objective)->check(CLI::IsMember({"lambda1", "surface-energy"}));
  optimize->add_option("--congruence-tol", congruence_tol);

  CLI::App* verify = app.add_subcommand("verify", "random-configuration campaign against the canonical maximizer");
  add_common(verify);
  verify->add_option("--alpha", alpha)->required();
  verify->add_option("--n", n)->required();
  verify->add_option("--trials", trials);

  CLI::App* conjecture = app.add_subcommand("conjecture-scan", "repulsive-loop sweep over an alpha grid");
  add_common(conjecture);
  conjecture->add_option("--n", n)->required();
  conjecture->add_option("--alpha-min", alpha_min)->required();
  conjecture->add_option("--alpha-max", alpha_max)->required();
  conjecture->add_option("--alpha-steps", alpha_steps)->required();
  conjecture->add_option("--trials", trials);

  CLI::App* design = app.add_subcommand("design-check", "spherical-design strength certification");
  add_common(design);
  design->add_option("--n", n)->required();

  CLI::App* asym = app.add_subcommand("asymptotics", "weak/strong coupling expansion checks (loop)");
  add_common(asym);
  asym->add_option("--mode", mode)->check(CLI::IsMember({"weak", "strong"}));
  asym->add_option("--n", n);
  asym->add_option("--config", config_arg);
  asym->add_option("--alpha-min", alpha_min);
  asym->add_option("--alpha-max", alpha_max);
  asym->add_option("--alpha-steps", alpha_steps);

  CLI11_PARSE(app, argc, argv);

  const OutputSink sink{out_path, format};

  try {
    const Setting setting = setting_from_name(setting_name_arg);

    if (*spectrum) {
      const Configuration cfg = resolve_config(config_arg, setting, n);
      const SpectralResult r = solve_ground(setting, alpha, cfg);
      json j = json::parse(spectral_result_to_json(setting, alpha, cfg, r));
      j["config"] = config_json(cfg);
      j["runspec"] = runspec_json("spectrum", {{"setting", setting_name_arg},
                                               {"alpha", alpha},
                                               {"config", config_arg},
                                               {"seed", seed},
                                               {"format", format}});
      j["timestamp"] = iso_timestamp();
      if (format == "csv") {
        emit(sink, "setting,alpha,N,lambda1,residual\n" + setting_name_arg + "," +
                       csv_double(alpha) + "," + std::to_string(cfg.size()) + "," +
                       csv_double(r.lambda1) + "," + csv_double(r.residual));
      } else {
        emit(sink, j.dump(2));
      }
      std::cerr << "lambda1 = " << r.lambda1 << " (residual " << r.residual << ")\n";
      return 0;
    }

    if (*optimize) {
      OptimizationReport rep;
      if (objective == "surface-energy") {
        rep = minimize_surface_energy(kappa, n, starts, seed, congruence_tol);
      } else {
        rep = maximize_lambda1(setting, alpha, n, starts, seed, congruence_tol);
      }
      json j;
      j["best_value"] = rep.best_value;
      j["best_config"] = config_json(rep.best_config);
      j["starts"] = rep.starts;
      j["converged_starts"] = rep.converged_starts;
      j["per_start_values"] = rep.per_start_values;
      j["matched_canonical"] = rep.matched_canonical;
      j["tolerance_used"] = rep.tolerance_used;
      j["runspec"] = runspec_json("optimize", {{"setting", setting_name_arg},
                                               {"objective", objective},
                                               {"alpha", alpha},
                                               {"kappa", kappa},
                                               {"N", n},
                                               {"starts", starts},
                                               {"seed", seed},
                                               {"format", format}});
      j["timestamp"] = iso_timestamp();
      if (format == "csv") {
        std::string csv = "start,value";
        for (std::size_t i = 0; i < rep.per_start_values.size(); ++i)
          csv += "\n" + std::to_string(i) + "," + csv_double(rep.per_start_values[i]);
        emit(sink, csv);
      } else {
        emit(sink, j.dump(2));
      }
      std::cerr << "best value " << rep.best_value
                << (rep.matched_canonical ? " (canonical configuration recovered)\n" : "\n");
      return 0;
    }

    if (*verify) {
      const VerifyReport rep = verify_theorem(setting, alpha, n, trials, seed);
      json samples = json::array();
      for (const TrialSample& s : rep.samples)
        samples.push_back({{"trial", s.index},
                           {"lambda1", s.bound_state ? json(s.lambda1) : json(nullptr)},
                           {"margin", s.bound_state ? json(s.margin) : json(nullptr)},
                           {"congruent", s.congruent},
                           {"bound_state", s.bound_state}});
      json j = {{"setting", setting_name_arg},
                {"alpha", alpha},
                {"N", n},
                {"trials", trials},
                {"violations", rep.violations},
                {"no_bound_state", rep.no_bound_state},
                {"min_gap", rep.min_gap},
                {"lambda_canonical", rep.lambda_canonical},
                {"samples", samples}};
      j["runspec"] = runspec_json("verify", {{"setting", setting_name_arg},
                                             {"alpha", alpha},
                                             {"N", n},
                                             {"trials", trials},
                                             {"seed", seed},
                                             {"format", format}});
      j["timestamp"] = iso_timestamp();
      if (format == "csv") {
        std::string csv = "trial,lambda1,margin,congruent,bound_state";
        for (const TrialSample& s : rep.samples)
          csv += "\n" + std::to_string(s.index) + "," + csv_double(s.lambda1) + "," +
                 csv_double(s.margin) + "," + (s.congruent ? "1" : "0") + "," +
                 (s.bound_state ? "1" : "0");
        emit(sink, csv);
      } else {
        emit(sink, j.dump(2));
      }
      std::cerr << "violations: " << rep.violations << " in " << trials
                << " trials (min_gap " << rep.min_gap << ")\n";
      return 0;
    }

    if (*conjecture) {
      const std::vector<double> grid = geometric_grid(alpha_min, alpha_max, alpha_steps);
      const ConjectureReport rep = conjecture_scan(n, grid, trials, seed);
      json rows = json::array();
      for (const ConjectureRow& r : rep.rows)
        rows.push_back({{"alpha", r.alpha}, {"violations", r.violations}, {"min_gap", r.min_gap}});
      json j = {{"rows", rows}};
      j["runspec"] = runspec_json("conjecture-scan", {{"N", n},
                                                      {"alpha_min", alpha_min},
                                                      {"alpha_max", alpha_max},
                                                      {"alpha_steps", alpha_steps},
                                                      {"trials", trials},
                                                      {"seed", seed},
                                                      {"format", format}});
      j["timestamp"] = iso_timestamp();
      if (format == "csv") {
        std::string csv = "alpha,violations,min_gap";
        for (const ConjectureRow& r : rep.rows)
          csv += "\n" + csv_double(r.alpha) + "," + std::to_string(r.violations) + "," +
                 csv_double(r.min_gap);
        emit(sink, csv);
      } else {
        emit(sink, j.dump(2));
      }
      int total = 0;
      for (const ConjectureRow& r : rep.rows) total += r.violations;
      std::cerr << "total violations across grid: " << total << "\n";
      return 0;
    }

    if (*design) {
      auto [cfg, info] = sharp_sphere(n);
      const int strength = spherical_design_strength(cfg, 8);
      json j = {{"name", info.name},
                {"N", info.n},
                {"inner_products", info.inner_products},
                {"m", info.m},
                {"declared_design_strength", info.design_strength},
                {"design_strength", strength}};
      j["runspec"] = runspec_json("design-check",
                                  {{"N", n}, {"seed", seed}, {"format", format}});
      j["timestamp"] = iso_timestamp();
      emit(sink, format == "csv"
                     ? "N,design_strength\n" + std::to_string(n) + "," + std::to_string(strength)
                     : j.dump(2));
      std::cerr << info.name << ": design strength " << strength << "\n";
      return 0;
    }

    if (*asym) {
      const Configuration cfg = resolve_config(config_arg, Setting::Loop, n);
      json j;
      std::vector<ExpansionRow> rows;
      if (mode == "weak") {
        const std::vector<double> grid =
            alpha_steps > 0 ? geometric_grid(alpha_min, alpha_max, alpha_steps)
                            : geometric_grid(0.01, 0.1, 6);
        const WeakCheckReport rep = weak_expansion_check(cfg, grid);
        rows = rep.rows;
        j = {{"mode", "weak"},
             {"c1", rep.c1},
             {"c2", rep.c2},
             {"c1_estimate", rep.c1_estimate},
             {"exponent", rep.exponent},
             {"prefactor", rep.prefactor}};
        std::cerr << "fitted remainder exponent " << rep.exponent << "\n";
      } else {
        const std::vector<double> grid =
            alpha_steps > 0 ? geometric_grid(alpha_min, alpha_max, alpha_steps)
                            : geometric_grid(10.0, 1000.0, 3);
        const StrongCheckReport rep = strong_limit_check(cfg, grid);
        rows = rep.rows;
        j = {{"mode", "strong"},
             {"monotone", rep.monotone},
             {"below_dirichlet", rep.below_dirichlet},
             {"dirichlet", rep.dirichlet},
             {"c_estimate", rep.c_estimate}};
        std::cerr << "dirichlet limit " << rep.dirichlet << ", c ~ " << rep.c_estimate << "\n";
      }
      json jr = json::array();
      for (const ExpansionRow& r : rows)
        jr.push_back({{"alpha", r.alpha},
                      {"lambda1", r.lambda1},
                      {"model_value", r.model},
                      {"residual", r.residual}});
      j["rows"] = jr;
      j["runspec"] = runspec_json("asymptotics", {{"mode", mode},
                                                  {"N", n},
                                                  {"config", config_arg},
                                                  {"seed", seed},
                                                  {"format", format}});
      j["timestamp"] = iso_timestamp();
      if (format == "csv") {
        std::string csv = "alpha,lambda1,model_value,residual";
        for (const ExpansionRow& r : rows)
          csv += "\n" + csv_double(r.alpha) + "," + csv_double(r.lambda1) + "," +
                 csv_double(r.model) + "," + csv_double(r.residual);
        emit(sink, csv);
      } else {
        emit(sink, j.dump(2));
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    json err = {{"error", "usage"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err = {{"error", "solver"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}
