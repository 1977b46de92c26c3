// Command-line front end: solve, query, simulate, slice.

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hjsafe/config.h"
#include "hjsafe/errors.h"
#include "hjsafe/field_io.h"
#include "hjsafe/levelset_solver.h"
#include "hjsafe/safe_set.h"
#include "hjsafe/sim_harness.h"

namespace {

enum ExitCode {
  kOk = 0,
  kConfig = 2,
  kInstability = 3,
  kNotConverged = 4,
  kIo = 5,
  kDomain = 6,
};

std::string Num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

hjsafe::RelativeState ParseState(const std::string& text, int dim) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw hjsafe::ConfigError("--state: \"" + item + "\" is not a number");
    }
  }
  if (parts.size() != static_cast<std::size_t>(dim)) {
    throw hjsafe::ConfigError("--state: expected " + std::to_string(dim) +
                              " comma-separated values");
  }
  hjsafe::Vec4 z{0, 0, 0, 0};
  for (int d = 0; d < dim; ++d) z[d] = parts[d];
  return hjsafe::RelativeState::FromArray(z);
}

int RunSolve(const std::string& config_path, const std::string& out_path) {
  const hjsafe::ScenarioConfig config = hjsafe::LoadConfig(config_path);
  const hjsafe::LevelSetSolver solver = config.MakeSolver();
  hjsafe::ValueField field = solver.Solve(
      [](const hjsafe::ValueField&, const hjsafe::ValueField&,
         const hjsafe::ProgressRecord& r) {
        if (r.iteration % 100 == 0) {
          std::cerr << "iteration=" << r.iteration << " tau=" << r.tau
                    << " max_change=" << r.max_change << "\n";
        }
      });
  const double fraction = hjsafe::SafeVolumeFraction(field);
  const bool converged = field.converged;
  hjsafe::WriteValueField(out_path,
                          hjsafe::MakeValueFieldFile(config, std::move(field)));
  const auto file = hjsafe::ReadValueField(out_path);
  std::cout << "scenario=" << hjsafe::ToString(config.scenario) << "\n"
            << "disturbance_model=" << hjsafe::ToString(config.model.kind)
            << "\n"
            << "iterations=" << file.field.iterations << "\n"
            << "tau=" << Num(file.field.tau) << "\n"
            << "converged=" << (converged ? "true" : "false") << "\n"
            << "safe_fraction=" << Num(fraction) << "\n"
            << "scenario_hash=" << file.header.scenario_hash << "\n"
            << "output=" << out_path << "\n";
  return converged ? kOk : kNotConverged;
}

int RunQuery(const std::string& field_path, const std::string& state_text,
             double nominal, double margin) {
  const auto file = hjsafe::ReadValueField(field_path);
  const hjsafe::ValueField& field = file.field;
  const hjsafe::RelativeState z = ParseState(state_text, field.grid.dim());
  const double value = hjsafe::ValueAt(field, z);
  const hjsafe::Costate p = hjsafe::GradientAt(field, z);
  hjsafe::SafetyFilterConfig cfg;
  cfg.activation_margin = margin;
  cfg.Validate();
  const double filtered =
      hjsafe::SafetyFilter(field, z, nominal, cfg, file.header.bounds);
  std::cout << "value=" << Num(value) << "\n"
            << "gradient=" << Num(p.p1) << "," << Num(p.p2);
  if (field.grid.dim() == 4) std::cout << "," << Num(p.p3) << "," << Num(p.p4);
  std::cout << "\n"
            << "safe=" << (value > margin ? "true" : "false") << "\n"
            << "filtered_control=" << Num(filtered) << "\n";
  return kOk;
}

int RunSimulate(const std::string& config_path, const std::string& field_path,
                const std::string& out_path) {
  const hjsafe::ScenarioConfig config = hjsafe::LoadConfig(config_path);
  const auto file = hjsafe::ReadValueField(field_path);
  if (file.header.scenario_hash != hjsafe::ScenarioHash(config) ||
      !(file.field.grid == config.MakeGrid())) {
    throw hjsafe::ConfigError("field " + field_path +
                              " was not produced by this config (hash " +
                              file.header.scenario_hash + " vs " +
                              hjsafe::ScenarioHash(config) + ")");
  }
  hjsafe::SimSetup setup = config.MakeSimSetup();
  setup.field = &file.field;
  const hjsafe::Trace trace = hjsafe::Run(config.simulation.initial_state,
                                          setup, config.simulation.horizon);
  hjsafe::WriteTraceCsv(out_path, trace);
  std::cout << "steps=" << trace.steps() << "\n"
            << "violation=" << (trace.violated ? "true" : "false") << "\n";
  if (trace.first_violation_time) {
    std::cout << "first_violation_time=" << Num(*trace.first_violation_time)
              << "\n";
  }
  std::cout << "left_domain=" << (trace.left_domain ? "true" : "false")
            << "\n"
            << "payoff=" << Num(hjsafe::TrajectoryPayoff(trace, config.box))
            << "\n"
            << "output=" << out_path << "\n";
  return kOk;
}

int RunSlice(const std::string& field_path,
             const std::vector<std::string>& fixes,
             const std::string& out_path) {
  const auto file = hjsafe::ReadValueField(field_path);
  std::map<int, double> fixed;
  for (const std::string& fix : fixes) {
    const auto eq = fix.find('=');
    if (eq == std::string::npos) {
      throw hjsafe::ConfigError("--fix: expected dim=value, got \"" + fix +
                                "\"");
    }
    const int d = hjsafe::DimensionFromName(fix.substr(0, eq));
    try {
      fixed[d] = std::stod(fix.substr(eq + 1));
    } catch (const std::exception&) {
      throw hjsafe::ConfigError("--fix: bad value in \"" + fix + "\"");
    }
  }
  const hjsafe::Slice slice = hjsafe::ExtractSlice(file.field, fixed);
  hjsafe::WriteSliceCsv(out_path, slice);
  std::cout << "rows=" << slice.row_coords.size() << "\n"
            << "cols=" << slice.col_coords.size() << "\n"
            << "row_dim=" << hjsafe::DimensionName(slice.row_dim) << "\n"
            << "col_dim=" << hjsafe::DimensionName(slice.col_dim) << "\n"
            << "output=" << out_path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachability-based safe sets for a car between two human drivers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string field_path;
  std::string out_path;
  std::string state;
  std::vector<std::string> fixes;
  double margin = 0.0;
  double nominal = 0.0;

  auto* solve = app.add_subcommand("solve", "Compute the invariant safe set");
  solve->add_option("--config", config_path, "Scenario JSON")->required();
  solve->add_option("--out", out_path, "Value-field output file")->required();

  auto* query = app.add_subcommand("query", "Evaluate a solved field at a state");
  query->add_option("--field", field_path, "Value-field file")->required();
  query->add_option("--state", state, "Comma-separated state")->required();
  query->add_option("--nominal", nominal, "Nominal ego acceleration");
  query->add_option("--margin", margin, "Safety / filter activation margin");

  auto* simulate = app.add_subcommand("simulate", "Closed-loop simulation");
  simulate->add_option("--config", config_path, "Scenario JSON")->required();
  simulate->add_option("--field", field_path, "Value-field file")->required();
  simulate->add_option("--out", out_path, "Trace CSV output")->required();

  auto* slice = app.add_subcommand("slice", "Export a 2D cut as CSV");
  slice->add_option("--field", field_path, "Value-field file")->required();
  slice->add_option("--fix", fixes, "dim=value, repeatable");
  slice->add_option("--out", out_path, "CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (solve->parsed()) return RunSolve(config_path, out_path);
    if (query->parsed()) return RunQuery(field_path, state, nominal, margin);
    if (simulate->parsed()) {
      return RunSimulate(config_path, field_path, out_path);
    }
    if (slice->parsed()) return RunSlice(field_path, fixes, out_path);
  } catch (const hjsafe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const hjsafe::NumericalInstabilityError& e) {
    std::cerr << "numerical instability: " << e.what() << "\n";
    return kInstability;
  } catch (const hjsafe::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const hjsafe::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  }
  return kConfig;
}
