#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hjsafe/game_hamiltonian.h"
#include "hjsafe/grid.h"
#include "hjsafe/levelset_solver.h"
#include "hjsafe/safe_set.h"
#include "hjsafe/sim_harness.h"

namespace hjsafe {

struct GridSpec {
  std::vector<std::size_t> counts;
  std::vector<Extent> extents;
};

struct SimulationConfig {
  double dt = 0.05;
  double horizon = 10.0;
  AgentBehavior behavior;
  RelativeState initial_state;
};

// Full scenario description. ParseConfig fills every omitted field with its
// default, so a parsed config is always complete.
struct ScenarioConfig {
  Scenario scenario = Scenario::kTwoCar;
  DisturbanceModel model;
  ActuationBounds bounds;
  ConstraintBox box;
  GridSpec grid;
  SolverSettings solver;
  SafetyFilterConfig filter;
  SimulationConfig simulation;

  Grid MakeGrid() const;
  LevelSetSolver MakeSolver() const;
  // Closed-loop setup without a field attached.
  SimSetup MakeSimSetup() const;
};

// Parses and validates JSON text. Unknown keys, type mismatches and
// invariant violations throw ConfigError naming the offending field.
ScenarioConfig ParseConfig(const std::string& text);
ScenarioConfig LoadConfig(const std::string& path);

// Normalized JSON with every field explicit.
std::string SerializeConfig(const ScenarioConfig& config);

// FNV-1a digest (16 hex digits) of everything that determines the solved
// value field.
std::string ScenarioHash(const ScenarioConfig& config);

}  // namespace hjsafe
