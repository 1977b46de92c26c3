#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "hjsafe/game_hamiltonian.h"
#include "hjsafe/levelset_solver.h"
#include "hjsafe/safe_set.h"

namespace hjsafe {

// Leader behaviors.
struct ConstantAccel {
  double accel = 0.0;
};
struct ScriptedBrake {
  double t_start = 0.0;
  double accel = -1.5;
};
// Leader reads the costate of the field: dist_hi iff p2 < 0.
struct AdversarialLeader {};

// Follower behaviors.
struct IdmFixedT {
  double reaction_time = 1.0;
};
// IDM follower whose reaction time is chosen from the costate.
struct AdversarialReactionTime {};
// Follower picks extreme accelerations from the costate: dist_hi iff p4 > 0.
struct AdversarialExtreme {};

using LeaderBehavior = std::variant<ConstantAccel, ScriptedBrake,
                                    AdversarialLeader>;
using FollowerBehavior =
    std::variant<IdmFixedT, AdversarialReactionTime, AdversarialExtreme,
                 ConstantAccel>;

struct AgentBehavior {
  LeaderBehavior leader = AdversarialLeader{};
  FollowerBehavior follower = IdmFixedT{};
};

// Everything the closed loop needs apart from the initial state.
struct SimSetup {
  Scenario scenario = Scenario::kThreeCar;
  AgentBehavior behavior;
  ActuationBounds bounds;
  ConstraintBox box;
  IdmParams idm;
  ReactionPolicy reaction_policy = ReactionPolicy::kExact;
  SafetyFilterConfig filter;
  // Without a field the ego applies its nominal command unfiltered and
  // adversarial behaviors use their fallback extremes.
  const ValueField* field = nullptr;
  double dt = 0.05;
};

struct AppliedInputs {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
};

struct SimStep {
  RelativeState next;
  AppliedInputs inputs;
};

// One zero-order-hold step of length dt at time t, integrated with the
// classical fourth-order Runge-Kutta rule. Throws NumericalInstabilityError
// on a non-finite state.
SimStep StepSim(const RelativeState& z, double t, const SimSetup& setup);

struct TraceSample {
  double t = 0.0;
  RelativeState z;
  AppliedInputs inputs;  // inputs applied from this sample to the next
  double value = 0.0;    // NaN outside the field or without a field
  double margin = 0.0;
};

struct Trace {
  Scenario scenario = Scenario::kThreeCar;
  double dt = 0.0;
  std::vector<TraceSample> samples;
  bool violated = false;
  std::optional<double> first_violation_time;
  // True when the run ended early because the state left the grid.
  bool left_domain = false;

  std::size_t steps() const {
    return samples.empty() ? 0 : samples.size() - 1;
  }
};

// Simulates ceil(horizon / dt) steps. A violation is recorded at the first
// sample with a non-positive gap or a negative constraint margin. The run
// stops early only if a field is attached and the state leaves its grid.
Trace Run(const RelativeState& z0, const SimSetup& setup, double horizon);

// Lowest constraint margin along the trace. Throws on an empty trace.
double TrajectoryPayoff(const Trace& trace, const ConstraintBox& box);

}  // namespace hjsafe
