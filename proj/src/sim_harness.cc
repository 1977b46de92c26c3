#include "hjsafe/sim_harness.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjsafe/errors.h"

namespace hjsafe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

RelativeState Axpy(double a, const RelativeState& x, const RelativeState& y) {
  return {y.x_g1 + a * x.x_g1, y.v_g1 + a * x.v_g1, y.x_g2 + a * x.x_g2,
          y.v_g2 + a * x.v_g2};
}

RelativeState Integrate(Scenario scenario, const RelativeState& z, double u1,
                        double u2, double u3, double h) {
  const auto f = [&](const RelativeState& s) {
    return Flow(scenario, s, u1, u2, u3);
  };
  const RelativeState k1 = f(z);
  const RelativeState k2 = f(Axpy(0.5 * h, k1, z));
  const RelativeState k3 = f(Axpy(0.5 * h, k2, z));
  const RelativeState k4 = f(Axpy(h, k3, z));
  RelativeState next = z;
  next = Axpy(h / 6.0, k1, next);
  next = Axpy(h / 3.0, k2, next);
  next = Axpy(h / 3.0, k3, next);
  next = Axpy(h / 6.0, k4, next);
  return next;
}

// True if holding u2 for one step keeps V above the activation margin for
// every corner of the disturbance box.
bool HoldKeepsMargin(const RelativeState& z, double u2, const SimSetup& setup) {
  const ActuationBounds& b = setup.bounds;
  const bool three = setup.scenario == Scenario::kThreeCar;
  for (double u1 : {b.dist_lo, b.dist_hi}) {
    for (double u3 : {b.dist_lo, b.dist_hi}) {
      if (!three && u3 != b.dist_lo) continue;
      const RelativeState next =
          Integrate(setup.scenario, z, u1, u2, u3, setup.dt);
      if (!setup.field->grid.Contains(next)) return false;
      if (!(ValueAt(*setup.field, next) > setup.filter.activation_margin)) {
        return false;
      }
    }
  }
  return true;
}

AppliedInputs ResolveInputs(const RelativeState& z, double t,
                            const SimSetup& setup) {
  const ActuationBounds& bounds = setup.bounds;
  const bool on_grid =
      setup.field != nullptr && setup.field->grid.Contains(z);
  std::optional<Costate> p;
  if (on_grid) p = GradientAt(*setup.field, z);

  AppliedInputs in;
  in.u1 = std::visit(
      Overloaded{
          [](const ConstantAccel& b) { return b.accel; },
          [t](const ScriptedBrake& b) { return t >= b.t_start ? b.accel : 0.0; },
          [&](const AdversarialLeader&) {
            return p ? OptimalLeaderAccel(*p, bounds) : bounds.dist_lo;
          },
      },
      setup.behavior.leader);

  if (setup.scenario == Scenario::kThreeCar) {
    in.u3 = std::visit(
        Overloaded{
            [&](const IdmFixedT& b) {
              return IdmAccel(z, b.reaction_time, setup.idm, bounds);
            },
            [&](const AdversarialReactionTime&) {
              if (!p) return bounds.dist_hi;
              const double T =
                  OptimalReactionTime(z, *p, setup.idm, setup.reaction_policy);
              return IdmAccel(z, T, setup.idm, bounds);
            },
            [&](const AdversarialExtreme&) {
              return p ? OptimalFollowerAccelBaseline(*p, bounds)
                       : bounds.dist_hi;
            },
            [](const ConstantAccel& b) { return b.accel; },
        },
        setup.behavior.follower);
  }

  const double nominal = NominalControl(z, setup.filter, setup.idm, bounds);
  in.u2 = nominal;
  if (on_grid) {
    in.u2 = SafetyFilter(*setup.field, z, nominal, setup.filter, bounds);
    if (setup.filter.lookahead && in.u2 == nominal &&
        !HoldKeepsMargin(z, nominal, setup)) {
      in.u2 = OptimalControl(*p, bounds);
    }
  }
  return in;
}

bool IsViolation(const RelativeState& z, double margin, Scenario scenario) {
  if (z.x_g1 <= 0.0 || margin < 0.0) return true;
  return scenario == Scenario::kThreeCar && z.x_g2 <= 0.0;
}

}  // namespace

SimStep StepSim(const RelativeState& z, double t, const SimSetup& setup) {
  if (!(setup.dt > 0.0)) throw ConfigError("simulation.dt: must be > 0");
  const AppliedInputs in = ResolveInputs(z, t, setup);
  const double h = setup.dt;
  const RelativeState next =
      Integrate(setup.scenario, z, in.u1, in.u2, in.u3, h);
  if (!next.IsFinite()) {
    throw NumericalInstabilityError("simulation produced a non-finite state at t=" +
                                    std::to_string(t + h));
  }
  return {next, in};
}

Trace Run(const RelativeState& z0, const SimSetup& setup, double horizon) {
  if (!(horizon > 0.0)) throw ConfigError("simulation.horizon: must be > 0");
  if (!(setup.dt > 0.0)) throw ConfigError("simulation.dt: must be > 0");
  const auto steps =
      static_cast<std::size_t>(std::ceil(horizon / setup.dt - 1e-9));
  Trace trace;
  trace.scenario = setup.scenario;
  trace.dt = setup.dt;
  trace.samples.reserve(steps + 1);

  RelativeState z = z0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * setup.dt;
    TraceSample sample;
    sample.t = t;
    sample.z = z;
    sample.margin = ConstraintMargin(z, setup.box, setup.scenario);
    const bool on_grid =
        setup.field != nullptr && setup.field->grid.Contains(z);
    sample.value = on_grid ? ValueAt(*setup.field, z)
                           : std::numeric_limits<double>::quiet_NaN();
    if (!trace.violated && IsViolation(z, sample.margin, setup.scenario)) {
      trace.violated = true;
      trace.first_violation_time = t;
    }
    if (setup.field != nullptr && !on_grid) {
      trace.left_domain = true;
      trace.samples.push_back(sample);
      break;
    }
    const SimStep step = StepSim(z, t, setup);
    sample.inputs = step.inputs;
    trace.samples.push_back(sample);
    z = step.next;
  }
  return trace;
}

double TrajectoryPayoff(const Trace& trace, const ConstraintBox& box) {
  if (trace.samples.empty()) throw Error("trajectory payoff of an empty trace");
  double payoff = std::numeric_limits<double>::infinity();
  for (const TraceSample& s : trace.samples) {
    payoff = std::min(payoff, ConstraintMargin(s.z, box, trace.scenario));
  }
  return payoff;
}

}  // namespace hjsafe
