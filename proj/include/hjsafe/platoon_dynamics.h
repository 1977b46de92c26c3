#pragma once

#include <array>
#include <string_view>

namespace hjsafe {

// Two cars (ego behind a leader) or three cars (ego between leader and
// follower).
enum class Scenario { kTwoCar, kThreeCar };

constexpr int StateDim(Scenario scenario) {
  return scenario == Scenario::kTwoCar ? 2 : 4;
}

std::string_view ToString(Scenario scenario);
Scenario ScenarioFromString(std::string_view name);

using Vec4 = std::array<double, 4>;

// Relative platoon state.
//   x_g1: leader-to-ego gap (m)
//   v_g1: v_leader - v_ego (m/s); negative means closing on the leader
//   x_g2: ego-to-follower gap (m)
//   v_g2: v_ego - v_follower (m/s); negative means the follower is closing
// The two-car variant only uses (x_g1, v_g1); the follower pair stays zero.
// Gap positivity is deliberately not enforced here, violating states must
// be representable.
struct RelativeState {
  double x_g1 = 0.0;
  double v_g1 = 0.0;
  double x_g2 = 0.0;
  double v_g2 = 0.0;

  Vec4 AsArray() const { return {x_g1, v_g1, x_g2, v_g2}; }
  static RelativeState FromArray(const Vec4& a) {
    return {a[0], a[1], a[2], a[3]};
  }
  bool IsFinite() const;
  bool operator==(const RelativeState&) const = default;
};

// Acceleration limits. Disturbance bounds apply to the leader's input and
// also clamp the follower's modelled acceleration.
struct ActuationBounds {
  double control_lo = -2.0;
  double control_hi = 2.0;
  double dist_lo = -1.5;
  double dist_hi = 1.5;

  // Throws ConfigError unless control_lo < 0 < control_hi and
  // dist_lo < 0 < dist_hi.
  void Validate() const;
  bool operator==(const ActuationBounds&) const = default;
};

// Box constraint set K, applied to each (gap, relative speed) pair.
struct ConstraintBox {
  double x_lo = 0.0;
  double x_hi = 40.0;
  double v_lo = -10.0;
  double v_hi = 10.0;

  void Validate() const;
  bool operator==(const ConstraintBox&) const = default;
};

// Time derivative of the three-car relative state:
// (v_g1, u1 - u2, v_g2, u2 - u3).
RelativeState Flow4(const RelativeState& z, double u1, double u2, double u3);

// Two-car restriction: (v_g1, u1 - u2). Follower components are zero.
RelativeState Flow2(const RelativeState& z, double u1, double u2);

// Dispatches on the scenario; u3 is ignored for two cars.
RelativeState Flow(Scenario scenario, const RelativeState& z, double u1,
                   double u2, double u3);

// Min-of-faces margin l(z): positive inside K, zero on a face, negative
// outside. Three-car states also check the follower pair.
double ConstraintMargin(const RelativeState& z, const ConstraintBox& box,
                        Scenario scenario = Scenario::kThreeCar);

}  // namespace hjsafe
