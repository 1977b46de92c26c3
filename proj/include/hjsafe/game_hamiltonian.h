#pragma once

#include <array>
#include <string_view>

#include "hjsafe/idm.h"
#include "hjsafe/platoon_dynamics.h"

namespace hjsafe {

// Spatial gradient of the value function, ordered like RelativeState.
// The two-car game leaves p3 = p4 = 0.
struct Costate {
  double p1 = 0.0;  // dV/dx_g1
  double p2 = 0.0;  // dV/dv_g1
  double p3 = 0.0;  // dV/dx_g2
  double p4 = 0.0;  // dV/dv_g2

  Vec4 AsArray() const { return {p1, p2, p3, p4}; }
  static Costate FromArray(const Vec4& a) { return {a[0], a[1], a[2], a[3]}; }
};

// How the reaction-time disturbance is chosen from the costate.
//   kExact:     the pointwise optimum of the follower term. For p4 > 0 the
//               desired gap is driven to its minimum by
//               T = clamp(v_g2 / (2 sqrt(ab))); otherwise T = t_max, which
//               maximizes the desired gap.
//   kNegated: the closed form with T = clamp(-v_g2 / (2 sqrt(ab))) for
//               p4 > 0 and the endpoint maximizing |2 sqrt(ab) T + v_g2|
//               otherwise. Kept for comparison; it is not a minimizer of the
//               Hamiltonian for every state.
enum class ReactionPolicy { kExact, kNegated };

std::string_view ToString(ReactionPolicy policy);
ReactionPolicy ReactionPolicyFromString(std::string_view name);

// Follower disturbance model: raw acceleration extremes (baseline) or an IDM
// driver whose reaction time is adversarial.
struct DisturbanceModel {
  enum class Kind { kExtremeAction, kReactionTime };

  Kind kind = Kind::kExtremeAction;
  IdmParams idm;
  ReactionPolicy reaction_policy = ReactionPolicy::kExact;

  static DisturbanceModel ExtremeAction() { return {}; }
  static DisturbanceModel ReactionTime(
      const IdmParams& idm,
      ReactionPolicy policy = ReactionPolicy::kExact) {
    return {Kind::kReactionTime, idm, policy};
  }
};

std::string_view ToString(DisturbanceModel::Kind kind);
DisturbanceModel::Kind DisturbanceKindFromString(std::string_view name);

// Ego input maximizing the Hamiltonian: control_hi iff p4 - p2 > 0.
double OptimalControl(const Costate& p, const ActuationBounds& bounds);

// Leader input minimizing the Hamiltonian: dist_hi iff p2 < 0.
double OptimalLeaderAccel(const Costate& p, const ActuationBounds& bounds);

// Baseline follower input: dist_hi iff p4 > 0.
double OptimalFollowerAccelBaseline(const Costate& p,
                                    const ActuationBounds& bounds);

// Adversarial reaction time for the IDM follower. Depends on p only through
// the sign of p4.
double OptimalReactionTime(const RelativeState& z, const Costate& p,
                           const IdmParams& params,
                           ReactionPolicy policy = ReactionPolicy::kExact);

// Saddle inputs at (z, p). reaction_time is NaN under the baseline model.
struct GameInputs {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
  double reaction_time = 0.0;
};

GameInputs OptimalInputs(const RelativeState& z, const Costate& p,
                         const DisturbanceModel& model,
                         const ActuationBounds& bounds);

// H*(z, p) = max_u2 min_{d1, d2} p . f(z, u1, u2, u3). The inputs enter
// through disjoint costate coefficients, so pointwise optimization is exact.
double Hamiltonian(const RelativeState& z, const Costate& p,
                   const DisturbanceModel& model,
                   const ActuationBounds& bounds);

// Per-dimension bounds on |dH/dp_i| over the state extents, used as
// Lax-Friedrichs dissipation coefficients. `extents` holds (lo, hi) per state
// dimension; entries past `dim` are ignored and their alphas are zero.
Vec4 DissipationBounds(const std::array<std::array<double, 2>, 4>& extents,
                       int dim, const ActuationBounds& bounds);

}  // namespace hjsafe
