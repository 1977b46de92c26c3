#pragma once

#include "hjsafe/platoon_dynamics.h"

namespace hjsafe {

// Intelligent Driver Model parameters for the follower. The reaction time T
// is the disturbance and ranges over [t_min, t_max].
struct IdmParams {
  double a = 1.5;       // maximum acceleration (m/s^2)
  double b = 1.5;       // comfortable deceleration (m/s^2)
  double delta = 4.0;   // acceleration exponent
  double v0 = 30.0;     // desired speed (m/s)
  double s0 = 0.0;      // minimum headway (m); zero admits collisions
  double t_min = 0.0;   // reaction-time bounds (s)
  double t_max = 2.0;
  // The relative state has no absolute speeds. The follower speed is
  // reconstructed as v_ego_nominal - v_g2.
  double v_ego_nominal = 20.0;

  void Validate() const;
  // 2 * sqrt(a * b), the IDM braking-interaction scale.
  double InteractionScale() const;
  bool operator==(const IdmParams&) const = default;
};

// max(0, v_ego_nominal - v_g2).
double FollowerSpeed(const RelativeState& z, const IdmParams& params);

// s*(z, T) = s0 + max(0, v3 T + v3 (-v_g2) / (2 sqrt(a b))).
double DesiredGap(const RelativeState& z, double reaction_time,
                  const IdmParams& params);

// Unclamped IDM acceleration. Requires x_g2 > 0.
double IdmAccelRaw(const RelativeState& z, double reaction_time,
                   const IdmParams& params);

// IDM acceleration clamped to [dist_lo, dist_hi]. Gaps x_g2 <= 0 return
// dist_lo (full braking), so the function is total.
double IdmAccel(const RelativeState& z, double reaction_time,
                const IdmParams& params, const ActuationBounds& bounds);

}  // namespace hjsafe
