#include "hjsafe/idm.h"

#include <algorithm>
#include <cmath>

#include "hjsafe/errors.h"

namespace hjsafe {

void IdmParams::Validate() const {
  if (!(a > 0.0)) throw ConfigError("idm.a: must be > 0");
  if (!(b > 0.0)) throw ConfigError("idm.b: must be > 0");
  if (!(v0 > 0.0)) throw ConfigError("idm.v0: must be > 0");
  if (!(delta >= 1.0)) throw ConfigError("idm.delta: must be >= 1");
  if (!(s0 >= 0.0)) throw ConfigError("idm.s0: must be >= 0");
  if (!(t_min >= 0.0 && t_min < t_max)) {
    throw ConfigError("idm.t_min/t_max: require 0 <= t_min < t_max");
  }
  if (!(v_ego_nominal >= 0.0)) {
    throw ConfigError("idm.v_ego_nominal: must be >= 0");
  }
}

double IdmParams::InteractionScale() const { return 2.0 * std::sqrt(a * b); }

double FollowerSpeed(const RelativeState& z, const IdmParams& params) {
  return std::max(0.0, params.v_ego_nominal - z.v_g2);
}

double DesiredGap(const RelativeState& z, double reaction_time,
                  const IdmParams& params) {
  const double v3 = FollowerSpeed(z, params);
  const double dynamic =
      v3 * reaction_time + v3 * (-z.v_g2) / params.InteractionScale();
  return params.s0 + std::max(0.0, dynamic);
}

namespace {

// (v / v0)^delta with a fast path for the usual integer exponent.
double FreeRoadTerm(double v3, const IdmParams& params) {
  const double r = v3 / params.v0;
  if (params.delta == 4.0) {
    const double r2 = r * r;
    return r2 * r2;
  }
  return std::pow(r, params.delta);
}

}  // namespace

double IdmAccelRaw(const RelativeState& z, double reaction_time,
                   const IdmParams& params) {
  const double v3 = FollowerSpeed(z, params);
  const double ratio = DesiredGap(z, reaction_time, params) / z.x_g2;
  return params.a * (1.0 - FreeRoadTerm(v3, params) - ratio * ratio);
}

double IdmAccel(const RelativeState& z, double reaction_time,
                const IdmParams& params, const ActuationBounds& bounds) {
  if (!(z.x_g2 > 0.0)) return bounds.dist_lo;
  const double raw = IdmAccelRaw(z, reaction_time, params);
  if (std::isnan(raw)) return bounds.dist_lo;
  return std::clamp(raw, bounds.dist_lo, bounds.dist_hi);
}

}  // namespace hjsafe
