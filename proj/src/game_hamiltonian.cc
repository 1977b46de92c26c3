#include "hjsafe/game_hamiltonian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hjsafe/errors.h"

namespace hjsafe {

std::string_view ToString(ReactionPolicy policy) {
  return policy == ReactionPolicy::kExact ? "exact" : "negated";
}

ReactionPolicy ReactionPolicyFromString(std::string_view name) {
  if (name == "exact") return ReactionPolicy::kExact;
  if (name == "negated") return ReactionPolicy::kNegated;
  throw ConfigError("reaction_policy: expected \"exact\" or \"negated\"");
}

std::string_view ToString(DisturbanceModel::Kind kind) {
  return kind == DisturbanceModel::Kind::kExtremeAction ? "extreme"
                                                        : "reaction_time";
}

DisturbanceModel::Kind DisturbanceKindFromString(std::string_view name) {
  if (name == "extreme") return DisturbanceModel::Kind::kExtremeAction;
  if (name == "reaction_time") return DisturbanceModel::Kind::kReactionTime;
  throw ConfigError(
      "disturbance_model: expected \"extreme\" or \"reaction_time\", got \"" +
      std::string(name) + "\"");
}

double OptimalControl(const Costate& p, const ActuationBounds& bounds) {
  return (p.p4 - p.p2) > 0.0 ? bounds.control_hi : bounds.control_lo;
}

double OptimalLeaderAccel(const Costate& p, const ActuationBounds& bounds) {
  return p.p2 < 0.0 ? bounds.dist_hi : bounds.dist_lo;
}

double OptimalFollowerAccelBaseline(const Costate& p,
                                    const ActuationBounds& bounds) {
  return p.p4 > 0.0 ? bounds.dist_hi : bounds.dist_lo;
}

double OptimalReactionTime(const RelativeState& z, const Costate& p,
                           const IdmParams& params, ReactionPolicy policy) {
  const double scale = params.InteractionScale();
  if (policy == ReactionPolicy::kExact) {
    if (p.p4 > 0.0) {
      // Any T at or below v_g2 / scale zeroes the dynamic part of s*.
      return std::clamp(z.v_g2 / scale, params.t_min, params.t_max);
    }
    return params.t_max;
  }
  if (p.p4 > 0.0) {
    return std::min(params.t_max, std::max(params.t_min, -z.v_g2 / scale));
  }
  // |scale * T + v_g2| is convex in T, so an endpoint attains the max.
  const double at_min = std::abs(scale * params.t_min + z.v_g2);
  const double at_max = std::abs(scale * params.t_max + z.v_g2);
  return at_min > at_max ? params.t_min : params.t_max;
}

GameInputs OptimalInputs(const RelativeState& z, const Costate& p,
                         const DisturbanceModel& model,
                         const ActuationBounds& bounds) {
  GameInputs in;
  in.u1 = OptimalLeaderAccel(p, bounds);
  in.u2 = OptimalControl(p, bounds);
  if (model.kind == DisturbanceModel::Kind::kExtremeAction) {
    in.u3 = OptimalFollowerAccelBaseline(p, bounds);
    in.reaction_time = std::numeric_limits<double>::quiet_NaN();
  } else {
    in.reaction_time =
        OptimalReactionTime(z, p, model.idm, model.reaction_policy);
    in.u3 = IdmAccel(z, in.reaction_time, model.idm, bounds);
  }
  return in;
}

double Hamiltonian(const RelativeState& z, const Costate& p,
                   const DisturbanceModel& model,
                   const ActuationBounds& bounds) {
  const GameInputs in = OptimalInputs(z, p, model, bounds);
  return p.p1 * z.v_g1 + p.p2 * (in.u1 - in.u2) + p.p3 * z.v_g2 +
         p.p4 * (in.u2 - in.u3);
}

Vec4 DissipationBounds(const std::array<std::array<double, 2>, 4>& extents,
                       int dim, const ActuationBounds& bounds) {
  const auto max_abs = [](const std::array<double, 2>& e) {
    return std::max(std::abs(e[0]), std::abs(e[1]));
  };
  const double leader_rate = std::max(bounds.dist_hi - bounds.control_lo,
                                      bounds.control_hi - bounds.dist_lo);
  const double follower_rate = std::max(bounds.control_hi - bounds.dist_lo,
                                        bounds.dist_hi - bounds.control_lo);
  Vec4 alphas{max_abs(extents[1]), leader_rate, 0.0, 0.0};
  if (dim == 4) {
    alphas[2] = max_abs(extents[3]);
    alphas[3] = follower_rate;
  }
  return alphas;
}

}  // namespace hjsafe
