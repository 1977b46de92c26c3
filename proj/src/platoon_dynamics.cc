#include "hjsafe/platoon_dynamics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hjsafe/errors.h"

namespace hjsafe {

std::string_view ToString(Scenario scenario) {
  return scenario == Scenario::kTwoCar ? "two_car" : "three_car";
}

Scenario ScenarioFromString(std::string_view name) {
  if (name == "two_car") return Scenario::kTwoCar;
  if (name == "three_car") return Scenario::kThreeCar;
  throw ConfigError("scenario: expected \"two_car\" or \"three_car\", got \"" +
                    std::string(name) + "\"");
}

bool RelativeState::IsFinite() const {
  return std::isfinite(x_g1) && std::isfinite(v_g1) && std::isfinite(x_g2) &&
         std::isfinite(v_g2);
}

void ActuationBounds::Validate() const {
  if (!(control_lo < 0.0 && control_hi > 0.0)) {
    throw ConfigError("bounds.control: require control_lo < 0 < control_hi");
  }
  if (!(dist_lo < 0.0 && dist_hi > 0.0)) {
    throw ConfigError("bounds.disturbance: require dist_lo < 0 < dist_hi");
  }
}

void ConstraintBox::Validate() const {
  if (!(x_lo >= 0.0 && x_lo < x_hi)) {
    throw ConfigError("constraint_box.x: require 0 <= x_lo < x_hi");
  }
  if (!(v_lo < v_hi)) {
    throw ConfigError("constraint_box.v: require v_lo < v_hi");
  }
}

RelativeState Flow4(const RelativeState& z, double u1, double u2, double u3) {
  return {z.v_g1, u1 - u2, z.v_g2, u2 - u3};
}

RelativeState Flow2(const RelativeState& z, double u1, double u2) {
  return {z.v_g1, u1 - u2, 0.0, 0.0};
}

RelativeState Flow(Scenario scenario, const RelativeState& z, double u1,
                   double u2, double u3) {
  return scenario == Scenario::kTwoCar ? Flow2(z, u1, u2)
                                       : Flow4(z, u1, u2, u3);
}

double ConstraintMargin(const RelativeState& z, const ConstraintBox& box,
                        Scenario scenario) {
  const auto pair_margin = [&box](double x, double v) {
    return std::min({x - box.x_lo, box.x_hi - x, v - box.v_lo, box.v_hi - v});
  };
  double margin = pair_margin(z.x_g1, z.v_g1);
  if (scenario == Scenario::kThreeCar) {
    margin = std::min(margin, pair_margin(z.x_g2, z.v_g2));
  }
  return margin;
}

}  // namespace hjsafe
