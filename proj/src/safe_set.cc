#include "hjsafe/safe_set.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hjsafe/errors.h"

namespace hjsafe {

std::string_view ToString(NominalPolicy policy) {
  return policy == NominalPolicy::kConstantAccel ? "constant_accel"
                                                 : "idm_toward_leader";
}

NominalPolicy NominalPolicyFromString(std::string_view name) {
  if (name == "constant_accel") return NominalPolicy::kConstantAccel;
  if (name == "idm_toward_leader") return NominalPolicy::kIdmTowardLeader;
  throw ConfigError(
      "filter.nominal_policy: expected \"constant_accel\" or "
      "\"idm_toward_leader\"");
}

void SafetyFilterConfig::Validate() const {
  if (!(activation_margin >= 0.0)) {
    throw ConfigError("filter.activation_margin: must be >= 0");
  }
  if (!(nominal_headway >= 0.0)) {
    throw ConfigError("filter.nominal_headway: must be >= 0");
  }
  if (!std::isfinite(nominal_accel)) {
    throw ConfigError("filter.nominal_accel: must be finite");
  }
}

namespace {

std::string Describe(const RelativeState& z, int dim) {
  std::string s = "(" + std::to_string(z.x_g1) + ", " + std::to_string(z.v_g1);
  if (dim == 4) {
    s += ", " + std::to_string(z.x_g2) + ", " + std::to_string(z.v_g2);
  }
  return s + ")";
}

}  // namespace

double ValueAt(const ValueField& field, const RelativeState& z) {
  const Grid& grid = field.grid;
  const int dim = grid.dim();
  if (!grid.Contains(z)) {
    throw DomainError("state " + Describe(z, dim) + " is outside the grid");
  }
  const Vec4 a = z.AsArray();
  std::array<std::size_t, 4> base{0, 0, 0, 0};
  std::array<double, 4> weight{0, 0, 0, 0};
  for (int d = 0; d < dim; ++d) {
    double t = (a[d] - grid.extent(d)[0]) / grid.spacing(d);
    // Node coordinates land on the node exactly.
    if (std::abs(t - std::round(t)) < 1e-9) t = std::round(t);
    const auto cell = static_cast<std::size_t>(std::clamp(
        std::floor(t), 0.0, static_cast<double>(grid.count(d) - 2)));
    base[d] = cell;
    weight[d] = std::clamp(t - static_cast<double>(cell), 0.0, 1.0);
  }
  double value = 0.0;
  const std::size_t corners = std::size_t{1} << dim;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t index = 0;
    for (int d = 0; d < dim; ++d) {
      const bool upper = (c >> d) & 1u;
      w *= upper ? weight[d] : 1.0 - weight[d];
      index += (base[d] + (upper ? 1 : 0)) * grid.stride(d);
    }
    if (w != 0.0) value += w * field.values[index];
  }
  return value;
}

Costate GradientAt(const ValueField& field, const RelativeState& z) {
  const Grid& grid = field.grid;
  if (!grid.Contains(z)) {
    throw DomainError("state " + Describe(z, grid.dim()) +
                      " is outside the grid");
  }
  Vec4 p{0, 0, 0, 0};
  const Vec4 center = z.AsArray();
  for (int d = 0; d < grid.dim(); ++d) {
    const double h = grid.spacing(d);
    const auto& [lo, hi] = grid.extent(d);
    Vec4 left = center;
    Vec4 right = center;
    left[d] = std::clamp(center[d] - 0.5 * h, lo, hi - h);
    right[d] = left[d] + h;
    p[d] = (ValueAt(field, RelativeState::FromArray(right)) -
            ValueAt(field, RelativeState::FromArray(left))) /
           h;
  }
  return Costate::FromArray(p);
}

bool IsSafe(const ValueField& field, const RelativeState& z, double margin) {
  return ValueAt(field, z) > margin;
}

double NominalControl(const RelativeState& z, const SafetyFilterConfig& cfg,
                      const IdmParams& idm, const ActuationBounds& bounds) {
  if (cfg.nominal_policy == NominalPolicy::kConstantAccel) {
    return std::clamp(cfg.nominal_accel, bounds.control_lo, bounds.control_hi);
  }
  if (!(z.x_g1 > 0.0)) return bounds.control_lo;
  const double v = idm.v_ego_nominal;
  const double desired =
      idm.s0 + std::max(0.0, v * cfg.nominal_headway +
                                 v * (-z.v_g1) / idm.InteractionScale());
  const double ratio = desired / z.x_g1;
  const double accel =
      idm.a * (1.0 - std::pow(v / idm.v0, idm.delta) - ratio * ratio);
  return std::clamp(accel, bounds.control_lo, bounds.control_hi);
}

double SafetyFilter(const ValueField& field, const RelativeState& z,
                    double u_nominal, const SafetyFilterConfig& cfg,
                    const ActuationBounds& bounds) {
  if (ValueAt(field, z) > cfg.activation_margin) return u_nominal;
  return OptimalControl(GradientAt(field, z), bounds);
}

Slice ExtractSlice(const ValueField& field,
                   const std::map<int, double>& fixed) {
  const Grid& grid = field.grid;
  const int dim = grid.dim();
  std::vector<int> free_dims;
  for (const auto& [d, value] : fixed) {
    if (d < 0 || d >= dim) {
      throw ConfigError("slice: dimension " + std::to_string(d) +
                        " does not exist in a " + std::to_string(dim) +
                        "D field");
    }
    const auto& [lo, hi] = grid.extent(d);
    if (!(value >= lo && value <= hi)) {
      throw DomainError("slice: " + std::string(DimensionName(d)) + "=" +
                        std::to_string(value) + " is outside [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }
  for (int d = 0; d < dim; ++d) {
    if (!fixed.contains(d)) free_dims.push_back(d);
  }
  if (free_dims.size() != 2) {
    throw ConfigError("slice: exactly two free dimensions required, got " +
                      std::to_string(free_dims.size()));
  }
  Slice slice;
  slice.row_dim = free_dims[0];
  slice.col_dim = free_dims[1];
  slice.fixed = fixed;
  for (std::size_t i = 0; i < grid.count(slice.row_dim); ++i) {
    slice.row_coords.push_back(grid.Coordinate(slice.row_dim, i));
  }
  for (std::size_t j = 0; j < grid.count(slice.col_dim); ++j) {
    slice.col_coords.push_back(grid.Coordinate(slice.col_dim, j));
  }
  slice.values.reserve(slice.row_coords.size() * slice.col_coords.size());
  Vec4 z{0, 0, 0, 0};
  for (const auto& [d, value] : fixed) z[d] = value;
  for (double r : slice.row_coords) {
    z[slice.row_dim] = r;
    for (double c : slice.col_coords) {
      z[slice.col_dim] = c;
      slice.values.push_back(ValueAt(field, RelativeState::FromArray(z)));
    }
  }
  return slice;
}

double SafeVolumeFraction(const ValueField& field, double margin) {
  if (field.values.empty()) return 0.0;
  const auto safe = std::count_if(field.values.begin(), field.values.end(),
                                  [margin](double v) { return v > margin; });
  return static_cast<double>(safe) / static_cast<double>(field.values.size());
}

std::string_view DimensionName(int d) {
  static constexpr std::string_view kNames[] = {"x_g1", "v_g1", "x_g2",
                                                "v_g2"};
  if (d < 0 || d > 3) throw ConfigError("unknown dimension index");
  return kNames[d];
}

int DimensionFromName(std::string_view name) {
  for (int d = 0; d < 4; ++d) {
    if (DimensionName(d) == name) return d;
  }
  throw ConfigError("unknown dimension \"" + std::string(name) +
                    "\" (expected x_g1, v_g1, x_g2 or v_g2)");
}

}  // namespace hjsafe
