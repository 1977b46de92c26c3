#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hjsafe/platoon_dynamics.h"

namespace hjsafe {

using Extent = std::array<double, 2>;

// Uniform rectangular grid over the relative state space, 2 or 4
// dimensions. Nodes are stored with the first state dimension varying
// fastest. Dimensions past `dim()` are padded with a single node so that
// kernels can always loop over four axes.
class Grid {
 public:
  Grid() = default;
  // Throws ConfigError unless dim is 2 or 4, every count is >= 3 and every
  // extent is strictly ordered.
  Grid(int dim, const std::vector<std::size_t>& counts,
       const std::vector<Extent>& extents);

  int dim() const { return dim_; }
  std::size_t count(int d) const { return counts_[d]; }
  const Extent& extent(int d) const { return extents_[d]; }
  double spacing(int d) const { return spacing_[d]; }
  std::size_t stride(int d) const { return strides_[d]; }
  std::size_t size() const { return size_; }
  const std::array<Extent, 4>& extents() const { return extents_; }

  double Coordinate(int d, std::size_t i) const {
    return extents_[d][0] + static_cast<double>(i) * spacing_[d];
  }
  std::array<std::size_t, 4> Unravel(std::size_t index) const;
  std::size_t Ravel(const std::array<std::size_t, 4>& idx) const;
  RelativeState NodeState(std::size_t index) const;
  // Inclusive bounds check on the first dim() coordinates.
  bool Contains(const RelativeState& z) const;

  bool operator==(const Grid& other) const;

 private:
  int dim_ = 0;
  std::array<std::size_t, 4> counts_{1, 1, 1, 1};
  std::array<Extent, 4> extents_{};
  std::array<double, 4> spacing_{0, 0, 0, 0};
  std::array<std::size_t, 4> strides_{0, 0, 0, 0};
  std::size_t size_ = 0;
};

}  // namespace hjsafe
