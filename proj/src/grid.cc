#include "hjsafe/grid.h"

#include <string>

#include "hjsafe/errors.h"

namespace hjsafe {

Grid::Grid(int dim, const std::vector<std::size_t>& counts,
           const std::vector<Extent>& extents)
    : dim_(dim) {
  if (dim != 2 && dim != 4) throw ConfigError("grid: dim must be 2 or 4");
  if (counts.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("grid.counts: expected " + std::to_string(dim) +
                      " entries");
  }
  if (extents.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("grid.extents: expected " + std::to_string(dim) +
                      " entries");
  }
  size_ = 1;
  for (int d = 0; d < 4; ++d) {
    strides_[d] = size_;
    if (d >= dim) {
      counts_[d] = 1;
      extents_[d] = {0.0, 0.0};
      spacing_[d] = 0.0;
      continue;
    }
    if (counts[d] < 3) {
      throw ConfigError("grid.counts[" + std::to_string(d) + "]: must be >= 3");
    }
    if (!(extents[d][0] < extents[d][1])) {
      throw ConfigError("grid.extents[" + std::to_string(d) +
                        "]: require lo < hi");
    }
    counts_[d] = counts[d];
    extents_[d] = extents[d];
    spacing_[d] = (extents[d][1] - extents[d][0]) /
                  static_cast<double>(counts[d] - 1);
    size_ *= counts[d];
  }
}

std::array<std::size_t, 4> Grid::Unravel(std::size_t index) const {
  std::array<std::size_t, 4> idx{0, 0, 0, 0};
  for (int d = 0; d < 4; ++d) {
    idx[d] = index % counts_[d];
    index /= counts_[d];
  }
  return idx;
}

std::size_t Grid::Ravel(const std::array<std::size_t, 4>& idx) const {
  std::size_t index = 0;
  for (int d = 0; d < 4; ++d) index += idx[d] * strides_[d];
  return index;
}

RelativeState Grid::NodeState(std::size_t index) const {
  const auto idx = Unravel(index);
  Vec4 z{0, 0, 0, 0};
  for (int d = 0; d < dim_; ++d) z[d] = Coordinate(d, idx[d]);
  return RelativeState::FromArray(z);
}

bool Grid::Contains(const RelativeState& z) const {
  const Vec4 a = z.AsArray();
  for (int d = 0; d < dim_; ++d) {
    if (!(a[d] >= extents_[d][0] && a[d] <= extents_[d][1])) return false;
  }
  return true;
}

bool Grid::operator==(const Grid& other) const {
  return dim_ == other.dim_ && counts_ == other.counts_ &&
         extents_ == other.extents_;
}

}  // namespace hjsafe
