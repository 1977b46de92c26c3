#pragma once

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "hjsafe/game_hamiltonian.h"
#include "hjsafe/levelset_solver.h"

namespace hjsafe {

enum class NominalPolicy { kConstantAccel, kIdmTowardLeader };

std::string_view ToString(NominalPolicy policy);
NominalPolicy NominalPolicyFromString(std::string_view name);

struct SafetyFilterConfig {
  // The filter overrides the nominal command once V(z) <= activation_margin.
  double activation_margin = 0.0;
  NominalPolicy nominal_policy = NominalPolicy::kConstantAccel;
  double nominal_accel = 0.0;      // for kConstantAccel
  double nominal_headway = 1.0;    // IDM time headway (s) for kIdmTowardLeader
  // Simulation only: also override when one zero-order-hold step of the
  // nominal command could bring V to the margin under extreme disturbances.
  bool lookahead = true;

  void Validate() const;
};

// Multilinear interpolation of the field. Throws DomainError outside the
// grid extents.
double ValueAt(const ValueField& field, const RelativeState& z);

// Central differences of the interpolant with step spacing/2 per axis. Near
// a face the stencil is shifted inward so it stays in the domain. Throws
// DomainError when z itself is outside the grid.
Costate GradientAt(const ValueField& field, const RelativeState& z);

// V(z) > margin.
bool IsSafe(const ValueField& field, const RelativeState& z, double margin);

// Ego command of the nominal policy at z.
double NominalControl(const RelativeState& z, const SafetyFilterConfig& cfg,
                      const IdmParams& idm, const ActuationBounds& bounds);

// Least-restrictive filter: u_nominal while V(z) > activation_margin, else
// the game-optimal ego input from the interpolated costate.
double SafetyFilter(const ValueField& field, const RelativeState& z,
                    double u_nominal, const SafetyFilterConfig& cfg,
                    const ActuationBounds& bounds);

// Two-dimensional cut through the field. Values are interpolated at the
// native nodes of the two free axes.
struct Slice {
  int row_dim = 0;  // varies along rows (first index)
  int col_dim = 1;
  std::vector<double> row_coords;
  std::vector<double> col_coords;
  std::vector<double> values;  // row-major, rows x cols
  std::map<int, double> fixed;

  double at(std::size_t row, std::size_t col) const {
    return values[row * col_coords.size() + col];
  }
};

// `fixed` maps state dimension -> value. All dimensions not fixed are free
// and there must be exactly two of them.
Slice ExtractSlice(const ValueField& field, const std::map<int, double>& fixed);

// Fraction of nodes whose value exceeds `margin`.
double SafeVolumeFraction(const ValueField& field, double margin = 0.0);

// Dimension names used in slices and CLI arguments.
std::string_view DimensionName(int d);
int DimensionFromName(std::string_view name);

}  // namespace hjsafe
