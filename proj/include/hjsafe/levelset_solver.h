#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "hjsafe/game_hamiltonian.h"
#include "hjsafe/grid.h"
#include "hjsafe/platoon_dynamics.h"

namespace hjsafe {

// Discretized value function. `margin` keeps the initial constraint margin
// l so that V <= l can be audited at any time.
struct ValueField {
  Grid grid;
  std::vector<double> values;
  std::vector<double> margin;
  double tau = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

enum class BoundaryMode { kLinearExtrapolation };
enum class TimeIntegrator { kEuler, kRk2 };
enum class NumericalFlux { kUpwind, kLaxFriedrichs };

std::string_view ToString(TimeIntegrator integrator);
TimeIntegrator TimeIntegratorFromString(std::string_view name);
std::string_view ToString(NumericalFlux flux);
NumericalFlux NumericalFluxFromString(std::string_view name);

struct SolverSettings {
  double cfl = 0.9;
  // Stop once max |dV| / dt falls below this.
  double eps_conv = 1e-4;
  double tau_max = 40.0;
  BoundaryMode boundary_mode = BoundaryMode::kLinearExtrapolation;
  TimeIntegrator integrator = TimeIntegrator::kEuler;
  NumericalFlux flux = NumericalFlux::kUpwind;
  // 0 picks HJSAFE_WORKERS or the hardware concurrency.
  int workers = 0;

  void Validate() const;
};

// V(node) = l(node), tau = 0.
ValueField Initialize(const Grid& grid, const ConstraintBox& box,
                      Scenario scenario);

struct OneSidedGradients {
  Vec4 minus{0, 0, 0, 0};
  Vec4 plus{0, 0, 0, 0};
};

// Backward and forward differences at a node. Ghost nodes come from linear
// extrapolation, which makes both differences equal on the boundary.
OneSidedGradients ComputeOneSidedGradients(const Grid& grid,
                                           const std::vector<double>& values,
                                           std::size_t node);

// Lax-Friedrichs numerical Hamiltonian for V_tau = H*(grad V):
//   H*(z, (p- + p+)/2) + sum_i alpha_i (p+_i - p-_i) / 2.
// The dissipation enters with a plus sign because the value is marched as
// V + dt * H; this makes the update monotone under the CFL limit.
double LaxFriedrichsHamiltonian(const RelativeState& z,
                                const OneSidedGradients& grads,
                                const Vec4& alphas,
                                const DisturbanceModel& model,
                                const ActuationBounds& bounds);

// Upwind numerical Hamiltonian: the exact max over the ego input of the min
// over both disturbances of sum_i [max(f_i, 0) p+_i + min(f_i, 0) p-_i].
// For the reaction-time model the follower input ranges over the IDM
// accelerations reachable with T in [t_min, t_max].
double UpwindHamiltonian(const RelativeState& z, int dim,
                         const OneSidedGradients& grads,
                         const DisturbanceModel& model,
                         const ActuationBounds& bounds);

struct StepReport {
  double dt = 0.0;
  double max_change = 0.0;
};

struct ProgressRecord {
  std::size_t iteration = 0;
  double tau = 0.0;
  double dt = 0.0;
  double max_change = 0.0;
};

// Observer hook invoked after every accepted step with the previous and the
// updated field.
using StepObserver = std::function<void(
    const ValueField& previous, const ValueField& current,
    const ProgressRecord& record)>;

// Explicit time-marching of the minimum-payoff HJI variational inequality
//   V <- min(V, V + dt * H_LF)
// on a fixed grid. Each sweep reads one buffer and writes another; nodes are
// split across worker threads.
class LevelSetSolver {
 public:
  LevelSetSolver(Grid grid, ConstraintBox box, Scenario scenario,
                 DisturbanceModel model, ActuationBounds bounds,
                 SolverSettings settings);

  ValueField Initialize() const;

  // Advances `current` by one time step into `next`. Throws
  // NumericalInstabilityError naming the first node with a non-finite value.
  StepReport Step(const ValueField& current, ValueField& next) const;

  // Iterates until max |dV| / dt < eps_conv, the set {V > 0} is empty, or
  // tau >= tau_max. The first two set the convergence flag.
  ValueField Solve(const StepObserver& observer = {}) const;

  const Grid& grid() const { return grid_; }
  const Vec4& alphas() const { return alphas_; }
  double time_step() const { return dt_; }
  int workers() const { return workers_; }

 private:
  // Writes V + dt * min(0, H_LF(V)) into `out` and returns the index of the
  // first non-finite output, or size() if none.
  std::size_t Sweep(const std::vector<double>& in, std::vector<double>& out,
                    std::size_t begin, std::size_t end) const;
  std::size_t ParallelSweep(const std::vector<double>& in,
                            std::vector<double>& out) const;

  Grid grid_;
  ConstraintBox box_;
  Scenario scenario_;
  DisturbanceModel model_;
  ActuationBounds bounds_;
  SolverSettings settings_;
  Vec4 alphas_{};
  double dt_ = 0.0;
  int workers_ = 1;
};

// Worker count resolution: a positive request wins, then HJSAFE_WORKERS
// (0 = auto), then std::thread::hardware_concurrency().
int ResolveWorkerCount(int requested);

}  // namespace hjsafe
