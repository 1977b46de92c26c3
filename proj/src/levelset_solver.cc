#include "hjsafe/levelset_solver.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "hjsafe/errors.h"
#include "parallel.h"

namespace hjsafe {

std::string_view ToString(TimeIntegrator integrator) {
  return integrator == TimeIntegrator::kEuler ? "euler" : "rk2";
}

TimeIntegrator TimeIntegratorFromString(std::string_view name) {
  if (name == "euler") return TimeIntegrator::kEuler;
  if (name == "rk2") return TimeIntegrator::kRk2;
  throw ConfigError("solver.integrator: expected \"euler\" or \"rk2\"");
}

std::string_view ToString(NumericalFlux flux) {
  return flux == NumericalFlux::kUpwind ? "upwind" : "lax_friedrichs";
}

NumericalFlux NumericalFluxFromString(std::string_view name) {
  if (name == "upwind") return NumericalFlux::kUpwind;
  if (name == "lax_friedrichs") return NumericalFlux::kLaxFriedrichs;
  throw ConfigError("solver.flux: expected \"upwind\" or \"lax_friedrichs\"");
}

void SolverSettings::Validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    throw ConfigError("solver.cfl: must lie in (0, 1]");
  }
  if (!(eps_conv > 0.0)) throw ConfigError("solver.eps_conv: must be > 0");
  if (!(tau_max > 0.0)) throw ConfigError("solver.tau_max: must be > 0");
  if (workers < 0) throw ConfigError("solver.workers: must be >= 0");
}

int ResolveWorkerCount(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HJSAFE_WORKERS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) {
      return static_cast<int>(parsed);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ValueField Initialize(const Grid& grid, const ConstraintBox& box,
                      Scenario scenario) {
  ValueField field;
  field.grid = grid;
  field.margin.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    field.margin[k] = ConstraintMargin(grid.NodeState(k), box, scenario);
  }
  field.values = field.margin;
  return field;
}

namespace {

// Differences along one axis at a node with index i of n.
inline void AxisDifferences(const double* v, std::size_t k, std::size_t i,
                            std::size_t n, std::size_t stride, double h,
                            double& minus, double& plus) {
  if (i == 0) {
    plus = (v[k + stride] - v[k]) / h;
    minus = plus;
  } else if (i + 1 == n) {
    minus = (v[k] - v[k - stride]) / h;
    plus = minus;
  } else {
    minus = (v[k] - v[k - stride]) / h;
    plus = (v[k + stride] - v[k]) / h;
  }
}

}  // namespace

OneSidedGradients ComputeOneSidedGradients(const Grid& grid,
                                           const std::vector<double>& values,
                                           std::size_t node) {
  OneSidedGradients g;
  const auto idx = grid.Unravel(node);
  for (int d = 0; d < grid.dim(); ++d) {
    AxisDifferences(values.data(), node, idx[d], grid.count(d),
                    grid.stride(d), grid.spacing(d), g.minus[d], g.plus[d]);
  }
  return g;
}

double LaxFriedrichsHamiltonian(const RelativeState& z,
                                const OneSidedGradients& grads,
                                const Vec4& alphas,
                                const DisturbanceModel& model,
                                const ActuationBounds& bounds) {
  Vec4 mean{};
  double dissipation = 0.0;
  for (int d = 0; d < 4; ++d) {
    mean[d] = 0.5 * (grads.minus[d] + grads.plus[d]);
    dissipation += alphas[d] * 0.5 * (grads.plus[d] - grads.minus[d]);
  }
  return Hamiltonian(z, Costate::FromArray(mean), model, bounds) +
         dissipation;
}

namespace {

// Upwinded directional derivative along a drift component f.
inline double Upwind(double f, double minus, double plus) {
  return f > 0.0 ? f * plus : f * minus;
}

// min over w in [lo, hi] of Upwind(sign * (w - u)) where the drift is
// (w - u) for sign = +1 and (u - w) for sign = -1. A piecewise-linear
// function of w with one kink attains its minimum at an endpoint or the
// kink w = u.
inline double MinOverInterval(double u, double lo, double hi, double sign,
                              double minus, double plus) {
  double best = std::min(Upwind(sign * (lo - u), minus, plus),
                         Upwind(sign * (hi - u), minus, plus));
  if (u > lo && u < hi) best = std::min(best, 0.0);
  return best;
}

// Ego inputs where the drift of the interval-min switches branch: the
// interval ends crossing zero drift, and the point where both endpoint
// values coincide while straddling the kink.
inline void AppendBreakpoints(double lo, double hi, double sign, double minus,
                              double plus, std::array<double, 16>& out,
                              std::size_t& n) {
  out[n++] = lo;
  out[n++] = hi;
  // sign * (lo - u) * minus/plus == sign * (hi - u) * plus/minus.
  const double denom = minus - plus;
  if (denom != 0.0) {
    out[n++] = sign > 0.0 ? (minus * lo - plus * hi) / denom
                          : (minus * hi - plus * lo) / denom;
  }
}

}  // namespace

double UpwindHamiltonian(const RelativeState& z, int dim,
                         const OneSidedGradients& grads,
                         const DisturbanceModel& model,
                         const ActuationBounds& bounds) {
  const Vec4& pm = grads.minus;
  const Vec4& pp = grads.plus;
  double transport = Upwind(z.v_g1, pm[0], pp[0]);

  const bool follower = dim == 4;
  double f_lo = 0.0;
  double f_hi = 0.0;
  if (follower) {
    transport += Upwind(z.v_g2, pm[2], pp[2]);
    if (model.kind == DisturbanceModel::Kind::kExtremeAction) {
      f_lo = bounds.dist_lo;
      f_hi = bounds.dist_hi;
    } else {
      // The IDM acceleration is non-increasing in T.
      f_lo = IdmAccel(z, model.idm.t_max, model.idm, bounds);
      f_hi = IdmAccel(z, model.idm.t_min, model.idm, bounds);
    }
  }

  const auto inner = [&](double u) {
    // Leader drift d1 - u, follower drift u - u3.
    double value = MinOverInterval(u, bounds.dist_lo, bounds.dist_hi, 1.0,
                                   pm[1], pp[1]);
    if (follower) {
      value += MinOverInterval(u, f_lo, f_hi, -1.0, pm[3], pp[3]);
    }
    return value;
  };

  std::array<double, 16> candidates{};
  std::size_t n = 0;
  candidates[n++] = bounds.control_lo;
  candidates[n++] = bounds.control_hi;
  AppendBreakpoints(bounds.dist_lo, bounds.dist_hi, 1.0, pm[1], pp[1],
                    candidates, n);
  if (follower) {
    AppendBreakpoints(f_lo, f_hi, -1.0, pm[3], pp[3], candidates, n);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = candidates[i];
    if (!(u >= bounds.control_lo && u <= bounds.control_hi)) continue;
    best = std::max(best, inner(u));
  }
  return transport + best;
}

LevelSetSolver::LevelSetSolver(Grid grid, ConstraintBox box,
                               Scenario scenario, DisturbanceModel model,
                               ActuationBounds bounds,
                               SolverSettings settings)
    : grid_(std::move(grid)),
      box_(box),
      scenario_(scenario),
      model_(model),
      bounds_(bounds),
      settings_(settings) {
  if (grid_.dim() != StateDim(scenario_)) {
    throw ConfigError("grid: dimension does not match scenario " +
                      std::string(ToString(scenario_)));
  }
  box_.Validate();
  bounds_.Validate();
  settings_.Validate();
  if (model_.kind == DisturbanceModel::Kind::kReactionTime) {
    model_.idm.Validate();
  }
  alphas_ = DissipationBounds(grid_.extents(), grid_.dim(), bounds_);
  double rate = 0.0;
  for (int d = 0; d < grid_.dim(); ++d) rate += alphas_[d] / grid_.spacing(d);
  // A field with no dynamics at all never changes; any positive step works.
  dt_ = rate > 0.0 ? settings_.cfl / rate : settings_.tau_max;
  workers_ = ResolveWorkerCount(settings_.workers);
}

ValueField LevelSetSolver::Initialize() const {
  return hjsafe::Initialize(grid_, box_, scenario_);
}

std::size_t LevelSetSolver::Sweep(const std::vector<double>& in,
                                  std::vector<double>& out, std::size_t begin,
                                  std::size_t end) const {
  const int dim = grid_.dim();
  const double* v = in.data();
  auto idx = grid_.Unravel(begin);
  std::size_t bad = grid_.size();
  OneSidedGradients grads;
  for (std::size_t k = begin; k < end; ++k) {
    Vec4 z{0, 0, 0, 0};
    for (int d = 0; d < dim; ++d) {
      z[d] = grid_.Coordinate(d, idx[d]);
      AxisDifferences(v, k, idx[d], grid_.count(d), grid_.stride(d),
                      grid_.spacing(d), grads.minus[d], grads.plus[d]);
    }
    const RelativeState state = RelativeState::FromArray(z);
    const double h =
        settings_.flux == NumericalFlux::kUpwind
            ? UpwindHamiltonian(state, dim, grads, model_, bounds_)
            : LaxFriedrichsHamiltonian(state, grads, alphas_, model_, bounds_);
    const double updated = v[k] + dt_ * std::min(0.0, h);
    out[k] = updated;
    if (!std::isfinite(updated) && bad == grid_.size()) bad = k;
    for (int d = 0; d < 4; ++d) {
      if (++idx[d] < grid_.count(d)) break;
      idx[d] = 0;
    }
  }
  return bad;
}

std::size_t LevelSetSolver::ParallelSweep(const std::vector<double>& in,
                                          std::vector<double>& out) const {
  std::vector<std::size_t> first_bad(workers_, grid_.size());
  internal::ParallelChunks(
      grid_.size(), workers_,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        first_bad[chunk] = Sweep(in, out, begin, end);
      });
  return *std::min_element(first_bad.begin(), first_bad.end());
}

StepReport LevelSetSolver::Step(const ValueField& current,
                                ValueField& next) const {
  const std::size_t n = grid_.size();
  if (current.values.size() != n) {
    throw ConfigError("value field does not match the solver grid");
  }
  next.grid = current.grid;
  next.margin = current.margin;
  next.values.resize(n);

  std::size_t bad = ParallelSweep(current.values, next.values);
  if (bad == n && settings_.integrator == TimeIntegrator::kRk2) {
    // Two-stage SSP Runge-Kutta: average the start with two Euler stages.
    std::vector<double> stage(n);
    bad = ParallelSweep(next.values, stage);
    for (std::size_t k = 0; k < n; ++k) {
      next.values[k] = 0.5 * (current.values[k] + stage[k]);
    }
  }
  if (bad != n) {
    const RelativeState z = grid_.NodeState(bad);
    throw NumericalInstabilityError(
        "non-finite value at node " + std::to_string(bad) + " (x_g1=" +
        std::to_string(z.x_g1) + ", v_g1=" + std::to_string(z.v_g1) +
        ", x_g2=" + std::to_string(z.x_g2) + ", v_g2=" +
        std::to_string(z.v_g2) + ")");
  }

  double max_change = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    max_change =
        std::max(max_change, std::abs(current.values[k] - next.values[k]));
  }
  next.tau = current.tau + dt_;
  next.iterations = current.iterations + 1;
  next.converged = false;
  return {dt_, max_change};
}

ValueField LevelSetSolver::Solve(const StepObserver& observer) const {
  ValueField current = Initialize();
  ValueField next;
  while (current.tau < settings_.tau_max) {
    const StepReport report = Step(current, next);
    if (observer) {
      observer(current, next,
               {next.iterations, next.tau, report.dt, report.max_change});
    }
    std::swap(current, next);
    if (report.max_change / report.dt < settings_.eps_conv) {
      current.converged = true;
      break;
    }
    // V never increases, so an empty safe set stays empty.
    if (std::none_of(current.values.begin(), current.values.end(),
                     [](double v) { return v > 0.0; })) {
      current.converged = true;
      break;
    }
  }
  return current;
}

}  // namespace hjsafe
