// Acceptance suite. Prints one line per criterion:
//   criterion <n> <name>: PASS|FAIL <details>
// Usage: hjsafe_acceptance [--only 1,2,5] [--cli path/to/hjsafe] [--work dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hjsafe/config.h"
#include "hjsafe/errors.h"
#include "hjsafe/field_io.h"
#include "hjsafe/game_hamiltonian.h"
#include "hjsafe/idm.h"
#include "hjsafe/levelset_solver.h"
#include "hjsafe/safe_set.h"
#include "hjsafe/sim_harness.h"

namespace hjsafe {
namespace {

namespace fs = std::filesystem;

struct Result {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

ScenarioConfig Config(const std::string& json) { return ParseConfig(json); }

const char* kTwoCar = R"({"scenario": "two_car"})";
const char* kFourExtreme =
    R"({"scenario": "three_car", "disturbance_model": "extreme"})";
const char* kFourReaction =
    R"({"scenario": "three_car", "disturbance_model": "reaction_time"})";

// Per-step audit of V_new <= V_old and V <= l, plus snapshots at the first
// step reaching each checkpoint.
struct Audit {
  std::vector<double> checkpoints{1, 2, 5, 10};
  std::vector<std::vector<double>> snapshots;
  std::vector<double> snapshot_tau;
  std::size_t increases = 0;
  std::size_t above_margin = 0;
  std::size_t non_finite = 0;

  void Observe(const ValueField& prev, const ValueField& cur) {
    for (std::size_t i = 0; i < cur.values.size(); ++i) {
      const double v = cur.values[i];
      if (!std::isfinite(v)) ++non_finite;
      if (v > prev.values[i]) ++increases;
      if (v > cur.margin[i]) ++above_margin;
    }
    while (snapshots.size() < checkpoints.size() &&
           cur.tau >= checkpoints[snapshots.size()]) {
      snapshots.push_back(cur.values);
      snapshot_tau.push_back(cur.tau);
    }
  }

  // Checkpoints past the end of a converged solve see the final field,
  // which no longer changes.
  void Finish(const ValueField& last) {
    while (snapshots.size() < checkpoints.size()) {
      snapshots.push_back(last.values);
      snapshot_tau.push_back(last.tau);
    }
  }
};

struct Solved {
  ScenarioConfig config;
  ValueField field;
  Audit audit;
  double seconds = 0;
};

std::map<std::string, std::unique_ptr<Solved>>& Cache() {
  static std::map<std::string, std::unique_ptr<Solved>> cache;
  return cache;
}

const Solved& SolveOnce(const std::string& json) {
  auto& slot = Cache()[json];
  if (slot) return *slot;
  slot = std::make_unique<Solved>();
  slot->config = Config(json);
  const auto start = std::chrono::steady_clock::now();
  const LevelSetSolver solver = slot->config.MakeSolver();
  Audit& audit = slot->audit;
  slot->field = solver.Solve(
      [&](const ValueField& prev, const ValueField& cur,
          const ProgressRecord&) { audit.Observe(prev, cur); });
  audit.Finish(slot->field);
  slot->seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return *slot;
}

// ---------------------------------------------------------------------------

Result BaselineEmpty() {
  const Solved& s = SolveOnce(kFourExtreme);
  const double frac = SafeVolumeFraction(s.field);
  return {s.field.converged && frac == 0.0,
          Fmt("converged=%d safe_fraction=%.6g tau=%.3f iterations=%zu "
              "time=%.0fs",
              s.field.converged, frac, s.field.tau, s.field.iterations,
              s.seconds)};
}

Result ReactionTimeNonEmpty() {
  const Solved& s = SolveOnce(kFourReaction);
  const double frac = SafeVolumeFraction(s.field);
  std::string at;
  const double grid_size = static_cast<double>(s.field.values.size());
  for (std::size_t k = 0; k < s.audit.snapshots.size(); ++k) {
    const auto& snap = s.audit.snapshots[k];
    const double f =
        std::count_if(snap.begin(), snap.end(), [](double v) { return v > 0; }) /
        grid_size;
    at += Fmt(" fraction@tau%.0f=%.4g", s.audit.checkpoints[k], f);
  }
  if (Cache().contains(kFourExtreme)) {
    at += Fmt(" (info: baseline_empty_from_tau=%.3f)",
              Cache()[kFourExtreme]->field.tau);
  }
  return {s.field.converged && frac > 0.0,
          Fmt("converged=%d safe_fraction=%.6g tau=%.3f iterations=%zu "
              "time=%.0fs",
              s.field.converged, frac, s.field.tau, s.field.iterations,
              s.seconds) +
              at};
}

// Distance from (x, v) to the curve x = v^2 / (2 * 0.5), with v <= 0, in
// units of grid cells.
double CellDistanceToParabola(double x, double v, double hx, double hv) {
  double best = std::numeric_limits<double>::infinity();
  const int n = 20000;
  for (int k = 0; k <= n; ++k) {
    const double w = -10.0 * k / n;
    const double dx = (x - w * w) / hx;
    const double dv = (v - w) / hv;
    best = std::min(best, std::hypot(dx, dv));
  }
  return best;
}

Result BrakingBoundary() {
  const Solved& s = SolveOnce(kTwoCar);
  const Grid& g = s.field.grid;
  const double hx = g.spacing(0), hv = g.spacing(1);
  double worst = 0, worst_x_cells = 0, worst_v = 0;
  int rows = 0;
  for (std::size_t j = 0; j < g.count(1); ++j) {
    const double v = g.Coordinate(1, j);
    if (v < -5.0 - 1e-9 || v > 1e-9) continue;
    // First sign change of V along x, located by linear interpolation.
    double crossing = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < g.count(0); ++i) {
      const double a = s.field.values[g.Ravel({i, j, 0, 0})];
      const double b = s.field.values[g.Ravel({i + 1, j, 0, 0})];
      if (a <= 0 && b > 0) {
        crossing = g.Coordinate(0, i) + hx * (-a) / (b - a);
        break;
      }
    }
    if (std::isnan(crossing)) {
      return {false, Fmt("no zero crossing at v_g1=%g", v)};
    }
    ++rows;
    const double d = CellDistanceToParabola(crossing, v, hx, hv);
    if (d > worst) {
      worst = d;
      worst_v = v;
    }
    worst_x_cells = std::max(worst_x_cells, std::abs(crossing - v * v) / hx);
  }
  return {s.field.converged && worst <= 2.0,
          Fmt("converged=%d rows=%d max_cell_distance=%.3f (at v_g1=%g) "
              "max_x_offset_cells=%.3f",
              s.field.converged, rows, worst, worst_v, worst_x_cells)};
}

Result SandwichAlwaysCrashes() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> x(0.5, 40), v(-10, 10);
  SimSetup setup;
  setup.scenario = Scenario::kThreeCar;
  setup.behavior.leader = ConstantAccel{-1.5};
  setup.behavior.follower = ConstantAccel{1.5};
  setup.dt = 0.05;
  int runs = 0, survived = 0;
  for (double u2 : {-2.0, 0.0, 2.0}) {
    setup.filter.nominal_accel = u2;
    for (int k = 0; k < 300; ++k) {
      const RelativeState z0{x(rng), v(rng), x(rng), v(rng)};
      const Trace t = Run(z0, setup, 40.0);
      const RelativeState& end = t.samples.back().z;
      ++runs;
      if (std::min(end.x_g1, end.x_g2) > 0) ++survived;
    }
  }
  return {survived == 0, Fmt("runs=%d survived=%d", runs, survived)};
}

Result MonotoneAndNested() {
  std::string detail;
  bool pass = true;
  const std::vector<std::pair<std::string, std::string>> cases{
      {"2d_extreme", kTwoCar},
      {"2d_reaction_time",
       R"({"scenario": "two_car", "disturbance_model": "reaction_time"})"},
      {"4d_extreme", kFourExtreme},
      {"4d_reaction_time", kFourReaction}};
  for (const auto& [name, json] : cases) {
    const Solved& s = SolveOnce(json);
    const Audit& a = s.audit;
    std::size_t not_nested = 0, not_monotone = 0;
    for (std::size_t k = 1; k < a.snapshots.size(); ++k) {
      const auto& earlier = a.snapshots[k - 1];
      const auto& later = a.snapshots[k];
      for (std::size_t i = 0; i < later.size(); ++i) {
        if (later[i] > earlier[i]) ++not_monotone;
        if (later[i] > 0 && !(earlier[i] > 0)) ++not_nested;
      }
    }
    const bool ok = a.increases == 0 && a.above_margin == 0 &&
                    not_monotone == 0 && not_nested == 0 &&
                    a.snapshots.size() == 4;
    pass = pass && ok;
    detail += Fmt("%s[step_increases=%zu above_l=%zu checkpoint_increases=%zu "
                  "not_nested=%zu] ",
                  name.c_str(), a.increases, a.above_margin, not_monotone,
                  not_nested);
  }
  return {pass, detail};
}

double Dot(const Costate& p, const RelativeState& f) {
  return p.p1 * f.x_g1 + p.p2 * f.v_g1 + p.p3 * f.x_g2 + p.p4 * f.v_g2;
}

std::vector<double> Linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * k / (n - 1));
  return out;
}

// Counts saddle violations of the closed-form policies over `samples`
// random (z, p) pairs.
std::size_t SaddleViolations(const DisturbanceModel& model, int samples,
                             unsigned seed) {
  const ActuationBounds b;
  const double slack = 1e-12;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(0, 40), v(-10, 10), p(-1, 1);
  const auto u2_grid = Linspace(b.control_lo, b.control_hi, 9);
  const auto d_grid = Linspace(b.dist_lo, b.dist_hi, 9);
  const auto t_grid = Linspace(model.idm.t_min, model.idm.t_max, 9);
  std::size_t bad = 0;
  for (int k = 0; k < samples; ++k) {
    const RelativeState z{x(rng), v(rng), x(rng), v(rng)};
    const Costate c{p(rng), p(rng), p(rng), p(rng)};
    const GameInputs in = OptimalInputs(z, c, model, b);
    const auto H = [&](double u1, double u2, double u3) {
      return Dot(c, Flow4(z, u1, u2, u3));
    };
    const double h = H(in.u1, in.u2, in.u3);
    bool ok = std::abs(h - Hamiltonian(z, c, model, b)) <= slack;
    for (double u2 : u2_grid) ok = ok && H(in.u1, u2, in.u3) <= h + slack;
    for (double d1 : d_grid) ok = ok && H(d1, in.u2, in.u3) >= h - slack;
    if (model.kind == DisturbanceModel::Kind::kExtremeAction) {
      for (double d2 : d_grid) ok = ok && H(in.u1, in.u2, d2) >= h - slack;
    } else {
      for (double T : t_grid) {
        ok = ok && H(in.u1, in.u2, IdmAccel(z, T, model.idm, b)) >= h - slack;
      }
    }
    if (!ok) ++bad;
  }
  return bad;
}

Result SaddleProperty() {
  const IdmParams idm;
  const std::size_t extreme =
      SaddleViolations(DisturbanceModel::ExtremeAction(), 1000, 1);
  const std::size_t reaction =
      SaddleViolations(DisturbanceModel::ReactionTime(idm), 1000, 2);
  // The closed form with the opposite sign in the p4 > 0 branch, reported
  // for comparison only.
  const std::size_t negated = SaddleViolations(
      DisturbanceModel::ReactionTime(idm, ReactionPolicy::kNegated), 1000, 2);
  return {extreme == 0 && reaction == 0,
          Fmt("extreme_violations=%zu/1000 reaction_time_violations=%zu/1000 "
              "(policy=exact) negated_violations=%zu/1000 "
              "reaction_sign_flag=%s",
              extreme, reaction, negated,
              negated > 0 ? "negated_fails" : "none")};
}

Result Falsification() {
  const Solved& s = SolveOnce(kTwoCar);
  const Grid& g = s.field.grid;
  const double cell = std::max(g.spacing(0), g.spacing(1));
  SimSetup setup = s.config.MakeSimSetup();
  setup.field = &s.field;
  setup.behavior.leader = AdversarialLeader{};
  setup.dt = 0.05;

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> node(0, g.size() - 1);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  const auto sample = [&](const std::function<bool(double)>& keep) {
    for (;;) {
      RelativeState z = g.NodeState(node(rng));
      z.x_g1 = std::clamp(z.x_g1 + jitter(rng) * g.spacing(0), 0.0, 40.0);
      z.v_g1 = std::clamp(z.v_g1 + jitter(rng) * g.spacing(1), -10.0, 10.0);
      if (keep(ValueAt(s.field, z))) return z;
    }
  };

  // Safe starts are run twice: with the game-optimal input at every sample
  // and with the least-restrictive filter at a one-cell margin.
  const double always = std::numeric_limits<double>::max();
  int safe_violated = 0, safe_violated_lr = 0;
  for (int k = 0; k < 100; ++k) {
    const RelativeState z = sample([&](double v) { return v > cell; });
    setup.filter.activation_margin = always;
    if (Run(z, setup, 10.0).violated) ++safe_violated;
    setup.filter.activation_margin = cell;
    if (Run(z, setup, 10.0).violated) ++safe_violated_lr;
  }
  int unsafe_violated = 0;
  setup.filter.activation_margin = always;
  for (int k = 0; k < 100; ++k) {
    const RelativeState z = sample([&](double v) { return v < -cell; });
    if (Run(z, setup, 10.0).violated) ++unsafe_violated;
  }
  return {safe_violated == 0 && safe_violated_lr == 0 && unsafe_violated >= 95,
          Fmt("safe_runs_violated=%d/100 (optimal ego) %d/100 (filtered ego, "
              "margin=%g) unsafe_runs_violated=%d/100",
              safe_violated, safe_violated_lr, cell, unsafe_violated)};
}

Result Numerics() {
  std::string detail;
  bool pass = true;
  const ActuationBounds b;

  // Lax-Friedrichs and upwind fluxes reduce to H* when p- = p+.
  {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> x(0, 40), v(-10, 10), p(-1, 1);
    const Vec4 alpha{10, 3.5, 10, 3.5};
    double worst = 0;
    for (const auto& m : {DisturbanceModel::ExtremeAction(),
                          DisturbanceModel::ReactionTime(IdmParams{})}) {
      for (int k = 0; k < 1000; ++k) {
        const RelativeState z{x(rng), v(rng), x(rng), v(rng)};
        const Vec4 q{p(rng), p(rng), p(rng), p(rng)};
        const double h = Hamiltonian(z, Costate::FromArray(q), m, b);
        worst = std::max(
            {worst, std::abs(LaxFriedrichsHamiltonian(z, {q, q}, alpha, m, b) - h),
             std::abs(UpwindHamiltonian(z, 4, {q, q}, m, b) - h)});
      }
    }
    pass = pass && worst <= 1e-12;
    detail += Fmt("flux_consistency_err=%.2g ", worst);
  }

  // Interpolation reproduces nodal values.
  {
    const Grid g(4, {9, 8, 7, 6}, {{0, 40}, {-10, 10}, {0, 40}, {-10, 10}});
    ValueField f;
    f.grid = g;
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n;
    for (std::size_t i = 0; i < g.size(); ++i) f.values.push_back(n(rng));
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (ValueAt(f, g.NodeState(i)) != f.values[i]) ++mismatches;
    }
    pass = pass && mismatches == 0;
    detail += Fmt("node_interp_mismatches=%zu ", mismatches);
  }

  // Gradient: exact on quadratics, second order on a smooth field.
  {
    const auto quad = [](double x, double v) {
      return 0.05 * x * x - 0.2 * x * v + 0.3 * v * v + x - 2 * v;
    };
    const auto smooth = [](double x, double v) {
      return std::sin(0.15 * x) * std::cos(0.25 * v);
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> x(5, 35), v(-7, 7);
    std::vector<RelativeState> points;
    for (int k = 0; k < 50; ++k) points.push_back({x(rng), v(rng)});
    double quad_err = 0;
    std::vector<double> errs;
    for (std::size_t n : {21, 41, 81, 161, 321}) {
      const Grid g(2, {n, n}, {{0, 40}, {-10, 10}});
      ValueField fq, fs;
      fq.grid = fs.grid = g;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const RelativeState z = g.NodeState(i);
        fq.values.push_back(quad(z.x_g1, z.v_g1));
        fs.values.push_back(smooth(z.x_g1, z.v_g1));
      }
      double e = 0;
      for (const RelativeState& z : points) {
        const Costate pq = GradientAt(fq, z);
        quad_err = std::max({quad_err,
                             std::abs(pq.p1 - (0.1 * z.x_g1 - 0.2 * z.v_g1 + 1)),
                             std::abs(pq.p2 - (-0.2 * z.x_g1 + 0.6 * z.v_g1 - 2))});
        const Costate ps = GradientAt(fs, z);
        e = std::max({e,
                      std::abs(ps.p1 - 0.15 * std::cos(0.15 * z.x_g1) *
                                           std::cos(0.25 * z.v_g1)),
                      std::abs(ps.p2 + 0.25 * std::sin(0.15 * z.x_g1) *
                                           std::sin(0.25 * z.v_g1))});
      }
      errs.push_back(e);
    }
    double order = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < errs.size(); ++k) {
      order = std::min(order, std::log2(errs[k - 1] / errs[k]));
    }
    pass = pass && quad_err <= 1e-9 && order >= 1.9;
    detail += Fmt("quadratic_grad_err=%.2g smooth_grad_order=%.3f ", quad_err,
                  order);
  }

  // Solver stays finite at the CFL limit for every flux / integrator.
  {
    std::size_t runs = 0, failures = 0;
    for (const char* scenario : {"two_car", "three_car"}) {
      for (const char* model : {"extreme", "reaction_time"}) {
        for (const char* flux : {"upwind", "lax_friedrichs"}) {
          for (const char* integ : {"euler", "rk2"}) {
            const bool four = std::string(scenario) == "three_car";
            ScenarioConfig c = Config(Fmt(
                R"({"scenario": "%s", "disturbance_model": "%s",
                    "grid": {"counts": %s},
                    "solver": {"cfl": 1.0, "tau_max": %s, "flux": "%s",
                               "integrator": "%s"}})",
                scenario, model, four ? "[13, 13, 13, 13]" : "[81, 81]",
                four ? "6" : "20", flux, integ));
            ++runs;
            try {
              const ValueField f = c.MakeSolver().Solve();
              if (!std::all_of(f.values.begin(), f.values.end(),
                               [](double v) { return std::isfinite(v); })) {
                ++failures;
              }
            } catch (const NumericalInstabilityError&) {
              ++failures;
            }
          }
        }
      }
    }
    pass = pass && failures == 0;
    detail += Fmt("cfl1_nonfinite_runs=%zu/%zu ", failures, runs);
  }

  // IDM clamp is total, including non-positive gaps.
  {
    const IdmParams idm;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> x(-40, 60), v(-40, 40),
        T(idm.t_min, idm.t_max);
    std::size_t bad = 0, nonpositive = 0;
    for (int k = 0; k < 1000000; ++k) {
      const RelativeState z{0, 0, x(rng), v(rng)};
      if (z.x_g2 <= 0) ++nonpositive;
      const double u = IdmAccel(z, T(rng), idm, b);
      if (!std::isfinite(u) || u < b.dist_lo || u > b.dist_hi) ++bad;
    }
    for (double gap : {0.0, -0.0, -1e-300, 1e-300}) {
      const double u = IdmAccel({0, 0, gap, 0}, idm.t_min, idm, b);
      if (!std::isfinite(u) || u < b.dist_lo || u > b.dist_hi) ++bad;
    }
    pass = pass && bad == 0;
    detail += Fmt("idm_out_of_range=%zu/1000004 (nonpositive_gaps=%zu)", bad,
                  nonpositive);
  }
  return {pass, detail};
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Result Determinism(const std::string& cli, const fs::path& work) {
  std::string detail;
  bool pass = true;
  fs::create_directories(work);

  // Repeated CLI solves with different worker counts are bit-identical.
  if (cli.empty()) {
    return {false, "no --cli given"};
  }
  const fs::path config = work / "det_config.json";
  std::ofstream(config) << R"({"scenario": "two_car", "grid": {"counts": [121, 81]}})";
  std::vector<std::string> fields, outputs;
  for (int workers : {1, 3, 1}) {
    const fs::path out = work / "det_field.hjvf";
    const fs::path log = work / "det_stdout.txt";
    const std::string cmd = "HJSAFE_WORKERS=" + std::to_string(workers) + " '" +
                            cli + "' solve --config '" + config.string() +
                            "' --out '" + out.string() + "' > '" +
                            log.string() + "' 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) return {false, Fmt("cli solve exited with status %d", rc)};
    fields.push_back(Slurp(out.string()));
    outputs.push_back(Slurp(log.string()));
  }
  const bool same_fields = fields[0] == fields[1] && fields[1] == fields[2];
  const bool same_stdout = outputs[0] == outputs[1] && outputs[1] == outputs[2];
  pass = pass && same_fields && same_stdout && !fields[0].empty();
  detail += Fmt("cli_fields_identical=%d cli_stdout_identical=%d bytes=%zu ",
                same_fields, same_stdout, fields[0].size());

  // Config text survives parse -> serialize -> parse unchanged.
  {
    int failures = 0;
    for (const char* json :
         {kTwoCar, kFourExtreme, kFourReaction,
          R"({"scenario": "three_car", "disturbance_model": "reaction_time",
              "bounds": {"control": [-2.25, 1.9], "disturbance": [-1.1, 1.3]},
              "idm": {"t_min": 0.1, "v_ego_nominal": 17.3,
                      "reaction_policy": "negated"},
              "solver": {"cfl": 0.7, "flux": "lax_friedrichs"},
              "simulation": {"dt": 0.01, "initial_state": [1.1, 2.2, 3.3, 4.4],
                             "leader": {"type": "scripted_brake",
                                        "t_start": 0.3}}})"}) {
      const std::string once = SerializeConfig(Config(json));
      const ScenarioConfig again = Config(once);
      if (SerializeConfig(again) != once ||
          ScenarioHash(again) != ScenarioHash(Config(json))) {
        ++failures;
      }
    }
    pass = pass && failures == 0;
    detail += Fmt("config_roundtrip_failures=%d ", failures);
  }

  // Field files: read -> write reproduces the bytes.
  {
    const fs::path first = work / "det_field.hjvf";
    const fs::path second = work / "det_field_rewrite.hjvf";
    const ValueFieldFile f = ReadValueField(first.string());
    WriteValueField(second.string(), f);
    const bool same = Slurp(first.string()) == Slurp(second.string());
    pass = pass && same;
    detail += Fmt("field_rewrite_identical=%d", same);
  }
  return {pass, detail};
}

}  // namespace
}  // namespace hjsafe

int main(int argc, char** argv) {
  using namespace hjsafe;
  std::set<int> only;
  std::string cli;
  fs::path work = fs::temp_directory_path() / "hjsafe_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) only.insert(std::stoi(item));
    } else if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else if (arg == "--work" && i + 1 < argc) {
      work = argv[++i];
    } else {
      std::fprintf(stderr, "unknown argument %s\n", arg.c_str());
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"baseline_empty", BaselineEmpty},
      {"reaction_time_nonempty", ReactionTimeNonEmpty},
      {"braking_boundary_2d", BrakingBoundary},
      {"sandwich_crash", SandwichAlwaysCrashes},
      {"monotone_nested", MonotoneAndNested},
      {"saddle_property", SaddleProperty},
      {"falsification_2d", Falsification},
      {"numerics", Numerics},
      {"determinism", [&] { return Determinism(cli, work); }},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    Result r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::printf("criterion %d %s: %s %s\n", id, criteria[k].first.c_str(),
                r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
