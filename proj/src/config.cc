#include "hjsafe/config.h"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "hjsafe/errors.h"
#include "json.hpp"

namespace hjsafe {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path)
      : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(Where() + ": expected object");
  }

  bool Has(const std::string& key) const { return object_.contains(key); }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  double Number(const std::string& key, double fallback) {
    const json* v = Find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) throw ConfigError(Path(key) + ": expected number");
    return v->get<double>();
  }

  bool Bool(const std::string& key, bool fallback) {
    const json* v = Find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(Path(key) + ": expected boolean");
    return v->get<bool>();
  }

  std::string String(const std::string& key, const std::string& fallback) {
    const json* v = Find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(Path(key) + ": expected string");
    return v->get<std::string>();
  }

  Extent Pair(const std::string& key, const Extent& fallback) {
    const json* v = Find(key);
    if (v == nullptr) return fallback;
    return ParsePair(*v, Path(key));
  }

  ObjectReader Child(const std::string& key) {
    const json* v = Find(key);
    static const json kEmpty = json::object();
    return ObjectReader(v == nullptr ? kEmpty : *v, Path(key));
  }

  void Finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.contains(item.key())) {
        throw ConfigError(Path(item.key()) + ": unknown key");
      }
    }
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string Where() const { return path_.empty() ? "<root>" : path_; }

  static Extent ParsePair(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number()) {
      throw ConfigError(where + ": expected [lo, hi]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
auto Rethrow(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    // Module validators name their field already; prefix with the block.
    throw ConfigError(what.rfind(path, 0) == 0 ? what : path + ": " + what);
  }
}

LeaderBehavior ParseLeader(ObjectReader r, const ActuationBounds& bounds) {
  const std::string type = r.String("type", "adversarial");
  LeaderBehavior out;
  if (type == "adversarial") {
    out = AdversarialLeader{};
  } else if (type == "constant_accel") {
    out = ConstantAccel{r.Number("accel", 0.0)};
  } else if (type == "scripted_brake") {
    out = ScriptedBrake{r.Number("t_start", 0.0),
                        r.Number("accel", bounds.dist_lo)};
  } else {
    throw ConfigError(r.Path("type") + ": unknown leader behavior \"" + type +
                      "\"");
  }
  r.Finish();
  const double accel = std::visit(
      [](const auto& b) -> double {
        if constexpr (requires { b.accel; }) return b.accel;
        return 0.0;
      },
      out);
  if (accel < bounds.dist_lo || accel > bounds.dist_hi) {
    throw ConfigError(r.Path("accel") + ": outside disturbance bounds");
  }
  return out;
}

FollowerBehavior ParseFollower(ObjectReader r, const DisturbanceModel& model,
                               const ActuationBounds& bounds) {
  const std::string fallback =
      model.kind == DisturbanceModel::Kind::kExtremeAction
          ? "adversarial_extreme"
          : "adversarial_reaction_time";
  const std::string type = r.String("type", fallback);
  FollowerBehavior out;
  if (type == "adversarial_extreme") {
    out = AdversarialExtreme{};
  } else if (type == "adversarial_reaction_time") {
    out = AdversarialReactionTime{};
  } else if (type == "idm_fixed_t") {
    const double T = r.Number("reaction_time", model.idm.t_min);
    if (T < model.idm.t_min || T > model.idm.t_max) {
      throw ConfigError(r.Path("reaction_time") +
                        ": outside [idm.t_min, idm.t_max]");
    }
    out = IdmFixedT{T};
  } else if (type == "constant_accel") {
    const double a = r.Number("accel", 0.0);
    if (a < bounds.dist_lo || a > bounds.dist_hi) {
      throw ConfigError(r.Path("accel") + ": outside disturbance bounds");
    }
    out = ConstantAccel{a};
  } else {
    throw ConfigError(r.Path("type") + ": unknown follower behavior \"" +
                      type + "\"");
  }
  r.Finish();
  return out;
}

json Pair(const Extent& e) { return json::array({e[0], e[1]}); }

json LeaderToJson(const LeaderBehavior& b) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AdversarialLeader>) {
          return {{"type", "adversarial"}};
        } else if constexpr (std::is_same_v<T, ConstantAccel>) {
          return {{"type", "constant_accel"}, {"accel", v.accel}};
        } else {
          return {{"type", "scripted_brake"},
                  {"t_start", v.t_start},
                  {"accel", v.accel}};
        }
      },
      b);
}

json FollowerToJson(const FollowerBehavior& b) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AdversarialExtreme>) {
          return {{"type", "adversarial_extreme"}};
        } else if constexpr (std::is_same_v<T, AdversarialReactionTime>) {
          return {{"type", "adversarial_reaction_time"}};
        } else if constexpr (std::is_same_v<T, IdmFixedT>) {
          return {{"type", "idm_fixed_t"}, {"reaction_time", v.reaction_time}};
        } else {
          return {{"type", "constant_accel"}, {"accel", v.accel}};
        }
      },
      b);
}

// Blocks that determine the solved field.
json SolveJson(const ScenarioConfig& c) {
  json grid_extents = json::array();
  for (const Extent& e : c.grid.extents) grid_extents.push_back(Pair(e));
  return {
      {"scenario", std::string(ToString(c.scenario))},
      {"disturbance_model", std::string(ToString(c.model.kind))},
      {"bounds",
       {{"control", Pair({c.bounds.control_lo, c.bounds.control_hi})},
        {"disturbance", Pair({c.bounds.dist_lo, c.bounds.dist_hi})}}},
      {"constraint_box",
       {{"x", Pair({c.box.x_lo, c.box.x_hi})},
        {"v", Pair({c.box.v_lo, c.box.v_hi})}}},
      {"grid", {{"counts", c.grid.counts}, {"extents", grid_extents}}},
      {"solver",
       {{"cfl", c.solver.cfl},
        {"eps_conv", c.solver.eps_conv},
        {"tau_max", c.solver.tau_max},
        {"boundary_mode", "linear_extrapolation"},
        {"integrator", std::string(ToString(c.solver.integrator))},
        {"flux", std::string(ToString(c.solver.flux))}}},
      {"idm",
       {{"a", c.model.idm.a},
        {"b", c.model.idm.b},
        {"delta", c.model.idm.delta},
        {"v0", c.model.idm.v0},
        {"s0", c.model.idm.s0},
        {"t_min", c.model.idm.t_min},
        {"t_max", c.model.idm.t_max},
        {"v_ego_nominal", c.model.idm.v_ego_nominal},
        {"reaction_policy", std::string(ToString(c.model.reaction_policy))}}},
  };
}

}  // namespace

Grid ScenarioConfig::MakeGrid() const {
  return Grid(StateDim(scenario), grid.counts, grid.extents);
}

LevelSetSolver ScenarioConfig::MakeSolver() const {
  return LevelSetSolver(MakeGrid(), box, scenario, model, bounds, solver);
}

SimSetup ScenarioConfig::MakeSimSetup() const {
  SimSetup setup;
  setup.scenario = scenario;
  setup.behavior = simulation.behavior;
  setup.bounds = bounds;
  setup.box = box;
  setup.idm = model.idm;
  setup.reaction_policy = model.reaction_policy;
  setup.filter = filter;
  setup.dt = simulation.dt;
  return setup;
}

ScenarioConfig ParseConfig(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax: ") + e.what());
  }
  ObjectReader r(root, "");
  ScenarioConfig c;

  c.scenario = ScenarioFromString(r.String("scenario", "two_car"));
  const int dim = StateDim(c.scenario);
  c.model.kind =
      DisturbanceKindFromString(r.String("disturbance_model", "extreme"));

  {
    ObjectReader b = r.Child("bounds");
    const Extent control = b.Pair("control", {-2.0, 2.0});
    const Extent dist = b.Pair("disturbance", {-1.5, 1.5});
    b.Finish();
    c.bounds = {control[0], control[1], dist[0], dist[1]};
    c.bounds.Validate();
  }
  {
    ObjectReader b = r.Child("constraint_box");
    const Extent x = b.Pair("x", {0.0, 40.0});
    const Extent v = b.Pair("v", {-10.0, 10.0});
    b.Finish();
    c.box = {x[0], x[1], v[0], v[1]};
    c.box.Validate();
  }
  {
    ObjectReader g = r.Child("grid");
    const std::size_t default_count = dim == 2 ? 161 : 41;
    c.grid.counts.assign(dim, default_count);
    if (const json* counts = g.Find("counts")) {
      if (!counts->is_array() || counts->size() != static_cast<std::size_t>(dim)) {
        throw ConfigError("grid.counts: expected " + std::to_string(dim) +
                          " integers");
      }
      for (int d = 0; d < dim; ++d) {
        const json& n = (*counts)[d];
        if (!n.is_number_integer() || n.get<long long>() < 3) {
          throw ConfigError("grid.counts[" + std::to_string(d) +
                            "]: expected integer >= 3");
        }
        c.grid.counts[d] = n.get<std::size_t>();
      }
    }
    c.grid.extents.clear();
    for (int d = 0; d < dim; ++d) {
      c.grid.extents.push_back(d % 2 == 0 ? Extent{c.box.x_lo, c.box.x_hi}
                                          : Extent{c.box.v_lo, c.box.v_hi});
    }
    if (const json* extents = g.Find("extents")) {
      if (!extents->is_array() ||
          extents->size() != static_cast<std::size_t>(dim)) {
        throw ConfigError("grid.extents: expected " + std::to_string(dim) +
                          " [lo, hi] pairs");
      }
      for (int d = 0; d < dim; ++d) {
        c.grid.extents[d] = ObjectReader::ParsePair(
            (*extents)[d], "grid.extents[" + std::to_string(d) + "]");
      }
    }
    g.Finish();
    Rethrow("grid", [&] { return c.MakeGrid(); });
  }
  {
    ObjectReader s = r.Child("solver");
    c.solver.cfl = s.Number("cfl", c.solver.cfl);
    c.solver.eps_conv = s.Number("eps_conv", c.solver.eps_conv);
    c.solver.tau_max = s.Number("tau_max", c.solver.tau_max);
    const std::string boundary =
        s.String("boundary_mode", "linear_extrapolation");
    if (boundary != "linear_extrapolation") {
      throw ConfigError("solver.boundary_mode: expected \"linear_extrapolation\"");
    }
    c.solver.integrator =
        TimeIntegratorFromString(s.String("integrator", "euler"));
    c.solver.flux = NumericalFluxFromString(s.String("flux", "upwind"));
    s.Finish();
    c.solver.Validate();
  }
  {
    ObjectReader m = r.Child("idm");
    IdmParams& p = c.model.idm;
    p.a = m.Number("a", p.a);
    p.b = m.Number("b", p.b);
    p.delta = m.Number("delta", p.delta);
    p.v0 = m.Number("v0", p.v0);
    p.s0 = m.Number("s0", p.s0);
    p.t_min = m.Number("t_min", p.t_min);
    p.t_max = m.Number("t_max", p.t_max);
    p.v_ego_nominal = m.Number("v_ego_nominal", p.v_ego_nominal);
    c.model.reaction_policy =
        ReactionPolicyFromString(m.String("reaction_policy", "exact"));
    m.Finish();
    Rethrow("idm", [&] { p.Validate(); return 0; });
  }
  {
    ObjectReader f = r.Child("filter");
    c.filter.activation_margin =
        f.Number("activation_margin", c.filter.activation_margin);
    c.filter.nominal_policy = NominalPolicyFromString(
        f.String("nominal_policy", std::string(ToString(c.filter.nominal_policy))));
    c.filter.nominal_accel = f.Number("nominal_accel", c.filter.nominal_accel);
    c.filter.nominal_headway =
        f.Number("nominal_headway", c.filter.nominal_headway);
    c.filter.lookahead = f.Bool("lookahead", c.filter.lookahead);
    f.Finish();
    c.filter.Validate();
    if (c.filter.nominal_accel < c.bounds.control_lo ||
        c.filter.nominal_accel > c.bounds.control_hi) {
      throw ConfigError("filter.nominal_accel: outside control bounds");
    }
  }
  {
    ObjectReader s = r.Child("simulation");
    c.simulation.dt = s.Number("dt", c.simulation.dt);
    c.simulation.horizon = s.Number("horizon", c.simulation.horizon);
    if (!(c.simulation.dt > 0.0)) {
      throw ConfigError("simulation.dt: must be > 0");
    }
    if (!(c.simulation.horizon > 0.0)) {
      throw ConfigError("simulation.horizon: must be > 0");
    }
    Vec4 z0 = dim == 2 ? Vec4{20.0, 0.0, 0.0, 0.0}
                       : Vec4{20.0, 0.0, 20.0, 0.0};
    if (const json* init = s.Find("initial_state")) {
      if (!init->is_array() || init->size() != static_cast<std::size_t>(dim)) {
        throw ConfigError("simulation.initial_state: expected " +
                          std::to_string(dim) + " numbers");
      }
      for (int d = 0; d < dim; ++d) {
        if (!(*init)[d].is_number()) {
          throw ConfigError("simulation.initial_state[" + std::to_string(d) +
                            "]: expected number");
        }
        z0[d] = (*init)[d].get<double>();
      }
    }
    c.simulation.initial_state = RelativeState::FromArray(z0);
    c.simulation.behavior.leader = ParseLeader(s.Child("leader"), c.bounds);
    c.simulation.behavior.follower =
        ParseFollower(s.Child("follower"), c.model, c.bounds);
    s.Finish();
  }
  r.Finish();
  return c;
}

ScenarioConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string SerializeConfig(const ScenarioConfig& c) {
  json out = SolveJson(c);
  out["filter"] = {
      {"activation_margin", c.filter.activation_margin},
      {"nominal_policy", std::string(ToString(c.filter.nominal_policy))},
      {"nominal_accel", c.filter.nominal_accel},
      {"nominal_headway", c.filter.nominal_headway},
      {"lookahead", c.filter.lookahead}};
  const Vec4 z0 = c.simulation.initial_state.AsArray();
  json init = json::array();
  for (int d = 0; d < StateDim(c.scenario); ++d) init.push_back(z0[d]);
  out["simulation"] = {{"dt", c.simulation.dt},
                       {"horizon", c.simulation.horizon},
                       {"initial_state", init},
                       {"leader", LeaderToJson(c.simulation.behavior.leader)},
                       {"follower",
                        FollowerToJson(c.simulation.behavior.follower)}};
  return out.dump(2);
}

std::string ScenarioHash(const ScenarioConfig& config) {
  const std::string text = SolveJson(config).dump();
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace hjsafe
