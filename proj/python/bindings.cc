// Python bindings: hjsafe._core

#include <optional>
#include <string>

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hjsafe/config.h"
#include "hjsafe/errors.h"
#include "hjsafe/field_io.h"
#include "hjsafe/game_hamiltonian.h"
#include "hjsafe/idm.h"
#include "hjsafe/levelset_solver.h"
#include "hjsafe/safe_set.h"
#include "hjsafe/sim_harness.h"

namespace py = pybind11;
using namespace hjsafe;

namespace {

RelativeState ToState(const std::vector<double>& z, int dim) {
  if (static_cast<int>(z.size()) != dim) {
    throw DomainError("expected a state with " + std::to_string(dim) +
                      " components, got " + std::to_string(z.size()));
  }
  Vec4 a{0, 0, 0, 0};
  for (int d = 0; d < dim; ++d) a[d] = z[d];
  return RelativeState::FromArray(a);
}

std::vector<double> FromState(const RelativeState& z, int dim) {
  const Vec4 a = z.AsArray();
  return {a.begin(), a.begin() + dim};
}

// Node values as an array indexed [x_g1, v_g1, (x_g2, v_g2)].
py::array_t<double> GridArray(const Grid& grid, const std::vector<double>& v) {
  std::vector<py::ssize_t> shape, strides;
  for (int d = 0; d < grid.dim(); ++d) {
    shape.push_back(static_cast<py::ssize_t>(grid.count(d)));
    strides.push_back(static_cast<py::ssize_t>(grid.stride(d) * sizeof(double)));
  }
  py::array_t<double> out(shape, strides);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict TraceDict(const Trace& t) {
  const int dim = StateDim(t.scenario);
  const auto n = static_cast<py::ssize_t>(t.samples.size());
  py::array_t<double> time(n), value(n), margin(n);
  py::array_t<double> state({n, static_cast<py::ssize_t>(dim)});
  py::array_t<double> inputs({n, py::ssize_t{3}});
  auto s = state.mutable_unchecked<2>();
  auto in = inputs.mutable_unchecked<2>();
  for (py::ssize_t k = 0; k < n; ++k) {
    const TraceSample& x = t.samples[k];
    time.mutable_at(k) = x.t;
    value.mutable_at(k) = x.value;
    margin.mutable_at(k) = x.margin;
    const Vec4 a = x.z.AsArray();
    for (int d = 0; d < dim; ++d) s(k, d) = a[d];
    in(k, 0) = x.inputs.u1;
    in(k, 1) = x.inputs.u2;
    in(k, 2) = x.inputs.u3;
  }
  py::dict out;
  out["t"] = time;
  out["state"] = state;
  out["inputs"] = inputs;
  out["value"] = value;
  out["margin"] = margin;
  out["violated"] = t.violated;
  out["first_violation_time"] =
      t.first_violation_time ? py::cast(*t.first_violation_time) : py::none();
  out["left_domain"] = t.left_domain;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Grid-based reachability safe sets for a car between two humans";

  auto base = py::register_exception<Error>(m, "HjsafeError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NumericalInstabilityError>(
      m, "NumericalInstabilityError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<ScenarioConfig>(m, "Config")
      .def_static("parse", &ParseConfig, py::arg("text"))
      .def_static("load", &LoadConfig, py::arg("path"))
      .def("to_json", &SerializeConfig)
      .def("scenario_hash", &ScenarioHash)
      .def_property_readonly(
          "scenario",
          [](const ScenarioConfig& c) { return std::string(ToString(c.scenario)); })
      .def_property_readonly("disturbance_model",
                             [](const ScenarioConfig& c) {
                               return std::string(ToString(c.model.kind));
                             })
      .def_property_readonly(
          "dim", [](const ScenarioConfig& c) { return StateDim(c.scenario); })
      .def_property_readonly("grid_counts",
                             [](const ScenarioConfig& c) { return c.grid.counts; })
      .def("__repr__", [](const ScenarioConfig& c) {
        return "<Config " + std::string(ToString(c.scenario)) + " " +
               std::string(ToString(c.model.kind)) + ">";
      });

  py::class_<ValueField>(m, "ValueField")
      .def_property_readonly("dim",
                             [](const ValueField& f) { return f.grid.dim(); })
      .def_property_readonly("counts",
                             [](const ValueField& f) {
                               std::vector<std::size_t> c;
                               for (int d = 0; d < f.grid.dim(); ++d) {
                                 c.push_back(f.grid.count(d));
                               }
                               return c;
                             })
      .def_property_readonly("extents",
                             [](const ValueField& f) {
                               std::vector<Extent> e;
                               for (int d = 0; d < f.grid.dim(); ++d) {
                                 e.push_back(f.grid.extent(d));
                               }
                               return e;
                             })
      .def_readonly("tau", &ValueField::tau)
      .def_readonly("iterations", &ValueField::iterations)
      .def_readonly("converged", &ValueField::converged)
      .def_property_readonly(
          "values",
          [](const ValueField& f) { return GridArray(f.grid, f.values); })
      .def_property_readonly(
          "margin",
          [](const ValueField& f) { return GridArray(f.grid, f.margin); })
      .def("safe_fraction", &SafeVolumeFraction, py::arg("margin") = 0.0)
      .def("value_at",
           [](const ValueField& f, const std::vector<double>& z) {
             return ValueAt(f, ToState(z, f.grid.dim()));
           },
           py::arg("state"))
      .def("gradient_at",
           [](const ValueField& f, const std::vector<double>& z) {
             const Vec4 p = GradientAt(f, ToState(z, f.grid.dim())).AsArray();
             return std::vector<double>(p.begin(), p.begin() + f.grid.dim());
           },
           py::arg("state"))
      .def("is_safe",
           [](const ValueField& f, const std::vector<double>& z, double margin) {
             return IsSafe(f, ToState(z, f.grid.dim()), margin);
           },
           py::arg("state"), py::arg("margin") = 0.0)
      .def("slice",
           [](const ValueField& f, const std::map<std::string, double>& fixed) {
             std::map<int, double> dims;
             for (const auto& [name, value] : fixed) {
               dims[DimensionFromName(name)] = value;
             }
             const Slice s = ExtractSlice(f, dims);
             py::array_t<double> values(
                 {static_cast<py::ssize_t>(s.row_coords.size()),
                  static_cast<py::ssize_t>(s.col_coords.size())});
             std::copy(s.values.begin(), s.values.end(), values.mutable_data());
             py::dict out;
             out["rows"] = std::string(DimensionName(s.row_dim));
             out["cols"] = std::string(DimensionName(s.col_dim));
             out["row_coords"] = s.row_coords;
             out["col_coords"] = s.col_coords;
             out["values"] = values;
             return out;
           },
           py::arg("fixed") = std::map<std::string, double>{});

  m.def(
      "solve",
      [](const ScenarioConfig& c,
         const std::function<void(std::size_t, double, double)>& progress) {
        const LevelSetSolver solver = c.MakeSolver();
        StepObserver observer;
        if (progress) {
          observer = [&](const ValueField&, const ValueField&,
                         const ProgressRecord& r) {
            py::gil_scoped_acquire gil;
            progress(r.iteration, r.tau, r.max_change / r.dt);
          };
        }
        py::gil_scoped_release release;
        return solver.Solve(observer);
      },
      py::arg("config"), py::arg("progress") = nullptr,
      "Iterate the value function to convergence. `progress(iteration, tau, "
      "rate)` is called after every step.");

  m.def(
      "write_field",
      [](const std::string& path, const ScenarioConfig& c, const ValueField& f) {
        WriteValueField(path, MakeValueFieldFile(c, f));
      },
      py::arg("path"), py::arg("config"), py::arg("field"));
  m.def(
      "read_field",
      [](const std::string& path) {
        ValueFieldFile file = ReadValueField(path);
        py::dict header;
        header["version"] = file.header.version;
        header["scenario"] = std::string(ToString(file.header.scenario));
        header["disturbance_model"] = std::string(ToString(file.header.model));
        header["scenario_hash"] = file.header.scenario_hash;
        return py::make_tuple(header, std::move(file.field));
      },
      py::arg("path"));

  m.def(
      "simulate",
      [](const ScenarioConfig& c, const ValueField* field,
         std::optional<std::vector<double>> initial_state,
         std::optional<double> horizon) {
        SimSetup setup = c.MakeSimSetup();
        setup.field = field;
        const int dim = StateDim(c.scenario);
        const RelativeState z0 = initial_state ? ToState(*initial_state, dim)
                                               : c.simulation.initial_state;
        return TraceDict(Run(z0, setup, horizon.value_or(c.simulation.horizon)));
      },
      py::arg("config"), py::arg("field") = nullptr,
      py::arg("initial_state") = py::none(), py::arg("horizon") = py::none());

  m.def(
      "flow",
      [](const std::vector<double>& z, double u1, double u2, double u3) {
        const int dim = static_cast<int>(z.size());
        const Scenario s = dim == 2 ? Scenario::kTwoCar : Scenario::kThreeCar;
        return FromState(Flow(s, ToState(z, StateDim(s)), u1, u2, u3), dim);
      },
      py::arg("state"), py::arg("u1"), py::arg("u2"), py::arg("u3") = 0.0);

  m.def(
      "constraint_margin",
      [](const ScenarioConfig& c, const std::vector<double>& z) {
        return ConstraintMargin(ToState(z, StateDim(c.scenario)), c.box,
                                c.scenario);
      },
      py::arg("config"), py::arg("state"));

  m.def(
      "idm_accel",
      [](const ScenarioConfig& c, const std::vector<double>& z, double T) {
        return IdmAccel(ToState(z, 4), T, c.model.idm, c.bounds);
      },
      py::arg("config"), py::arg("state"), py::arg("reaction_time"));

  m.def(
      "hamiltonian",
      [](const ScenarioConfig& c, const std::vector<double>& z,
         const std::vector<double>& p) {
        const int dim = StateDim(c.scenario);
        return Hamiltonian(ToState(z, dim),
                           Costate::FromArray(ToState(p, dim).AsArray()),
                           c.model, c.bounds);
      },
      py::arg("config"), py::arg("state"), py::arg("costate"));

  m.def(
      "optimal_inputs",
      [](const ScenarioConfig& c, const std::vector<double>& z,
         const std::vector<double>& p) {
        const int dim = StateDim(c.scenario);
        const GameInputs in =
            OptimalInputs(ToState(z, dim),
                          Costate::FromArray(ToState(p, dim).AsArray()),
                          c.model, c.bounds);
        py::dict out;
        out["u1"] = in.u1;
        out["u2"] = in.u2;
        out["u3"] = in.u3;
        out["reaction_time"] = in.reaction_time;
        return out;
      },
      py::arg("config"), py::arg("state"), py::arg("costate"));
}
