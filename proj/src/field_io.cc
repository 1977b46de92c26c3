#include "hjsafe/field_io.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "hjsafe/errors.h"
#include "json.hpp"

namespace hjsafe {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'H', 'J', 'S', 'A', 'F', 'E', 'V', 'F'};

template <typename T>
T ToLittleEndian(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    std::memcpy(&value, bytes, sizeof(T));
  }
  return value;
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void CheckWritten(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

// Shortest text that reads back to the same double.
std::string Num(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

}  // namespace

ValueFieldFile MakeValueFieldFile(const ScenarioConfig& config,
                                  ValueField field) {
  ValueFieldFile file;
  file.header.scenario = config.scenario;
  file.header.model = config.model.kind;
  file.header.box = config.box;
  file.header.bounds = config.bounds;
  file.header.scenario_hash = ScenarioHash(config);
  file.field = std::move(field);
  return file;
}

void WriteValueField(const std::string& path, const ValueFieldFile& file) {
  const Grid& grid = file.field.grid;
  if (file.field.values.size() != grid.size()) {
    throw IoError("value count does not match the grid");
  }
  json counts = json::array();
  json extents = json::array();
  for (int d = 0; d < grid.dim(); ++d) {
    counts.push_back(grid.count(d));
    extents.push_back({grid.extent(d)[0], grid.extent(d)[1]});
  }
  const FieldHeader& h = file.header;
  const json header = {
      {"format", "hjsafe-value-field"},
      {"version", h.version},
      {"byte_order", "little"},
      {"dtype", "float64"},
      {"layout", "first_dimension_fastest"},
      {"dim", grid.dim()},
      {"counts", counts},
      {"extents", extents},
      {"scenario", std::string(ToString(h.scenario))},
      {"model", std::string(ToString(h.model))},
      {"constraint_box", {h.box.x_lo, h.box.x_hi, h.box.v_lo, h.box.v_hi}},
      {"bounds",
       {h.bounds.control_lo, h.bounds.control_hi, h.bounds.dist_lo,
        h.bounds.dist_hi}},
      {"scenario_hash", h.scenario_hash},
      {"tau", file.field.tau},
      {"iterations", file.field.iterations},
      {"converged", file.field.converged},
  };
  const std::string text = header.dump();

  std::ofstream out = OpenForWrite(path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t length =
      ToLittleEndian(static_cast<std::uint32_t>(text.size()));
  out.write(reinterpret_cast<const char*>(&length), sizeof(length));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(file.field.values.data()),
              static_cast<std::streamsize>(file.field.values.size() *
                                           sizeof(double)));
  } else {
    for (double v : file.field.values) {
      const double le = ToLittleEndian(v);
      out.write(reinterpret_cast<const char*>(&le), sizeof(le));
    }
  }
  CheckWritten(out, path);
}

ValueFieldFile ReadValueField(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError(path + ": not a value-field file");
  }
  std::uint32_t length = 0;
  in.read(reinterpret_cast<char*>(&length), sizeof(length));
  length = ToLittleEndian(length);
  std::string text(length, '\0');
  in.read(text.data(), length);
  if (!in) throw IoError(path + ": truncated header");

  ValueFieldFile file;
  try {
    const json header = json::parse(text);
    if (header.at("byte_order") != "little" ||
        header.at("dtype") != "float64") {
      throw IoError(path + ": unsupported payload encoding");
    }
    const int dim = header.at("dim").get<int>();
    std::vector<std::size_t> counts;
    std::vector<Extent> extents;
    for (int d = 0; d < dim; ++d) {
      counts.push_back(header.at("counts").at(d).get<std::size_t>());
      extents.push_back({header.at("extents").at(d).at(0).get<double>(),
                         header.at("extents").at(d).at(1).get<double>()});
    }
    FieldHeader& h = file.header;
    h.version = header.at("version").get<int>();
    h.scenario = ScenarioFromString(header.at("scenario").get<std::string>());
    h.model = DisturbanceKindFromString(header.at("model").get<std::string>());
    const json& box = header.at("constraint_box");
    h.box = {box.at(0).get<double>(), box.at(1).get<double>(),
             box.at(2).get<double>(), box.at(3).get<double>()};
    const json& bounds = header.at("bounds");
    h.bounds = {bounds.at(0).get<double>(), bounds.at(1).get<double>(),
                bounds.at(2).get<double>(), bounds.at(3).get<double>()};
    h.scenario_hash = header.at("scenario_hash").get<std::string>();
    file.field = Initialize(Grid(dim, counts, extents), h.box, h.scenario);
    file.field.tau = header.at("tau").get<double>();
    file.field.iterations = header.at("iterations").get<std::size_t>();
    file.field.converged = header.at("converged").get<bool>();
  } catch (const json::exception& e) {
    throw IoError(path + ": malformed header: " + e.what());
  } catch (const ConfigError& e) {
    throw IoError(path + ": invalid header: " + e.what());
  }

  std::vector<double>& values = file.field.values;
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw IoError(path + ": truncated payload");
  if constexpr (std::endian::native == std::endian::big) {
    for (double& v : values) v = ToLittleEndian(v);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError(path + ": trailing bytes after payload");
  }
  return file;
}

void WriteSliceCsv(const std::string& path, const Slice& slice) {
  std::ofstream out = OpenForWrite(path);
  for (const auto& [d, value] : slice.fixed) {
    out << "# fixed " << DimensionName(d) << "=" << Num(value) << "\n";
  }
  out << DimensionName(slice.row_dim) << "\\" << DimensionName(slice.col_dim);
  for (double c : slice.col_coords) out << "," << Num(c);
  out << "\n";
  for (std::size_t i = 0; i < slice.row_coords.size(); ++i) {
    out << Num(slice.row_coords[i]);
    for (std::size_t j = 0; j < slice.col_coords.size(); ++j) {
      out << "," << Num(slice.at(i, j));
    }
    out << "\n";
  }
  CheckWritten(out, path);
}

void WriteTraceCsv(const std::string& path, const Trace& trace) {
  std::ofstream out = OpenForWrite(path);
  const bool three = trace.scenario == Scenario::kThreeCar;
  out << "t,x_g1,v_g1";
  if (three) out << ",x_g2,v_g2";
  out << ",u1,u2";
  if (three) out << ",u3";
  out << ",value,margin,violated\n";
  for (const TraceSample& s : trace.samples) {
    const bool violated = trace.first_violation_time.has_value() &&
                          s.t >= *trace.first_violation_time;
    out << Num(s.t) << "," << Num(s.z.x_g1) << "," << Num(s.z.v_g1);
    if (three) out << "," << Num(s.z.x_g2) << "," << Num(s.z.v_g2);
    out << "," << Num(s.inputs.u1) << "," << Num(s.inputs.u2);
    if (three) out << "," << Num(s.inputs.u3);
    out << "," << Num(s.value) << "," << Num(s.margin) << ","
        << (violated ? 1 : 0) << "\n";
  }
  CheckWritten(out, path);
}

}  // namespace hjsafe
