#pragma once

#include <string>

#include "hjsafe/config.h"
#include "hjsafe/levelset_solver.h"
#include "hjsafe/safe_set.h"
#include "hjsafe/sim_harness.h"

namespace hjsafe {

// Metadata stored ahead of the node values.
struct FieldHeader {
  int version = 1;
  Scenario scenario = Scenario::kTwoCar;
  DisturbanceModel::Kind model = DisturbanceModel::Kind::kExtremeAction;
  ConstraintBox box;
  ActuationBounds bounds;
  std::string scenario_hash;
};

struct ValueFieldFile {
  FieldHeader header;
  ValueField field;
};

// Binary layout:
//   8 bytes   magic "HJSAFEVF"
//   4 bytes   header length N, little-endian uint32
//   N bytes   JSON header (version, byte_order, grid, hash, tau, ...)
//   8*M bytes float64 node values, little-endian, first dimension fastest
void WriteValueField(const std::string& path, const ValueFieldFile& file);
ValueFieldFile ReadValueField(const std::string& path);

// Convenience: header fields taken from the config that produced `field`.
ValueFieldFile MakeValueFieldFile(const ScenarioConfig& config,
                                  ValueField field);

// CSV: metadata comment lines, a header row "<row_dim>\\<col_dim>,c0,c1,..."
// and one row per row coordinate.
void WriteSliceCsv(const std::string& path, const Slice& slice);

// CSV with columns t, state, inputs, value, margin, violated.
void WriteTraceCsv(const std::string& path, const Trace& trace);

}  // namespace hjsafe
