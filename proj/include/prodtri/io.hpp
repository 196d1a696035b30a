#pragma once

#include <string>

#include "json.hpp"
#include "prodtri/cayley.hpp"
#include "prodtri/core.hpp"
#include "prodtri/perms.hpp"
#include "prodtri/skeleton.hpp"

// JSON document formats. Cells are arrays of grid-vertex tokens ("1A", "2C",
// ...) sorted row-major; systems are keyed by node-pair labels; all output is
// deterministic so documents can serve as regression corpora.

namespace prodtri {

using nlohmann::json;

inline constexpr const char* kArtifactVersion = "1.0.0";

std::string column_label(int c);
int column_index(const std::string& label);

json cell_to_json(Mask m, const Shape& s);
Mask cell_from_json(const json& j, const Shape& s);

json shape_to_json(const Shape& s);
Shape shape_from_json(const json& j);

json triangulation_to_json(const Triangulation& t);
Triangulation triangulation_from_json(const json& j);

// { "n": symbols, "columns": ["A",...], "perms": { "AB": [1,...], ... } }
// Node labels are column letters when columns=true, 1-based rows otherwise.
json system_to_json(const PermSystem& s, bool columns = true);
PermSystem system_from_json(const json& j);

json positions_to_json(const PositionSystem& u);
PositionSystem positions_from_json(const json& j);

// { "shape": ..., "level": k, "faces": [ {"rows": [...], "cols": [...],
//   "cells": [...]}, ... ] }
json skeleton_to_json(const SkeletonTriangulation& sk);
SkeletonTriangulation skeleton_from_json(const json& j);

struct RunManifest {
  std::string command;
  Shape shape;
  std::string constraint_digest;
  std::string verdict;
  uint64_t count = 0;
  uint64_t nodes = 0;
  double wall_seconds = 0;
  std::string version = kArtifactVersion;
  json artifacts;  // stage-specific payload
};

json manifest_to_json(const RunManifest& m);

// FNV-1a over the compact dump; stable fingerprint for manifests.
std::string digest(const json& j);

}  // namespace prodtri
