#pragma once

#include <cstdint>
#include <string>

#include "terranav/terrain.hpp"

namespace terranav {

// terranav-scenario v1: line-oriented key-value terrain description.
//   terranav-scenario v1
//   base_height <m>
//   seed <int>
//   gaussian_hill cx=<m> cy=<m> amplitude=<m> spread=<m>
//   ridge x1=<m> y1=<m> x2=<m> y2=<m> height=<m> width=<m>
//   step px=<m> py=<m> nx=<> ny=<> rise=<m>
//   plane gx=<> gy=<>
// '#' starts a comment. Writing is deterministic (fixed float format).

TerrainField read_scenario(const std::string& path);
void write_scenario(const TerrainField& field, const std::string& path);
std::string scenario_to_string(const TerrainField& field);
TerrainField scenario_from_string(const std::string& text,
                                  const std::string& origin = "<string>");

// Deterministic terrain presets.
//   flat         — no primitives
//   hill-course  — gentle hills plus one impassable peak at the origin
//   ridge-valley — two ridge walls with offset saddle gaps, mild undulation
TerrainField make_preset(const std::string& name, std::uint64_t seed);

}  // namespace terranav
