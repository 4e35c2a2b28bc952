#pragma once

#include "atflow/grid.hpp"

#include <string>

namespace atflow {

/// Reads a node field. CSV: ny rows of nx comma-separated reals, no header,
/// row j holds y = j*hy. PGM (P2 ascii or P5 binary): scaled to [0,1] by the
/// stated maxval. Dimensions must match the grid.
Field load_field(const std::string& path, const std::string& format,
                 const GridSpec& grid);

/// Writes a node field. CSV keeps full precision (17 significant digits) and
/// round-trips exactly through load_field; PGM is quantized to 8 bits for
/// viewing (values clamped to [0,1]).
void write_snapshot(const Field& f, const std::string& path,
                    const std::string& format);

}  // namespace atflow
