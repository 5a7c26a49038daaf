#pragma once

#include <filesystem>

#include "moseg/geometry.hpp"

namespace moseg {

/// Reads a binary 8-bit PGM (P5, maxval 255) into a grid of values in [0, 255].
FloatGrid read_pgm(const std::filesystem::path& path);

/// Writes a grid as binary 8-bit PGM; values are rounded and clamped to
/// [0, 255]. Grids read back from write_pgm round-trip byte-exactly.
void write_pgm(const std::filesystem::path& path, const FloatGrid& grid);

}  // namespace moseg
