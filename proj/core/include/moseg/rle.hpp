#pragma once

#include <cstdint>
#include <vector>

#include "moseg/geometry.hpp"

namespace moseg {

/// Run-length encoded binary mask. Runs alternate zero/one over the row-major
/// bit stream, starting with the number of leading zeros (which may be 0, the
/// only place a zero-length run is allowed). Runs always sum to width * height,
/// so every mask has exactly one canonical encoding.
struct RleMask {
  int width = 0;
  int height = 0;
  std::vector<std::int64_t> runs;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

RleMask encode_rle(const BitMask& mask);

/// Throws ParseError when the run list is not a canonical encoding of a
/// width x height mask.
BitMask decode_rle(const RleMask& rle);

}  // namespace moseg
