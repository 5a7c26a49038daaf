#include "moseg/rle.hpp"

#include <string>

namespace moseg {

RleMask encode_rle(const BitMask& mask) {
  RleMask out;
  out.width = mask.width();
  out.height = mask.height();
  const std::int64_t total = mask.size();

  std::int64_t pos = 0;
  bool current = false;  // runs start with the zero count
  while (pos < total) {
    std::int64_t run_end = pos;
    while (run_end < total &&
           mask.test(static_cast<int>(run_end % mask.width()),
                     static_cast<int>(run_end / mask.width())) == current) {
      ++run_end;
    }
    out.runs.push_back(run_end - pos);
    pos = run_end;
    current = !current;
  }
  if (out.runs.empty()) out.runs.push_back(0);
  return out;
}

BitMask decode_rle(const RleMask& rle) {
  if (rle.width < 1 || rle.height < 1) {
    throw ParseError("rle: dimensions must be at least 1x1");
  }
  const std::int64_t total = static_cast<std::int64_t>(rle.width) * rle.height;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < rle.runs.size(); ++i) {
    const std::int64_t run = rle.runs[i];
    if (run < 0) {
      throw ParseError("rle: negative run length at position " + std::to_string(i));
    }
    if (run == 0 && i != 0) {
      throw ParseError("rle: zero-length run at position " + std::to_string(i) +
                       " (only the leading zero count may be 0)");
    }
    sum += run;
  }
  if (sum != total) {
    throw ParseError("rle: runs sum to " + std::to_string(sum) + ", expected " +
                     std::to_string(total));
  }

  BitMask mask(GridDims(rle.width, rle.height));
  std::int64_t pos = 0;
  bool current = false;
  for (const std::int64_t run : rle.runs) {
    if (current) mask.set_span(pos, pos + run);
    pos += run;
    current = !current;
  }
  return mask;
}

}  // namespace moseg
