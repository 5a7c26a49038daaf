#include "moseg/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace moseg {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int next_header_int(std::istream& in, const std::filesystem::path& path) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) throw ParseError("pgm '" + path.string() + "': truncated header");
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) {
    throw ParseError("pgm '" + path.string() + "': bad header integer");
  }
  return value;
}

}  // namespace

FloatGrid read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (magic != "P5") {
    throw ParseError("pgm '" + path.string() + "': expected magic P5, got '" +
                     magic + "'");
  }
  const int width = next_header_int(in, path);
  const int height = next_header_int(in, path);
  const int maxval = next_header_int(in, path);
  if (maxval != 255) {
    throw ParseError("pgm '" + path.string() + "': only maxval 255 is supported");
  }
  in.get();  // the single whitespace byte after maxval

  FloatGrid grid(GridDims(width, height));
  std::vector<unsigned char> bytes(grid.values.size());
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw ParseError("pgm '" + path.string() + "': truncated pixel data");
  }
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    grid.values[i] = static_cast<double>(bytes[i]);
  }
  return grid;
}

void write_pgm(const std::filesystem::path& path, const FloatGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << grid.width() << " " << grid.height() << "\n255\n";
  std::vector<unsigned char> bytes(grid.values.size());
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const double v = std::clamp(std::round(grid.values[i]), 0.0, 255.0);
    bytes[i] = static_cast<unsigned char>(v);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace moseg
