#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "clme/model.hpp"
#include "clme/transforms.hpp"

namespace clme {

/// Binary grid dump:
///   bytes  0..7   magic "CLGRID01"
///   bytes  8..15  n1 (uint64, little-endian)
///   bytes 16..23  n2 (uint64, little-endian)
///   bytes 24..31  step along the first axis (IEEE-754 double, little-endian)
///   bytes 32..39  step along the second axis
/// followed by n1 * n2 (real, imag) double pairs, row-major. Axes are
/// centered and endpoint-exclusive, so the steps fix the coordinates.
inline constexpr char kGridMagic[8] = {'C', 'L', 'G', 'R', 'I', 'D', '0', '1'};
inline constexpr std::size_t kGridHeaderBytes = 40;

struct GridDump {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  double step1 = 0.0;
  double step2 = 0.0;
  std::vector<Complex> values;
};

std::vector<unsigned char> encode_grid(const GridDump& dump);
GridDump decode_grid(const std::vector<unsigned char>& bytes);

template <class Tag>
GridDump to_dump(const ComplexGrid<Tag>& g) {
  return {g.first_axis().size(), g.second_axis().size(), g.first_axis().step(),
          g.second_axis().step(), {g.values().begin(), g.values().end()}};
}
GridDump to_dump(const WignerGrid& w);

/// Writes bytes and returns their SHA-256 as lowercase hex. Throws IoError.
std::string write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);
std::string write_file(const std::filesystem::path& path, const std::string& text);
std::vector<unsigned char> read_file(const std::filesystem::path& path);

std::string sha256_hex(const unsigned char* data, std::size_t size);

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_double(double v);

}  // namespace clme
