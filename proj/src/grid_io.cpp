#include "clme/grid_io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace clme {

namespace {

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace

std::vector<unsigned char> encode_grid(const GridDump& dump) {
  if (dump.values.size() != dump.n1 * dump.n2)
    throw Error(ErrorCode::InvalidParameter, "grid dump size does not match its dimensions");
  std::vector<unsigned char> out(std::begin(kGridMagic), std::end(kGridMagic));
  out.reserve(kGridHeaderBytes + 16 * dump.values.size());
  put_u64(out, dump.n1);
  put_u64(out, dump.n2);
  put_f64(out, dump.step1);
  put_f64(out, dump.step2);
  for (const auto& v : dump.values) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  return out;
}

GridDump decode_grid(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kGridHeaderBytes || std::memcmp(bytes.data(), kGridMagic, 8) != 0)
    throw Error(ErrorCode::IoError, "not a CLGRID01 file");
  GridDump d;
  d.n1 = get_u64(bytes.data() + 8);
  d.n2 = get_u64(bytes.data() + 16);
  d.step1 = get_f64(bytes.data() + 24);
  d.step2 = get_f64(bytes.data() + 32);
  if (d.n1 != 0 && d.n2 > (bytes.size() / 16) / d.n1)
    throw Error(ErrorCode::IoError, "grid dimensions exceed the file size");
  const std::size_t count = d.n1 * d.n2;
  if (bytes.size() != kGridHeaderBytes + 16 * count)
    throw Error(ErrorCode::IoError, "grid payload size does not match the header");
  d.values.resize(count);
  const unsigned char* p = bytes.data() + kGridHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += 16) d.values[i] = {get_f64(p), get_f64(p + 8)};
  return d;
}

GridDump to_dump(const WignerGrid& w) {
  GridDump d{w.x.size(), w.p.size(), w.x.step(), w.p.step(), {}};
  d.values.reserve(w.values.size());
  for (double v : w.values) d.values.emplace_back(v, 0.0);
  return d;
}

std::string sha256_hex(const unsigned char* data, std::size_t size) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "SHA-256 failed");
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::string write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
  return sha256_hex(bytes.data(), bytes.size());
}

std::string write_file(const std::filesystem::path& path, const std::string& text) {
  return write_file(path, std::vector<unsigned char>(text.begin(), text.end()));
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace clme
