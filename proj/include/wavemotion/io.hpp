#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wavemotion/errors.hpp"

namespace wavemotion {

/// Writes `content` atomically: temp file in the target directory, then
/// rename. Readers never observe a half-written artifact.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingDependencyError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Columnar CSV writer: header row then one row per index.
inline std::string csv_table(const std::vector<std::string>& header,
                             const std::vector<const std::vector<double>*>& columns) {
  if (header.size() != columns.size())
    throw ConfigError("csv_table: header/column count mismatch");
  std::size_t rows = columns.empty() ? 0 : columns.front()->size();
  for (const auto* c : columns)
    if (c->size() != rows) throw ConfigError("csv_table: ragged columns");
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? ',' : '\n');
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (*columns[i])[r] << (i + 1 < columns.size() ? ',' : '\n');
  return out.str();
}

namespace detail {

inline void append_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline std::uint64_t read_u64(const std::string& buf, std::size_t& pos) {
  if (pos + 8 > buf.size()) throw IoError("container truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace detail

/// Versioned binary container: magic, version, a JSON header, then a flat
/// little-endian 64-bit float payload. Used for checkpoints and for the
/// binary form of spectral discretizations.
struct BinaryContainer {
  std::string magic;   // 4 chars
  std::uint64_t version = 1;
  std::string header_json;
  std::vector<double> payload;

  std::string serialize() const {
    std::string buf;
    if (magic.size() != 4) throw ConfigError("container magic must be 4 bytes");
    buf += magic;
    detail::append_u64(buf, version);
    detail::append_u64(buf, header_json.size());
    buf += header_json;
    detail::append_u64(buf, payload.size());
    const std::size_t start = buf.size();
    buf.resize(start + payload.size() * 8);
    // Raw doubles; little-endian hosts only (checked at build time below).
    static_assert(std::endian::native == std::endian::little,
                  "binary containers assume a little-endian host");
    std::memcpy(buf.data() + start, payload.data(), payload.size() * 8);
    return buf;
  }

  static BinaryContainer deserialize(const std::string& buf,
                                     const std::string& expected_magic) {
    BinaryContainer c;
    if (buf.size() < 4) throw IoError("container truncated");
    c.magic = buf.substr(0, 4);
    if (c.magic != expected_magic)
      throw IoError("container magic mismatch: got '" + c.magic + "'");
    std::size_t pos = 4;
    c.version = detail::read_u64(buf, pos);
    const std::uint64_t hlen = detail::read_u64(buf, pos);
    if (pos + hlen > buf.size()) throw IoError("container truncated");
    c.header_json = buf.substr(pos, hlen);
    pos += hlen;
    const std::uint64_t n = detail::read_u64(buf, pos);
    if (pos + n * 8 > buf.size()) throw IoError("container truncated");
    c.payload.resize(n);
    std::memcpy(c.payload.data(), buf.data() + pos, n * 8);
    return c;
  }
};

}  // namespace wavemotion
