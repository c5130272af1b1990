#ifndef MFZ_HARNESS_CSV_HPP
#define MFZ_HARNESS_CSV_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>

#include "mfz/checkpoints.hpp"
#include "mfz/errors.hpp"

namespace mfz::harness {

// 17 significant digits: round-trip exact for doubles.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180 quoting for fields containing separators or quotes.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string checkpoints_csv(std::string_view value_column, std::span<const Checkpoint> rows) {
  std::string out = "x,";
  out += value_column;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.x);
    out += ',';
    out += format_real(r.value);
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory", path.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed", path.string());
}

}  // namespace mfz::harness

#endif  // MFZ_HARNESS_CSV_HPP
