#ifndef MFZ_SIEVE_CACHE_HPP
#define MFZ_SIEVE_CACHE_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mfz/errors.hpp"
#include "mfz/sieve.hpp"

// On-disk sieve cache, little-endian throughout:
//
//   offset 0   6 bytes   magic "MFZSPF"
//   offset 6   1 byte    format version (sieve_cache_version)
//   offset 7   1 byte    reserved, 0
//   offset 8   8 bytes   limit (uint64)
//   offset 16  2*(limit+1) bytes   spf cells (uint16), 0 = prime, cell[1] = 1

namespace mfz {

inline constexpr std::array<char, 6> sieve_cache_magic{'M', 'F', 'Z', 'S', 'P', 'F'};
inline constexpr std::uint8_t sieve_cache_version = 1;

static_assert(std::endian::native == std::endian::little, "sieve cache I/O assumes a little-endian host");

inline std::filesystem::path sieve_cache_path(const std::filesystem::path& dir, std::uint64_t limit) {
  return dir / ("spf-v" + std::to_string(sieve_cache_version) + "-" + std::to_string(limit) + ".bin");
}

inline void save_sieve(const std::filesystem::path& path, const FactorSieve& sieve) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open sieve cache for writing", path.string());
  out.write(sieve_cache_magic.data(), sieve_cache_magic.size());
  const char version = static_cast<char>(sieve_cache_version);
  const char reserved = 0;
  out.write(&version, 1);
  out.write(&reserved, 1);
  const std::uint64_t limit = sieve.limit();
  out.write(reinterpret_cast<const char*>(&limit), sizeof limit);
  const auto raw = sieve.raw();
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size_bytes()));
  if (!out) throw IoError("failed writing sieve cache", path.string());
}

// Returns nullopt when the file is absent or was written by another format
// version; throws IoError for files that exist but are truncated or foreign.
inline std::optional<FactorSieve> load_sieve(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> header{};
  in.read(header.data(), header.size());
  if (!in || std::memcmp(header.data(), sieve_cache_magic.data(), sieve_cache_magic.size()) != 0) {
    throw IoError("not a sieve cache file", path.string());
  }
  if (static_cast<std::uint8_t>(header[6]) != sieve_cache_version) return std::nullopt;
  std::uint64_t limit = 0;
  in.read(reinterpret_cast<char*>(&limit), sizeof limit);
  if (!in || limit < 2 || limit > FactorSieve::max_limit) throw IoError("corrupt sieve cache header", path.string());
  std::vector<std::uint16_t> cells(limit + 1);
  in.read(reinterpret_cast<char*>(cells.data()), static_cast<std::streamsize>(cells.size() * sizeof(std::uint16_t)));
  if (!in) throw IoError("truncated sieve cache", path.string());
  return FactorSieve(limit, std::move(cells));
}

}  // namespace mfz

#endif  // MFZ_SIEVE_CACHE_HPP
