#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "mfl/sieve.hpp"

namespace mfl {

// Binary layout, little-endian:
//   "MFL1" | label u8 | start u64 | length u64 | packed values | checksum u64
// Values are 2 bits each, four per byte, lowest bits first: 00 = 0,
// 01 = +1, 11 = -1; the last byte is zero-padded. The trailing checksum is
// FNV-1a 64 over every preceding byte.
inline constexpr char kCacheMagic[4] = {'M', 'F', 'L', '1'};
inline constexpr std::size_t kCacheHeaderSize = 4 + 1 + 8 + 8;

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;
std::uint64_t fnv1a64(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

void write_cache(std::ostream& out, const SignSeq& seq);
void write_cache(const std::filesystem::path& path, const SignSeq& seq);

/// Throws format errors for malformed files and checksum errors when the
/// content does not match the trailer.
SignSeq read_cache(std::istream& in);
SignSeq read_cache(const std::filesystem::path& path);

/// True iff magic, declared length and checksum all validate. Throws io
/// error when the file cannot be opened.
bool cache_verify(const std::filesystem::path& path);

/// Cache directory: MFL_CACHE_DIR if set, otherwise the fallback.
std::filesystem::path cache_directory(const std::filesystem::path& fallback);

}  // namespace mfl
