#include "mfl/sieve_cache.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "mfl/error.hpp"

namespace mfl {

namespace {

void put_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

std::uint8_t encode(std::int8_t v) { return v == 0 ? 0b00 : (v > 0 ? 0b01 : 0b11); }

std::vector<std::uint8_t> serialize(const SignSeq& seq) {
    std::vector<std::uint8_t> buf;
    const std::uint64_t n = seq.size();
    buf.reserve(kCacheHeaderSize + (n + 3) / 4 + 8);
    buf.insert(buf.end(), std::begin(kCacheMagic), std::end(kCacheMagic));
    buf.push_back(static_cast<std::uint8_t>(seq.label()));
    put_u64(buf, seq.start());
    put_u64(buf, n);
    const auto values = seq.values();
    for (std::uint64_t i = 0; i < n; i += 4) {
        std::uint8_t byte = 0;
        for (std::uint64_t j = 0; j < 4 && i + j < n; ++j) byte |= encode(values[i + j]) << (2 * j);
        buf.push_back(byte);
    }
    put_u64(buf, fnv1a64(buf));
    return buf;
}

struct Parsed {
    SeqLabel label;
    std::uint64_t start;
    std::uint64_t length;
};

// Validates framing and checksum; returns the header fields.
Parsed validate(const std::vector<std::uint8_t>& buf) {
    if (buf.size() < kCacheHeaderSize + 8) throw Error(ErrorKind::format, "cache file too short");
    if (std::memcmp(buf.data(), kCacheMagic, 4) != 0) throw Error(ErrorKind::format, "bad cache magic");
    const std::uint8_t label = buf[4];
    if (label > static_cast<std::uint8_t>(SeqLabel::custom)) throw Error(ErrorKind::format, "bad label byte");
    const std::uint64_t start = get_u64(buf.data() + 5);
    const std::uint64_t length = get_u64(buf.data() + 13);
    if (length > kMaxIndex) throw Error(ErrorKind::format, "declared length out of range");
    const std::uint64_t payload = (length + 3) / 4;
    if (buf.size() != kCacheHeaderSize + payload + 8)
        throw Error(ErrorKind::format, "declared length does not match file size");
    const std::uint64_t stored = get_u64(buf.data() + buf.size() - 8);
    const std::uint64_t actual = fnv1a64(std::span(buf.data(), buf.size() - 8));
    if (stored != actual) throw Error(ErrorKind::checksum, "cache checksum mismatch");
    return {static_cast<SeqLabel>(label), start, length};
}

std::vector<std::uint8_t> slurp(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    return in;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed) noexcept {
    std::uint64_t h = seed;
    for (const std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t seed) noexcept {
    return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), seed);
}

void write_cache(std::ostream& out, const SignSeq& seq) {
    const auto buf = serialize(seq);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorKind::io, "cache write failed");
}

void write_cache(const std::filesystem::path& path, const SignSeq& seq) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    // Write to a sibling and rename so readers never see a half-written cache.
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string());
        write_cache(out, seq);
    }
    std::filesystem::rename(tmp, path);
}

SignSeq read_cache(std::istream& in) {
    const auto buf = slurp(in);
    const Parsed header = validate(buf);
    if (header.start == 0) throw Error(ErrorKind::format, "cache start index 0");
    std::vector<std::int8_t> values(header.length);
    const std::uint8_t* payload = buf.data() + kCacheHeaderSize;
    for (std::uint64_t i = 0; i < header.length; ++i) {
        const std::uint8_t code = (payload[i / 4] >> (2 * (i % 4))) & 0b11;
        switch (code) {
        case 0b00: values[i] = 0; break;
        case 0b01: values[i] = 1; break;
        case 0b11: values[i] = -1; break;
        default: throw Error(ErrorKind::format, "invalid 2-bit code in cache payload");
        }
    }
    try {
        return SignSeq(header.label, header.start, std::move(values));
    } catch (const Error& e) {
        throw Error(ErrorKind::format, std::string("cache violates label invariants: ") + e.what());
    }
}

SignSeq read_cache(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_cache(in);
}

bool cache_verify(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        (void)read_cache(in);
        return true;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::format || e.kind() == ErrorKind::checksum) return false;
        throw;
    }
}

std::filesystem::path cache_directory(const std::filesystem::path& fallback) {
    if (const char* env = std::getenv("MFL_CACHE_DIR"); env != nullptr && *env != '\0') return env;
    return fallback;
}

}  // namespace mfl
