// Immutable membership structure for the figurate prime indicator delta(i)
// on [1, max_n], with a bit-exact binary cache format:
//
//   offset  size          field
//   0       4             magic "FGP1"
//   4       4             version, u32 little-endian, currently 1
//   8       8             max_n, u64 little-endian
//   16      ceil(max_n/8) bitmap; bit j of byte k = delta(8k + j + 1),
//                         LSB first; unused bits of the last byte are zero
//   ...     4             CRC32 (IEEE, zlib-compatible) of the bitmap,
//                         u32 little-endian
//
// Writes go through a temp file in the destination directory followed by a
// rename, so a crash cannot leave a half-written cache behind.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace figprime {

class CacheError : public std::runtime_error {
public:
    enum class Kind {
        io,           // open/read/write/rename failure
        bad_magic,    // leading bytes are not "FGP1"
        bad_version,  // unsupported version field
        bad_crc,      // bitmap does not match the stored checksum
        malformed,    // truncated file or nonzero padding bits
    };

    CacheError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class FigurateSet {
public:
    // Takes ownership of a bitmap laid out as described above. The bitmap
    // must have exactly ceil(max_n/8) bytes and zero padding bits; anything
    // else is a contract violation (std::invalid_argument).
    FigurateSet(std::uint64_t max_n, std::vector<std::uint8_t> bitmap);

    std::uint64_t max_n() const { return max_n_; }

    // delta(i) with a range check; i outside [1, max_n] throws
    // std::out_of_range.
    bool contains(std::uint64_t i) const;

    // delta(i) without the range check, for hot loops that validated their
    // bounds up front.
    bool test_unchecked(std::uint64_t i) const {
        return (bits_[(i - 1) >> 3] >> ((i - 1) & 7)) & 1u;
    }

    // Members in increasing order.
    const std::vector<std::uint64_t>& sorted_values() const { return values_; }

    std::uint64_t count() const { return values_.size(); }

    const std::vector<std::uint8_t>& bitmap() const { return bits_; }

private:
    std::uint64_t max_n_;
    std::vector<std::uint8_t> bits_;
    std::vector<std::uint64_t> values_;
};

// Enumerates from scratch. n_max >= 1 required.
FigurateSet build_set(std::uint64_t n_max);

// delta(i) as a free function; checked like FigurateSet::contains.
inline bool is_figurate(const FigurateSet& set, std::uint64_t i) {
    return set.contains(i);
}

// Serializes to the cache format above. Returns the number of bytes written.
std::uint64_t save_cache(const FigurateSet& set,
                         const std::filesystem::path& destination);

// Reads and fully validates a cache file. Every failure mode throws a
// CacheError whose kind() identifies it; no partially validated set escapes.
FigurateSet load_cache(const std::filesystem::path& source);

}  // namespace figprime
