#include "figprime/figurate_set.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>

#include "figprime/enumeration.hpp"

namespace figprime {

namespace {

constexpr char kMagic[4] = {'F', 'G', 'P', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 16;  // magic + version + max_n
constexpr std::size_t kTrailerBytes = 4;  // CRC32

std::uint32_t bitmap_crc(const std::vector<std::uint8_t>& bitmap) {
    return (std::uint32_t)crc32_z(crc32_z(0, nullptr, 0), bitmap.data(),
                                  bitmap.size());
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(std::uint8_t(v >> (8 * k)));
}

void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(std::uint8_t(v >> (8 * k)));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t(p[k]) << (8 * k);
    return v;
}

std::uint64_t get_u64le(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t(p[k]) << (8 * k);
    return v;
}

}  // namespace

FigurateSet::FigurateSet(std::uint64_t max_n, std::vector<std::uint8_t> bitmap)
    : max_n_(max_n), bits_(std::move(bitmap)) {
    if (max_n_ < 1) {
        throw std::invalid_argument("FigurateSet: max_n must be >= 1");
    }
    if (bits_.size() != (max_n_ + 7) / 8) {
        throw std::invalid_argument("FigurateSet: bitmap size mismatch");
    }
    if (max_n_ % 8 != 0) {
        const std::uint8_t padding_mask = std::uint8_t(0xFFu << (max_n_ % 8));
        if (bits_.back() & padding_mask) {
            throw std::invalid_argument("FigurateSet: nonzero padding bits");
        }
    }
    for (std::uint64_t i = 1; i <= max_n_; ++i) {
        if (test_unchecked(i)) values_.push_back(i);
    }
}

bool FigurateSet::contains(std::uint64_t i) const {
    if (i < 1 || i > max_n_) {
        throw std::out_of_range("FigurateSet::contains: index outside [1, max_n]");
    }
    return test_unchecked(i);
}

FigurateSet build_set(std::uint64_t n_max) {
    return FigurateSet(n_max, figurate_bitmap(n_max));
}

std::uint64_t save_cache(const FigurateSet& set,
                         const std::filesystem::path& destination) {
    std::vector<std::uint8_t> blob;
    blob.reserve(kHeaderBytes + set.bitmap().size() + kTrailerBytes);
    blob.insert(blob.end(), kMagic, kMagic + 4);
    put_u32le(blob, kVersion);
    put_u64le(blob, set.max_n());
    blob.insert(blob.end(), set.bitmap().begin(), set.bitmap().end());
    put_u32le(blob, bitmap_crc(set.bitmap()));

    // Write to a sibling temp file, then rename into place, so readers never
    // see a partial cache.
    std::filesystem::path dir = destination.parent_path();
    if (dir.empty()) dir = ".";
    std::random_device rd;
    std::filesystem::path tmp =
        dir / (destination.filename().string() + ".tmp." + std::to_string(rd()) +
               std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw CacheError(CacheError::Kind::io,
                             "save_cache: cannot open " + tmp.string());
        }
        out.write(reinterpret_cast<const char*>(blob.data()),
                  (std::streamsize)blob.size());
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw CacheError(CacheError::Kind::io,
                             "save_cache: short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, destination, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw CacheError(CacheError::Kind::io,
                         "save_cache: cannot rename into " + destination.string());
    }
    return blob.size();
}

FigurateSet load_cache(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw CacheError(CacheError::Kind::io,
                         "load_cache: cannot open " + source.string());
    }
    std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw CacheError(CacheError::Kind::io,
                         "load_cache: read error on " + source.string());
    }
    if (blob.size() < kHeaderBytes + kTrailerBytes) {
        throw CacheError(CacheError::Kind::malformed,
                         "load_cache: file shorter than header + checksum");
    }
    if (!std::equal(kMagic, kMagic + 4, blob.begin())) {
        throw CacheError(CacheError::Kind::bad_magic,
                         "load_cache: bad magic (want FGP1)");
    }
    const std::uint32_t version = get_u32le(blob.data() + 4);
    if (version != kVersion) {
        throw CacheError(CacheError::Kind::bad_version,
                         "load_cache: unsupported version " +
                             std::to_string(version));
    }
    const std::uint64_t max_n = get_u64le(blob.data() + 8);
    if (max_n < 1) {
        throw CacheError(CacheError::Kind::malformed, "load_cache: max_n is 0");
    }
    const std::uint64_t bitmap_bytes = (max_n + 7) / 8;
    if (blob.size() != kHeaderBytes + bitmap_bytes + kTrailerBytes) {
        throw CacheError(CacheError::Kind::malformed,
                         "load_cache: size does not match max_n (truncated or "
                         "trailing bytes)");
    }
    std::vector<std::uint8_t> bitmap(blob.begin() + kHeaderBytes,
                                     blob.begin() + kHeaderBytes +
                                         (std::ptrdiff_t)bitmap_bytes);
    const std::uint32_t stored_crc =
        get_u32le(blob.data() + kHeaderBytes + bitmap_bytes);
    if (bitmap_crc(bitmap) != stored_crc) {
        throw CacheError(CacheError::Kind::bad_crc,
                         "load_cache: CRC mismatch (corrupted bitmap)");
    }
    if (max_n % 8 != 0 &&
        (bitmap.back() & std::uint8_t(0xFFu << (max_n % 8)))) {
        throw CacheError(CacheError::Kind::malformed,
                         "load_cache: nonzero padding bits");
    }
    return FigurateSet(max_n, std::move(bitmap));
}

}  // namespace figprime
