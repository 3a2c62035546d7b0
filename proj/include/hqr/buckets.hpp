#pragma once

// Bucket index over k-bit (kappa-bit) endpoint hashes. An endpoint hash h
// lives in bucket h / k at offset h % k; each bucket is a k-slot search space.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hqr/table.hpp"

namespace hqr::buckets {

class BucketMap {
public:
    /// Throws ConfigError unless k is a power of two and log2(k) <= kappa <= 64.
    BucketMap(std::uint64_t k, unsigned kappa);

    std::uint64_t k() const noexcept { return k_; }
    unsigned kappa() const noexcept { return kappa_; }
    /// ceil(2^kappa / k); every bucket key is below this.
    std::uint64_t key_limit() const noexcept;

    /// Throws std::out_of_range if end_hashed >= 2^kappa.
    void insert_end(std::uint64_t end_hashed, std::size_t row);

    /// Membership vector of k slots, or nullopt when the key has no bucket.
    std::optional<std::vector<std::uint8_t>> query_bucket(std::uint64_t bucket_key) const;

    /// Table rows whose endpoint landed at (bucket_key, offset); empty if none.
    const std::vector<std::size_t>& rows_at(std::uint64_t bucket_key, std::uint64_t offset) const;

    const std::map<std::uint64_t, std::vector<std::uint64_t>>& buckets() const noexcept { return buckets_; }
    const std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::size_t>>& provenance() const noexcept {
        return provenance_;
    }

    friend bool operator==(const BucketMap& a, const BucketMap& b) noexcept {
        return a.k_ == b.k_ && a.kappa_ == b.kappa_ && a.buckets_ == b.buckets_;
    }

private:
    std::uint64_t k_;
    unsigned kappa_;
    std::map<std::uint64_t, std::vector<std::uint64_t>> buckets_;  // sorted, unique offsets
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::size_t>> provenance_;
};

BucketMap build(const rainbow::RainbowTable& table);

// Sidecar format: "BKT1 <k> <kappa>" then "bucket_key:offset1,offset2,..." lines.
void write_buckets(std::ostream& out, const BucketMap& map);
void save_buckets(const std::filesystem::path& path, const BucketMap& map);

/// Reads a sidecar and checks it against the table it claims to index.
/// Provenance is rebuilt from the table. Throws ParseError / MismatchError.
BucketMap read_buckets(std::istream& in, const rainbow::RainbowTable& table);
BucketMap load_buckets(const std::filesystem::path& path, const rainbow::RainbowTable& table);

}  // namespace hqr::buckets
