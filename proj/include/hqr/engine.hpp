#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace hqr {

struct EngineResult {
    bool found = false;
    std::uint64_t oracle_calls = 0;
};

/// Decides whether slot `lookup` of a bucket membership vector is occupied.
/// Implementations throw std::logic_error on a malformed bucket (size not a
/// power of two, lookup out of range), which callers must not read as "absent".
class BucketSearchEngine {
public:
    virtual ~BucketSearchEngine() = default;
    virtual EngineResult search(std::span<const std::uint8_t> membership, std::uint64_t lookup) = 0;
    virtual std::string_view name() const noexcept = 0;
};

/// Reference engine: a direct membership probe (one oracle query).
class ClassicalEngine final : public BucketSearchEngine {
public:
    EngineResult search(std::span<const std::uint8_t> membership, std::uint64_t lookup) override;
    std::string_view name() const noexcept override { return "classical"; }
};

/// Throws std::logic_error unless the membership vector is a valid bucket for `lookup`.
void check_bucket_shape(std::span<const std::uint8_t> membership, std::uint64_t lookup);

}  // namespace hqr
