#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hqr {

enum class HashAlgorithm : std::uint8_t { SHA1, SHA256 };

std::string_view hash_name(HashAlgorithm alg) noexcept;
std::optional<HashAlgorithm> hash_from_name(std::string_view name) noexcept;
std::size_t digest_size(HashAlgorithm alg) noexcept;

/// Digest of the configured full hash; storage is sized for the largest one.
class HashValue {
public:
    static constexpr std::size_t kMaxSize = 32;

    HashValue() = default;
    HashValue(HashAlgorithm alg, const std::uint8_t* bytes);

    HashAlgorithm algorithm() const noexcept { return alg_; }
    std::size_t size() const noexcept { return digest_size(alg_); }
    const std::uint8_t* data() const noexcept { return bytes_.data(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return bytes_[i]; }

    /// Leading `bits` bits (<= 64) of the digest as a big-endian integer.
    std::uint64_t leading_bits(unsigned bits) const;

    std::string hex() const;
    /// Throws std::invalid_argument unless `hex` is exactly one digest of `alg`.
    static HashValue from_hex(HashAlgorithm alg, std::string_view hex);

    friend bool operator==(const HashValue& a, const HashValue& b) noexcept {
        return a.alg_ == b.alg_ && a.bytes_ == b.bytes_;
    }

private:
    HashAlgorithm alg_ = HashAlgorithm::SHA1;
    std::array<std::uint8_t, kMaxSize> bytes_{};
};

HashValue full_hash(HashAlgorithm alg, std::string_view data);

std::string to_hex(std::string_view bytes);
/// Throws std::invalid_argument on odd length or a non-hex digit.
std::string from_hex(std::string_view hex);

}  // namespace hqr
