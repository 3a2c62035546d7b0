#include "hqr/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace hqr {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

std::string_view hash_name(HashAlgorithm alg) noexcept {
    return alg == HashAlgorithm::SHA1 ? "sha1" : "sha256";
}

std::optional<HashAlgorithm> hash_from_name(std::string_view name) noexcept {
    if (name == "sha1" || name == "SHA1") return HashAlgorithm::SHA1;
    if (name == "sha256" || name == "SHA256") return HashAlgorithm::SHA256;
    return std::nullopt;
}

std::size_t digest_size(HashAlgorithm alg) noexcept { return alg == HashAlgorithm::SHA1 ? 20 : 32; }

HashValue::HashValue(HashAlgorithm alg, const std::uint8_t* bytes) : alg_(alg) {
    std::copy(bytes, bytes + digest_size(alg), bytes_.begin());
}

std::uint64_t HashValue::leading_bits(unsigned bits) const {
    if (bits > 64) throw std::invalid_argument("leading_bits supports at most 64 bits");
    if (bits == 0) return 0;
    std::uint64_t head = 0;
    for (std::size_t i = 0; i < 8; ++i) head = (head << 8) | bytes_[i];
    return head >> (64 - bits);
}

std::string HashValue::hex() const {
    return to_hex(std::string_view(reinterpret_cast<const char*>(bytes_.data()), size()));
}

HashValue HashValue::from_hex(HashAlgorithm alg, std::string_view hex) {
    if (hex.size() != 2 * digest_size(alg))
        throw std::invalid_argument("expected " + std::to_string(2 * digest_size(alg)) + " hex digits for " +
                                    std::string(hash_name(alg)));
    const std::string raw = hqr::from_hex(hex);
    return HashValue(alg, reinterpret_cast<const std::uint8_t*>(raw.data()));
}

HashValue full_hash(HashAlgorithm alg, std::string_view data) {
    std::uint8_t out[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    const EVP_MD* md = alg == HashAlgorithm::SHA1 ? EVP_sha1() : EVP_sha256();
    if (EVP_Digest(data.data(), data.size(), out, &len, md, nullptr) != 1)
        throw std::runtime_error("EVP_Digest failed");
    return HashValue(alg, out);
}

std::string to_hex(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char b : bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

std::string from_hex(std::string_view hex) {
    if (hex.size() % 2) throw std::invalid_argument("hex string has odd length");
    std::string out(hex.size() / 2, '\0');
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out[i] = static_cast<char>((hi << 4) | lo);
    }
    return out;
}

}  // namespace hqr
