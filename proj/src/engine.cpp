#include "hqr/engine.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace hqr {

void check_bucket_shape(std::span<const std::uint8_t> membership, std::uint64_t lookup) {
    if (membership.size() < 4 || !std::has_single_bit(membership.size()))
        throw std::logic_error("bucket size " + std::to_string(membership.size()) + " is not a power of two >= 4");
    if (lookup >= membership.size())
        throw std::logic_error("lookup offset " + std::to_string(lookup) + " outside bucket of size " +
                               std::to_string(membership.size()));
}

EngineResult ClassicalEngine::search(std::span<const std::uint8_t> membership, std::uint64_t lookup) {
    check_bucket_shape(membership, lookup);
    return {membership[lookup] != 0, 1};
}

}  // namespace hqr
