#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hqr/dictgen.hpp"
#include "hqr/digest.hpp"

namespace hqr::rainbow {

struct TableParams {
    std::uint64_t chain_length = 16;  // t
    std::uint64_t chain_count = 64;   // m
    HashAlgorithm hash = HashAlgorithm::SHA1;
    std::uint64_t k = 16;   // bucket modulus, the quantum search-space size
    unsigned kappa = 16;    // bit width of the truncated endpoint hash
    std::uint64_t seed = 0;
    dict::Dictionary dictionary;
};

/// Checks t, m, k, kappa against each other and against the plaintext space
/// size N. Throws ConfigError.
void validate(const TableParams& params, std::uint64_t space_size);

struct Row {
    std::uint64_t start_index = 0;
    std::string end_plaintext;
    std::uint64_t end_hashed = 0;
    bool shared_end = false;  // another row has the same end_hashed
};

struct RainbowTable {
    TableParams params;
    std::uint64_t space_size = 0;
    std::vector<Row> rows;  // ascending by (end_hashed, start_index)

    /// Rows whose end_hashed equals `end_hashed`.
    std::span<const Row> rows_with_end(std::uint64_t end_hashed) const;
};

/// Sorts rows and recomputes the shared_end flags.
void finalize_rows(std::vector<Row>& rows);

// RTBL1 text format:
//   RTBL1 <hash_alg> <t> <m> <k> <kappa> <seed> <N>
//   start_index,end_plaintext_hex,end_hashed      (m lines, ascending end_hashed)
void write_table(std::ostream& out, const RainbowTable& table);
void save_table(const std::filesystem::path& path, const RainbowTable& table);

/// The dictionary is not stored in the file and must be supplied. Throws
/// ParseError on malformed content and MismatchError when the header's N
/// differs from the dictionary's plaintext space size.
RainbowTable read_table(std::istream& in, const dict::Dictionary& dictionary);
RainbowTable load_table(const std::filesystem::path& path, const dict::Dictionary& dictionary);

}  // namespace hqr::rainbow
