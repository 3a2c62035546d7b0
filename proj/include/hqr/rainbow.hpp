#pragma once

// Index-based rainbow chains over a smart-dictionary plaintext space.
//
// A chain of length t starting at index S_0 visits plaintext columns
//   P_0 = plain(S_0),  P_s = plain(hash_to_index(H(P_{s-1}), N, s))  for s = 1..t
// and is stored as (S_0, P_t, kbit(P_t)). Generation costs t full hashes per
// chain plus one endpoint hash for the stored k-bit value.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hqr/buckets.hpp"
#include "hqr/dictgen.hpp"
#include "hqr/digest.hpp"
#include "hqr/engine.hpp"
#include "hqr/table.hpp"

namespace hqr::rainbow {

/// (H_int + step) mod N with H_int the first 16 digest bytes read big-endian.
std::uint64_t hash_to_index(const HashValue& hash, std::uint64_t space_size, std::uint64_t step);

/// Binds a plaintext space to a hash function: the reduction family R_s and
/// the kappa-bit endpoint hash.
class Reducer {
public:
    Reducer(const dict::Dictionary& dictionary, HashAlgorithm hash, unsigned kappa);
    explicit Reducer(const TableParams& params) : Reducer(params.dictionary, params.hash, params.kappa) {}

    std::uint64_t space_size() const noexcept { return space_.size(); }
    HashAlgorithm algorithm() const noexcept { return hash_; }
    unsigned kappa() const noexcept { return kappa_; }

    std::string plain(std::uint64_t index) const { return space_.plaintext(index); }
    HashValue hash(std::string_view plaintext) const { return full_hash(hash_, plaintext); }
    /// R_step(h) = plain(hash_to_index(h, N, step)).
    std::string reduce(const HashValue& h, std::uint64_t step) const;
    /// Leading kappa bits of an existing digest.
    std::uint64_t truncate(const HashValue& h) const { return h.leading_bits(kappa_); }
    /// Leading kappa bits of H(plaintext); one full hash evaluation.
    std::uint64_t k_bit_hash(std::string_view plaintext) const { return truncate(hash(plaintext)); }

private:
    dict::PlaintextSpace space_;
    HashAlgorithm hash_;
    unsigned kappa_;
};

struct ChainEnd {
    std::string end_plaintext;
    std::uint64_t end_hashed = 0;
    std::uint64_t hash_evals = 0;           // chain hashes, always t
    std::uint64_t endpoint_hash_evals = 0;  // the k-bit hash of the endpoint
};

ChainEnd generate_chain(std::uint64_t start, const Reducer& reducer, std::uint64_t chain_length);

/// All t + 1 plaintext columns P_0..P_t of one chain.
std::vector<std::string> chain_columns(std::uint64_t start, const Reducer& reducer, std::uint64_t chain_length);

struct GenerationStats {
    std::uint64_t hash_evals = 0;
    std::uint64_t endpoint_hash_evals = 0;
    std::uint64_t shared_end_rows = 0;
};

/// m distinct start indices drawn uniformly from [0, N) by Floyd's algorithm
/// on a seeded mt19937_64. Throws ConfigError if m > N.
std::vector<std::uint64_t> sample_starts(std::uint64_t count, std::uint64_t space_size, std::uint64_t seed);

/// Builds m chains (threads == 0: hardware concurrency). Throws ConfigError
/// for invalid params, including m > N.
RainbowTable generate_table(const TableParams& params, unsigned threads = 0, GenerationStats* stats = nullptr);

/// Baseline chains over explicit start plaintexts: S <- R_i(H(S)) for i = 1..t.
std::vector<std::pair<std::string, std::string>> generate_ordinary_table(std::span<const std::string> starts,
                                                                        const Reducer& reducer,
                                                                        std::uint64_t chain_length,
                                                                        std::uint64_t* hash_evals = nullptr);

/// Regenerates the first `count` rows and throws MismatchError if any differs.
void verify_rows(const RainbowTable& table, std::size_t count = 1);

struct SearchOutcome {
    std::optional<std::string> result;
    std::optional<std::uint64_t> column;  // chain column of the recovered plaintext
    std::uint64_t hash_evals = 0;           // replay + endpoint hashes (no rebuilds)
    std::uint64_t endpoint_hash_evals = 0;  // the final-column share of hash_evals
    std::uint64_t rebuild_hash_evals = 0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t engine_queries = 0;
    std::uint64_t chains_examined = 0;      // rows rebuilt, hits and false alarms
    std::uint64_t positions_probed = 0;

    bool found() const noexcept { return result.has_value(); }
};

/// Walks candidate chain positions from the end backwards. Position i assumes
/// the target is the hash of column t - i: i reductions with i - 1 hashes in
/// between give a candidate endpoint whose k-bit hash selects a bucket. A
/// missing bucket skips the position; otherwise the engine is asked about the
/// offset and every matching row with an equal endpoint plaintext is rebuilt.
/// Position 0 (the endpoint column itself) truncates the target directly.
/// A failed search costs exactly t(t-1)/2 replay hashes plus t endpoint hashes.
SearchOutcome search(const HashValue& target, const RainbowTable& table, const buckets::BucketMap& buckets,
                     BucketSearchEngine& engine);

}  // namespace hqr::rainbow
