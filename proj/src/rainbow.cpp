#include "hqr/rainbow.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <thread>
#include <unordered_set>

#include "hqr/errors.hpp"

namespace hqr::rainbow {

namespace {

// Unbiased draw from [0, bound] using only the raw engine output, so the
// sequence is the same on every standard library.
std::uint64_t uniform_upto(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == std::numeric_limits<std::uint64_t>::max()) return rng();
    const std::uint64_t range = bound + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % range;
}

}  // namespace

std::uint64_t hash_to_index(const HashValue& hash, std::uint64_t space_size, std::uint64_t step) {
    unsigned __int128 value = 0;
    for (std::size_t i = 0; i < 16; ++i) value = (value << 8) | hash[i];
    const unsigned __int128 n = space_size;
    return static_cast<std::uint64_t>((value % n + step % n) % n);
}

void validate(const TableParams& params, std::uint64_t space_size) {
    if (params.chain_length < 1) throw ConfigError("chain length t must be >= 1");
    if (params.chain_count < 1) throw ConfigError("chain count m must be >= 1");
    if (params.k < 4 || !std::has_single_bit(params.k)) throw ConfigError("k must be a power of two >= 4");
    if (params.k > space_size) throw ConfigError("k must not exceed the plaintext space size N");
    const unsigned log2k = static_cast<unsigned>(std::countr_zero(params.k));
    const unsigned max_kappa = static_cast<unsigned>(std::min<std::size_t>(64, 8 * digest_size(params.hash)));
    if (params.kappa < log2k || params.kappa > max_kappa)
        throw ConfigError("kappa must lie in [log2(k), " + std::to_string(max_kappa) + "]");
    if (params.chain_count > space_size)
        throw ConfigError("chain count m = " + std::to_string(params.chain_count) +
                          " exceeds plaintext space size N = " + std::to_string(space_size));
}

Reducer::Reducer(const dict::Dictionary& dictionary, HashAlgorithm hash, unsigned kappa)
    : space_(dictionary), hash_(hash), kappa_(kappa) {}

std::string Reducer::reduce(const HashValue& h, std::uint64_t step) const {
    return plain(hash_to_index(h, space_.size(), step));
}

ChainEnd generate_chain(std::uint64_t start, const Reducer& reducer, std::uint64_t chain_length) {
    ChainEnd end;
    std::uint64_t index = start;
    for (std::uint64_t step = 1; step <= chain_length; ++step) {
        const HashValue h = reducer.hash(reducer.plain(index));
        ++end.hash_evals;
        index = hash_to_index(h, reducer.space_size(), step);
    }
    end.end_plaintext = reducer.plain(index);
    end.end_hashed = reducer.k_bit_hash(end.end_plaintext);
    end.endpoint_hash_evals = 1;
    return end;
}

std::vector<std::string> chain_columns(std::uint64_t start, const Reducer& reducer, std::uint64_t chain_length) {
    std::vector<std::string> cols;
    cols.reserve(chain_length + 1);
    cols.push_back(reducer.plain(start));
    for (std::uint64_t step = 1; step <= chain_length; ++step)
        cols.push_back(reducer.reduce(reducer.hash(cols.back()), step));
    return cols;
}

std::vector<std::uint64_t> sample_starts(std::uint64_t count, std::uint64_t space_size, std::uint64_t seed) {
    if (count > space_size)
        throw ConfigError("cannot sample " + std::to_string(count) + " distinct starts from " +
                          std::to_string(space_size));
    std::mt19937_64 rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    std::vector<std::uint64_t> order;
    order.reserve(count);
    for (std::uint64_t j = space_size - count; j < space_size; ++j) {
        const std::uint64_t r = uniform_upto(rng, j);
        const std::uint64_t pick = chosen.insert(r).second ? r : j;
        if (pick == j) chosen.insert(j);
        order.push_back(pick);
    }
    return order;
}

RainbowTable generate_table(const TableParams& params, unsigned threads, GenerationStats* stats) {
    const Reducer reducer(params);
    validate(params, reducer.space_size());

    RainbowTable table;
    table.params = params;
    table.space_size = reducer.space_size();

    const auto starts = sample_starts(params.chain_count, reducer.space_size(), params.seed);
    table.rows.resize(starts.size());

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, starts.size()));

    std::vector<GenerationStats> partial(threads);
    auto work = [&](unsigned worker) {
        for (std::size_t c = worker; c < starts.size(); c += threads) {
            ChainEnd end = generate_chain(starts[c], reducer, params.chain_length);
            partial[worker].hash_evals += end.hash_evals;
            partial[worker].endpoint_hash_evals += end.endpoint_hash_evals;
            table.rows[c] = Row{starts[c], std::move(end.end_plaintext), end.end_hashed, false};
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }

    finalize_rows(table.rows);
    if (stats) {
        *stats = {};
        for (const auto& p : partial) {
            stats->hash_evals += p.hash_evals;
            stats->endpoint_hash_evals += p.endpoint_hash_evals;
        }
        stats->shared_end_rows = static_cast<std::uint64_t>(
            std::count_if(table.rows.begin(), table.rows.end(), [](const Row& r) { return r.shared_end; }));
    }
    return table;
}

std::vector<std::pair<std::string, std::string>> generate_ordinary_table(std::span<const std::string> starts,
                                                                        const Reducer& reducer,
                                                                        std::uint64_t chain_length,
                                                                        std::uint64_t* hash_evals) {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(starts.size());
    for (const auto& start : starts) {
        std::string s = start;
        for (std::uint64_t i = 1; i <= chain_length; ++i) {
            s = reducer.reduce(reducer.hash(s), i);
            if (hash_evals) ++*hash_evals;
        }
        pairs.emplace_back(start, std::move(s));
    }
    return pairs;
}

void verify_rows(const RainbowTable& table, std::size_t count) {
    const Reducer reducer(table.params);
    count = std::min(count, table.rows.size());
    for (std::size_t r = 0; r < count; ++r) {
        const Row& row = table.rows[r];
        if (row.start_index >= reducer.space_size())
            throw MismatchError("row " + std::to_string(r) + " start index is outside the plaintext space");
        const ChainEnd end = generate_chain(row.start_index, reducer, table.params.chain_length);
        if (end.end_plaintext != row.end_plaintext || end.end_hashed != row.end_hashed)
            throw MismatchError("row " + std::to_string(r) +
                                " does not replay to its stored endpoint; wrong dictionary or hash?");
    }
}

SearchOutcome search(const HashValue& target, const RainbowTable& table, const buckets::BucketMap& buckets,
                     BucketSearchEngine& engine) {
    const TableParams& params = table.params;
    if (target.algorithm() != params.hash) throw std::invalid_argument("target hash algorithm differs from table");
    if (buckets.k() != params.k || buckets.kappa() != params.kappa)
        throw MismatchError("bucket map parameters differ from table");

    const Reducer reducer(params);
    const std::uint64_t t = params.chain_length;
    SearchOutcome out;

    for (std::uint64_t i = 0; i <= t; ++i) {
        ++out.positions_probed;
        std::string endpoint;
        std::uint64_t hk;
        if (i == 0) {
            hk = reducer.truncate(target);
        } else {
            HashValue h = target;
            for (std::uint64_t j = 0; j < i; ++j) {
                endpoint = reducer.reduce(h, t - i + 1 + j);
                if (j + 1 < i) {
                    h = reducer.hash(endpoint);
                    ++out.hash_evals;
                }
            }
            hk = reducer.k_bit_hash(endpoint);
            ++out.hash_evals;
            ++out.endpoint_hash_evals;
        }

        const std::uint64_t key = hk / params.k;
        const std::uint64_t offset = hk % params.k;
        const auto membership = buckets.query_bucket(key);
        if (!membership) continue;

        const EngineResult found = engine.search(*membership, offset);
        ++out.engine_queries;
        out.oracle_calls += found.oracle_calls;
        if (!found.found) continue;

        for (std::size_t r : buckets.rows_at(key, offset)) {
            const Row& row = table.rows.at(r);
            if (i > 0 && row.end_plaintext != endpoint) continue;
            ++out.chains_examined;
            // Rebuild columns 0..t-i looking for the preimage of the target.
            std::uint64_t index = row.start_index;
            for (std::uint64_t col = 0; col <= t - i; ++col) {
                std::string p = reducer.plain(index);
                const HashValue h = reducer.hash(p);
                ++out.rebuild_hash_evals;
                if (h == target) {
                    out.result = std::move(p);
                    out.column = col;
                    return out;
                }
                index = hash_to_index(h, reducer.space_size(), col + 1);
            }
        }
    }
    return out;
}

}  // namespace hqr::rainbow
