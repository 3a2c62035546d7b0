#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "hqr/buckets.hpp"
#include "hqr/errors.hpp"
#include "hqr/grover.hpp"
#include "hqr/rainbow.hpp"

using namespace hqr;
using namespace hqr::rainbow;
using hqr::testing::params_for;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

TableParams tiny_params(std::uint64_t t, std::uint64_t m, unsigned kappa = 8) {
    auto p = params_for(hqr::testing::tiny_dictionary(), t, m, kappa);
    p.k = 4;
    return p;
}

}  // namespace

TEST_CASE("digest vectors") {
    CHECK(full_hash(HashAlgorithm::SHA1, "abc").hex() == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(full_hash(HashAlgorithm::SHA1, "pass").hex() == "9d4e1e23bd5b727046a9e3b4b7db57bd8d6ee684");
    CHECK(full_hash(HashAlgorithm::SHA256, "pass").hex() ==
          "d74ff0ee8da3b9806b18c877dbf29bbde50b5bd8e4dad7a3a725000feb82e8f1");
    const auto h = full_hash(HashAlgorithm::SHA1, "pass");
    CHECK(h.leading_bits(8) == 0x9d);
    CHECK(h.leading_bits(16) == 0x9d4e);
    CHECK(h.leading_bits(64) == 0x9d4e1e23bd5b7270ULL);
    CHECK(HashValue::from_hex(HashAlgorithm::SHA1, h.hex()) == h);
    CHECK_THROWS_AS(HashValue::from_hex(HashAlgorithm::SHA1, "abcd"), std::invalid_argument);
    CHECK_THROWS_AS(HashValue::from_hex(HashAlgorithm::SHA256, h.hex()), std::invalid_argument);
    CHECK(from_hex(to_hex(std::string("a\0b", 3))) == std::string("a\0b", 3));
    CHECK_THROWS_AS(from_hex("zz"), std::invalid_argument);
}

TEST_CASE("hash_to_index") {
    // Digest whose first 16 bytes read as the integer 13.
    std::uint8_t bytes[20] = {};
    bytes[15] = 13;
    const HashValue thirteen(HashAlgorithm::SHA1, bytes);
    CHECK(hash_to_index(thirteen, 5, 0) == 3);
    CHECK(hash_to_index(thirteen, 5, 1) == 4);
    CHECK(hash_to_index(thirteen, 5, 2) == 0);
    CHECK(hash_to_index(full_hash(HashAlgorithm::SHA1, "pass"), 1, 12345) == 0);
    CHECK(hash_to_index(full_hash(HashAlgorithm::SHA1, "pass"), 798, 7) == 136);

    // Bytes beyond the 16th do not take part.
    bytes[19] = 0xff;
    CHECK(hash_to_index(HashValue(HashAlgorithm::SHA1, bytes), 5, 0) == 3);
}

TEST_CASE("property: the step salts the reduction") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = full_hash(HashAlgorithm::SHA256, std::to_string(rng()));
        const std::uint64_t n = 2 + rng() % 100000;
        const std::uint64_t s = rng() % 1000;
        CHECK(hash_to_index(h, n, s + 1) == (hash_to_index(h, n, s) + 1) % n);
        CHECK(hash_to_index(h, n, s) < n);
    }
}

TEST_CASE("tiny chains match independently computed values") {
    const Reducer reducer(hqr::testing::tiny_dictionary(), HashAlgorithm::SHA1, 8);
    const std::vector<std::vector<std::string>> columns{
        {"pass1", "admin2", "pass2", "pass2"},
        {"admin1", "pass2", "admin1", "pass1"},
        {"pass2", "pass1", "pass1", "admin1"},
        {"admin2", "admin1", "admin2", "admin2"},
    };
    const std::uint64_t k8[] = {139, 240, 108, 49};
    const std::uint64_t k16[] = {35813, 61527, 27772, 12639};
    const Reducer wide(hqr::testing::tiny_dictionary(), HashAlgorithm::SHA1, 16);
    for (std::uint64_t s = 0; s < 4; ++s) {
        CAPTURE(s);
        CHECK(chain_columns(s, reducer, 3) == columns[s]);
        const auto end = generate_chain(s, reducer, 3);
        CHECK(end.end_plaintext == columns[s].back());
        CHECK(end.end_hashed == k8[s]);
        CHECK(end.hash_evals == 3);
        CHECK(end.endpoint_hash_evals == 1);
        CHECK(generate_chain(s, wide, 3).end_hashed == k16[s]);
    }
}

TEST_CASE("chain of length 1") {
    const Reducer reducer(hqr::testing::tiny_dictionary(), HashAlgorithm::SHA1, 8);
    const auto end = generate_chain(0, reducer, 1);
    CHECK(end.end_plaintext == reducer.reduce(reducer.hash("pass1"), 1));
    CHECK(end.end_plaintext == "admin2");
    CHECK(end.hash_evals == 1);
}

TEST_CASE("table generation counts and validation") {
    const auto params = params_for(hqr::testing::dictionary_4096(), 16, 64);
    GenerationStats stats;
    const auto table = generate_table(params, 2, &stats);
    CHECK(table.rows.size() == 64);
    CHECK(table.space_size == 4096);
    CHECK(stats.hash_evals == 64 * 16);
    CHECK(stats.endpoint_hash_evals == 64);
    CHECK(std::is_sorted(table.rows.begin(), table.rows.end(),
                         [](const Row& a, const Row& b) { return a.end_hashed < b.end_hashed; }));
    std::set<std::uint64_t> starts;
    for (const auto& r : table.rows) starts.insert(r.start_index);
    CHECK(starts.size() == 64);

    std::uint64_t shared = 0;
    for (const auto& r : table.rows) {
        const bool expect = table.rows_with_end(r.end_hashed).size() > 1;
        CHECK(r.shared_end == expect);
        shared += r.shared_end;
    }
    CHECK(stats.shared_end_rows == shared);

    CHECK_THROWS_AS(generate_table(tiny_params(3, 5)), ConfigError);
    CHECK_THROWS_AS(sample_starts(5, 4, 1), ConfigError);
    CHECK_THROWS_AS(generate_table(tiny_params(0, 2)), ConfigError);
    auto bad_k = tiny_params(3, 2);
    bad_k.k = 6;
    CHECK_THROWS_AS(generate_table(bad_k), ConfigError);
    bad_k.k = 4;
    bad_k.kappa = 1;
    CHECK_THROWS_AS(generate_table(bad_k), ConfigError);
}

TEST_CASE("m = N uses every start exactly once") {
    const auto starts = sample_starts(4, 4, 3);
    CHECK(std::set<std::uint64_t>(starts.begin(), starts.end()) == std::set<std::uint64_t>{0, 1, 2, 3});
    const auto table = generate_table(tiny_params(3, 4));
    // Frozen k=8 endpoints, ascending.
    std::vector<std::uint64_t> ends;
    for (const auto& r : table.rows) ends.push_back(r.end_hashed);
    CHECK(ends == std::vector<std::uint64_t>{49, 108, 139, 240});
}

TEST_CASE("generation is deterministic and independent of thread count") {
    const auto params = params_for(hqr::testing::dictionary_4096(), 8, 200, 16, 42);
    const auto dir = std::filesystem::temp_directory_path() / "hqr_test_rainbow";
    std::filesystem::create_directories(dir);
    save_table(dir / "a.rt", generate_table(params, 1));
    save_table(dir / "b.rt", generate_table(params, 3));
    CHECK(slurp(dir / "a.rt") == slurp(dir / "b.rt"));

    auto other = params;
    other.seed = 43;
    save_table(dir / "c.rt", generate_table(other, 1));
    CHECK(slurp(dir / "a.rt") != slurp(dir / "c.rt"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("ordinary table baseline") {
    const Reducer reducer(hqr::testing::dictionary_4096(), HashAlgorithm::SHA1, 16);
    std::vector<std::string> starts;
    for (std::uint64_t i = 0; i < 10; ++i) starts.push_back(reducer.plain(i * 97));

    std::uint64_t evals = 0;
    const auto zero = generate_ordinary_table(starts, reducer, 0, &evals);
    CHECK(evals == 0);
    for (const auto& [s, e] : zero) CHECK(s == e);

    const auto one = generate_ordinary_table(starts, reducer, 1, &evals);
    CHECK(evals == 10);
    for (const auto& [s, e] : one) CHECK(e == reducer.reduce(reducer.hash(s), 1));

    evals = 0;
    const auto fifty = generate_ordinary_table(starts, reducer, 50, &evals);
    CHECK(evals == 500);
    CHECK(fifty.size() == 10);
}

TEST_CASE("table round trip and malformed input") {
    const auto d = hqr::testing::dictionary_4096();
    const auto table = generate_table(params_for(d, 8, 32));
    std::stringstream buf;
    write_table(buf, table);
    const std::string text = buf.str();
    const auto back = read_table(buf, d);
    CHECK(back.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(back.rows[i].start_index == table.rows[i].start_index);
        CHECK(back.rows[i].end_plaintext == table.rows[i].end_plaintext);
        CHECK(back.rows[i].end_hashed == table.rows[i].end_hashed);
        CHECK(back.rows[i].shared_end == table.rows[i].shared_end);
    }
    CHECK_NOTHROW(verify_rows(back, back.rows.size()));

    auto parse = [&](const std::string& s) {
        std::istringstream in(s);
        return read_table(in, d);
    };
    const auto header_end = text.find('\n') + 1;
    const std::string header = text.substr(0, header_end);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("RTBL2" + text.substr(5)), ParseError);
    CHECK_THROWS_AS(parse(header), ParseError);  // row count disagrees with m
    CHECK_THROWS_AS(parse(text + "1,00,1\n"), ParseError);
    CHECK_THROWS_AS(parse(header + "1,zz,5\n"), ParseError);
    CHECK_THROWS_AS(parse(header + "1,00\n"), ParseError);

    // Swap the first two rows out of order.
    std::istringstream lines(text.substr(header_end));
    std::vector<std::string> rows;
    for (std::string l; std::getline(lines, l);) rows.push_back(l);
    std::string unsorted = header + rows.back() + "\n";
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) unsorted += rows[i] + "\n";
    CHECK_THROWS_AS(parse(unsorted), ParseError);
}

TEST_CASE("table and dictionary mismatch") {
    const auto table = generate_table(params_for(hqr::testing::dictionary_4096(), 8, 16));
    std::stringstream buf;
    write_table(buf, table);
    CHECK_THROWS_AS(read_table(buf, hqr::testing::tiny_dictionary()), MismatchError);

    // Same N, different entries: only replay can tell.
    std::string text = "[words]\n";
    for (int i = 0; i < 16; ++i) text += "other" + std::to_string(i) + "\n";
    text += "[numbers]\n";
    for (int i = 0; i < 16; ++i) text += std::to_string(i) + "\n";
    text += "[symbols]\n!\n@\n^\n$\n%\n&\n*\n?\n[pattern]\nWNS\n[rules]\ncaseshift W 2\n";
    const auto other = hqr::testing::dictionary_from(text);
    std::stringstream again;
    write_table(again, table);
    const auto loaded = read_table(again, other);
    CHECK_THROWS_AS(verify_rows(loaded), MismatchError);
}

TEST_CASE("search recovers a plaintext from every chain column") {
    const auto params = params_for(hqr::testing::dictionary_4096(), 16, 64);
    const auto table = generate_table(params);
    const auto map = buckets::build(table);
    const Reducer reducer(params);
    ClassicalEngine classical;
    grover::DegaEngine dega;

    for (std::size_t r = 0; r < table.rows.size(); r += 7) {
        const auto cols = chain_columns(table.rows[r].start_index, reducer, params.chain_length);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            CAPTURE(r);
            CAPTURE(c);
            const auto target = reducer.hash(cols[c]);
            const auto a = search(target, table, map, classical);
            const auto b = search(target, table, map, dega);
            REQUIRE(a.found());
            CHECK(reducer.hash(*a.result) == target);
            CHECK(a.result == b.result);
            CHECK(a.column == b.column);
            CHECK(a.hash_evals == b.hash_evals);
        }
    }
}

TEST_CASE("a failed search costs t(t-1)/2 + t hashes") {
    for (std::uint64_t t : {1u, 4u, 16u}) {
        CAPTURE(t);
        const auto params = params_for(hqr::testing::dictionary_4096(), t, 64);
        const auto table = generate_table(params);
        const auto map = buckets::build(table);
        ClassicalEngine engine;
        // Not a plaintext of the dictionary at all.
        const auto target = full_hash(HashAlgorithm::SHA1, "definitely not in the space");
        const auto out = search(target, table, map, engine);
        CHECK_FALSE(out.found());
        CHECK(out.hash_evals == t * (t - 1) / 2 + t);
        CHECK(out.endpoint_hash_evals == t);
        CHECK(out.positions_probed == t + 1);
    }
}

TEST_CASE("search argument checks") {
    const auto params = params_for(hqr::testing::dictionary_4096(), 4, 16);
    const auto table = generate_table(params);
    const auto map = buckets::build(table);
    ClassicalEngine engine;
    CHECK_THROWS_AS(search(full_hash(HashAlgorithm::SHA256, "x"), table, map, engine), std::invalid_argument);
    CHECK_THROWS_AS(search(full_hash(HashAlgorithm::SHA1, "x"), table, buckets::BucketMap(32, 16), engine),
                    MismatchError);
}
