#include "hqr/buckets.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hqr/errors.hpp"

namespace hqr::buckets {

namespace {

const std::vector<std::size_t> kNoRows;

std::uint64_t parse_u64(std::string_view field, std::size_t line) {
    if (field.empty() || !std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("invalid number '" + std::string(field) + "'", line);
    try {
        return std::stoull(std::string(field));
    } catch (const std::out_of_range&) {
        throw ParseError("number out of range", line);
    }
}

}  // namespace

BucketMap::BucketMap(std::uint64_t k, unsigned kappa) : k_(k), kappa_(kappa) {
    if (k < 4 || !std::has_single_bit(k)) throw ConfigError("bucket modulus k must be a power of two >= 4");
    if (kappa > 64 || kappa < static_cast<unsigned>(std::countr_zero(k)))
        throw ConfigError("kappa must lie in [log2(k), 64]");
}

std::uint64_t BucketMap::key_limit() const noexcept {
    // k is a power of two no wider than 2^kappa, so the division is exact.
    return kappa_ == 64 ? (~std::uint64_t{0} >> std::countr_zero(k_)) + 1 : (std::uint64_t{1} << kappa_) / k_;
}

void BucketMap::insert_end(std::uint64_t end_hashed, std::size_t row) {
    if (kappa_ < 64 && end_hashed >> kappa_)
        throw std::out_of_range("end hash " + std::to_string(end_hashed) + " exceeds " + std::to_string(kappa_) +
                                " bits");
    const std::uint64_t key = end_hashed / k_;
    const std::uint64_t offset = end_hashed % k_;
    auto& offsets = buckets_[key];
    auto pos = std::lower_bound(offsets.begin(), offsets.end(), offset);
    if (pos == offsets.end() || *pos != offset) offsets.insert(pos, offset);
    provenance_[{key, offset}].push_back(row);
}

std::optional<std::vector<std::uint8_t>> BucketMap::query_bucket(std::uint64_t bucket_key) const {
    auto it = buckets_.find(bucket_key);
    if (it == buckets_.end()) return std::nullopt;
    std::vector<std::uint8_t> membership(k_, 0);
    for (auto offset : it->second) membership[offset] = 1;
    return membership;
}

const std::vector<std::size_t>& BucketMap::rows_at(std::uint64_t bucket_key, std::uint64_t offset) const {
    auto it = provenance_.find({bucket_key, offset});
    return it == provenance_.end() ? kNoRows : it->second;
}

BucketMap build(const rainbow::RainbowTable& table) {
    BucketMap map(table.params.k, table.params.kappa);
    for (std::size_t r = 0; r < table.rows.size(); ++r) map.insert_end(table.rows[r].end_hashed, r);
    return map;
}

void write_buckets(std::ostream& out, const BucketMap& map) {
    out << "BKT1 " << map.k() << ' ' << map.kappa() << '\n';
    for (const auto& [key, offsets] : map.buckets()) {
        out << key << ':';
        for (std::size_t i = 0; i < offsets.size(); ++i) out << (i ? "," : "") << offsets[i];
        out << '\n';
    }
}

void save_buckets(const std::filesystem::path& path, const BucketMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write bucket file " + path.string());
    write_buckets(out, map);
    if (!out) throw std::runtime_error("error writing bucket file " + path.string());
}

BucketMap read_buckets(std::istream& in, const rainbow::RainbowTable& table) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty bucket file", 1);
    std::istringstream header(line);
    std::string magic, k, kappa, extra;
    if (!(header >> magic >> k >> kappa) || (header >> extra) || magic != "BKT1")
        throw ParseError("expected 'BKT1 <k> <kappa>' header", 1);
    const std::uint64_t kappa_value = parse_u64(kappa, 1);
    if (kappa_value > 64) throw ParseError("kappa out of range", 1);

    std::map<std::uint64_t, std::vector<std::uint64_t>> stored;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("expected 'bucket_key:offsets'", lineno);
        auto& offsets = stored[parse_u64(std::string_view(line).substr(0, colon), lineno)];
        std::string_view rest = std::string_view(line).substr(colon + 1);
        while (true) {
            const auto comma = rest.find(',');
            offsets.push_back(parse_u64(rest.substr(0, comma), lineno));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }

    BucketMap rebuilt = build(table);
    if (parse_u64(k, 1) != rebuilt.k() || kappa_value != rebuilt.kappa() || stored != rebuilt.buckets())
        throw MismatchError("bucket sidecar does not match the table");
    return rebuilt;
}

BucketMap load_buckets(const std::filesystem::path& path, const rainbow::RainbowTable& table) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open bucket file " + path.string());
    return read_buckets(in, table);
}

}  // namespace hqr::buckets
