#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hqr/errors.hpp"
#include "hqr/table.hpp"

namespace hqr::rainbow {

namespace {

std::uint64_t parse_u64(const std::string& field, std::size_t line, const char* what) {
    if (field.empty() || !std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError(std::string("invalid ") + what + " '" + field + "'", line);
    try {
        return std::stoull(field);
    } catch (const std::out_of_range&) {
        throw ParseError(std::string(what) + " out of range", line);
    }
}

}  // namespace

std::span<const Row> RainbowTable::rows_with_end(std::uint64_t end_hashed) const {
    auto lo = std::lower_bound(rows.begin(), rows.end(), end_hashed,
                               [](const Row& r, std::uint64_t v) { return r.end_hashed < v; });
    auto hi = std::upper_bound(lo, rows.end(), end_hashed,
                               [](std::uint64_t v, const Row& r) { return v < r.end_hashed; });
    return {lo, hi};
}

void finalize_rows(std::vector<Row>& rows) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.end_hashed != b.end_hashed ? a.end_hashed < b.end_hashed : a.start_index < b.start_index;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool prev = i > 0 && rows[i - 1].end_hashed == rows[i].end_hashed;
        const bool next = i + 1 < rows.size() && rows[i + 1].end_hashed == rows[i].end_hashed;
        rows[i].shared_end = prev || next;
    }
}

void write_table(std::ostream& out, const RainbowTable& table) {
    const auto& p = table.params;
    out << "RTBL1 " << hash_name(p.hash) << ' ' << p.chain_length << ' ' << p.chain_count << ' ' << p.k << ' '
        << p.kappa << ' ' << p.seed << ' ' << table.space_size << '\n';
    for (const auto& row : table.rows)
        out << row.start_index << ',' << to_hex(row.end_plaintext) << ',' << row.end_hashed << '\n';
}

void save_table(const std::filesystem::path& path, const RainbowTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write table file " + path.string());
    write_table(out, table);
    if (!out) throw std::runtime_error("error writing table file " + path.string());
}

RainbowTable read_table(std::istream& in, const dict::Dictionary& dictionary) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty table file", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::istringstream header(line);
    std::string magic, alg, t, m, k, kappa, seed, n, extra;
    if (!(header >> magic >> alg >> t >> m >> k >> kappa >> seed >> n) || (header >> extra) || magic != "RTBL1")
        throw ParseError("expected 'RTBL1 <hash_alg> <t> <m> <k> <kappa> <seed> <N>' header", 1);

    RainbowTable table;
    auto& p = table.params;
    const auto hash = hash_from_name(alg);
    if (!hash) throw ParseError("unknown hash algorithm '" + alg + "'", 1);
    p.hash = *hash;
    p.chain_length = parse_u64(t, 1, "t");
    p.chain_count = parse_u64(m, 1, "m");
    p.k = parse_u64(k, 1, "k");
    const std::uint64_t kappa_value = parse_u64(kappa, 1, "kappa");
    if (kappa_value > 64) throw ParseError("kappa out of range", 1);
    p.kappa = static_cast<unsigned>(kappa_value);
    p.seed = parse_u64(seed, 1, "seed");
    p.dictionary = dictionary;
    table.space_size = parse_u64(n, 1, "N");

    const std::uint64_t actual_n = dict::PlaintextSpace(dictionary).size();
    if (actual_n != table.space_size)
        throw MismatchError("table was built over N = " + std::to_string(table.space_size) +
                            " but the dictionary defines N = " + std::to_string(actual_n));
    try {
        validate(p, table.space_size);
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid table parameters: ") + e.what(), 1);
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw ParseError("expected 'start_index,end_plaintext_hex,end_hashed'", lineno);
        Row row;
        row.start_index = parse_u64(line.substr(0, c1), lineno, "start index");
        try {
            row.end_plaintext = from_hex(line.substr(c1 + 1, c2 - c1 - 1));
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("end plaintext: ") + e.what(), lineno);
        }
        row.end_hashed = parse_u64(line.substr(c2 + 1), lineno, "end hash");
        if (row.start_index >= table.space_size) throw ParseError("start index outside plaintext space", lineno);
        if (p.kappa < 64 && row.end_hashed >> p.kappa) throw ParseError("end hash wider than kappa bits", lineno);
        if (!table.rows.empty() && row.end_hashed < table.rows.back().end_hashed)
            throw ParseError("rows are not sorted by end hash", lineno);
        table.rows.push_back(std::move(row));
    }
    if (table.rows.size() != p.chain_count)
        throw ParseError("header declares " + std::to_string(p.chain_count) + " rows, file has " +
                         std::to_string(table.rows.size()));
    finalize_rows(table.rows);
    return table;
}

RainbowTable load_table(const std::filesystem::path& path, const dict::Dictionary& dictionary) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open table file " + path.string());
    return read_table(in, dictionary);
}

}  // namespace hqr::rainbow
