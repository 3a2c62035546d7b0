#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hqr/digest.hpp"

namespace hqr::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotFound = 1;
inline constexpr int kExitUsage = 2;     // bad flags, unparsable dictionary/config/hex
inline constexpr int kExitConfig = 3;    // valid syntax, impossible parameters (N overflow, m > N, ...)
inline constexpr int kExitMismatch = 4;  // table, buckets and dictionary disagree

/// Parameters shared by every command. Keys match the long flag names.
struct RunConfig {
    std::optional<std::filesystem::path> dict;
    std::optional<std::filesystem::path> table;
    std::optional<std::filesystem::path> buckets;
    std::optional<std::filesystem::path> out;
    std::uint64_t seed = 0;
    std::uint64_t t = 16;
    std::uint64_t m = 64;
    std::uint64_t k = 16;
    unsigned kappa = 16;
    HashAlgorithm hash = HashAlgorithm::SHA1;
    std::string engine = "dega";
    std::string p_grid = "0:0.1:0.01";
    unsigned n = 4;
    std::string tau = "0011";
    std::uint64_t shots = 0;
    unsigned threads = 0;
    bool exhaustive = false;

    static const std::vector<std::string>& keys();
    /// Throws std::invalid_argument for an unknown key or a malformed value.
    void set(const std::string& key, const std::string& value);
};

/// `key=value` lines; `#` comments and blank lines ignored. Throws
/// ParseError for malformed lines and unknown keys.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// "a:b:step", inclusive of b; every value must lie in [0, 1].
std::vector<double> parse_p_grid(const std::string& spec);

/// Entry point shared by the executable and the tests; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hqr::cli
