#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "hqr/digest.hpp"
#include "hqr/errors.hpp"

namespace fs = std::filesystem;
using hqr::cli::run;

namespace {

const fs::path kDemoDict = fs::path(HQR_DATA_DIR) / "demo.dict";

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("hqr_cli_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string sha1_hex(const std::string& s) { return hqr::full_hash(hqr::HashAlgorithm::SHA1, s).hex(); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("dict check") {
    const auto r = call({"dict", "check", kDemoDict.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("N=4096") != std::string::npos);

    TempDir dir;
    write(dir / "bad.dict", "[words]\npass\n[pattern]\nWQ\n");
    CHECK(call({"dict", "check", (dir / "bad.dict").string()}).code == 2);
    CHECK(call({"dict", "check", (dir / "missing.dict").string()}).code == 2);
}

TEST_CASE("usage errors") {
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"table", "gen", "--t", "abc"}).code == 2);
    CHECK(call({"table", "gen", "--hash", "md5"}).code == 2);
    CHECK(call({"bench", "noise", "--p-grid", "0.5:0.1:0.1"}).code == 2);
}

TEST_CASE("table generation, buckets and crack") {
    TempDir dir;
    const auto table = (dir / "demo.rt").string();
    auto gen = call({"table", "gen", "--dict", kDemoDict.string(), "--out", table, "--t", "16", "--m", "64",
                     "--seed", "20240601"});
    REQUIRE(gen.code == 0);
    CHECK(gen.out.find("m=64 t=16 N=4096") != std::string::npos);
    CHECK(gen.out.find("hash_evals=1024 endpoint_hash_evals=64") != std::string::npos);

    // Same seed, byte-identical file; different seed, different file.
    const auto again = (dir / "again.rt").string();
    REQUIRE(call({"table", "gen", "--dict", kDemoDict.string(), "--out", again, "--seed", "20240601"}).code == 0);
    CHECK(slurp(table) == slurp(again));
    REQUIRE(call({"table", "gen", "--dict", kDemoDict.string(), "--out", again, "--seed", "1"}).code == 0);
    CHECK(slurp(table) != slurp(again));

    auto b = call({"table", "buckets", "--dict", kDemoDict.string(), "--table", table});
    REQUIRE(b.code == 0);
    CHECK(fs::exists(table + ".buckets"));

    // The endpoint of the first row is a plaintext every engine must recover.
    std::istringstream rows(slurp(table));
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    const auto end_plain = hqr::from_hex(row.substr(row.find(',') + 1, row.rfind(',') - row.find(',') - 1));

    for (const std::string engine : {"classical", "dega"}) {
        CAPTURE(engine);
        const auto r = call({"crack", sha1_hex(end_plain), "--dict", kDemoDict.string(), "--table", table,
                             "--buckets", table + ".buckets", "--engine", engine});
        CHECK(r.code == 0);
        CHECK(first_line(r.out) == end_plain);
    }

    const auto miss = call({"crack", sha1_hex("not a demo plaintext"), "--dict", kDemoDict.string(), "--table", table});
    CHECK(miss.code == 1);
    CHECK(first_line(miss.out) == "NOT_FOUND");
    CHECK(miss.out.find("hash_evals=136 endpoint_hash_evals=16") != std::string::npos);

    CHECK(call({"crack", "xyz", "--dict", kDemoDict.string(), "--table", table}).code == 2);
    CHECK(call({"crack", "abcd", "--dict", kDemoDict.string(), "--table", table}).code == 2);
}

TEST_CASE("configuration errors exit with 3") {
    TempDir dir;
    write(dir / "tiny.dict", "[words]\na\nb\nc\nd\n[pattern]\nW\n");
    CHECK(call({"table", "gen", "--dict", (dir / "tiny.dict").string(), "--out", (dir / "x.rt").string(), "--m",
                "5", "--k", "4", "--kappa", "8"})
              .code == 3);

    std::string huge = "[words]\n";
    for (int i = 0; i < 70000; ++i) huge += "w" + std::to_string(i) + "\n";
    huge += "[pattern]\nWWWW\n";
    write(dir / "huge.dict", huge);
    CHECK(call({"dict", "check", (dir / "huge.dict").string()}).code == 3);
    CHECK(call({"bench", "noise", "--n", "9", "--tau", "000000000", "--p-grid", "0.1:0.1:0.1"}).code == 3);
}

TEST_CASE("mismatched inputs exit with 4") {
    TempDir dir;
    const auto table = (dir / "t.rt").string();
    REQUIRE(call({"table", "gen", "--dict", kDemoDict.string(), "--out", table, "--m", "32"}).code == 0);

    write(dir / "small.dict", "[words]\na\nb\nc\nd\ne\nf\ng\nh\n[pattern]\nWW\n");
    CHECK(call({"crack", sha1_hex("a"), "--dict", (dir / "small.dict").string(), "--table", table}).code == 4);

    // Same N, different entries.
    std::string text = "[words]\n";
    for (int i = 0; i < 32; ++i) text += "other" + std::to_string(i) + "\n";
    text += "[numbers]\n";
    for (int i = 0; i < 16; ++i) text += std::to_string(i) + "\n";
    text += "[symbols]\n!\n@\n^\n$\n%\n&\n*\n?\n[pattern]\nWNS\n";
    write(dir / "other.dict", text);
    REQUIRE(call({"dict", "check", (dir / "other.dict").string()}).out.find("N=4096") != std::string::npos);
    CHECK(call({"crack", sha1_hex("a"), "--dict", (dir / "other.dict").string(), "--table", table}).code == 4);

    write(dir / "t.buckets", "BKT1 16 16\n0:1\n");
    CHECK(call({"crack", sha1_hex("a"), "--dict", kDemoDict.string(), "--table", table, "--buckets",
                (dir / "t.buckets").string()})
              .code == 4);
}

TEST_CASE("bench output") {
    const auto success = call({"bench", "success"});
    REQUIRE(success.code == 0);
    CHECK(first_line(success.out) == "n,tau,variant,success_probability");
    CHECK(success.out.find("2,11,original,1.000000000000") != std::string::npos);
    CHECK(success.out.find("3,001,original,0.945312500000") != std::string::npos);
    CHECK(success.out.find("4,1100,dega,1.000000000000") != std::string::npos);
    CHECK(success.out.find("5,01011,modified,1.000000000000") != std::string::npos);

    const auto all = call({"bench", "success", "--exhaustive"});
    CHECK(std::count(all.out.begin(), all.out.end(), '\n') == 1 + 3 * (4 + 8 + 16 + 32));

    const auto noise = call({"bench", "noise", "--n", "4", "--tau", "0011", "--p-grid", "0:0.02:0.01"});
    REQUIRE(noise.code == 0);
    CHECK(std::count(noise.out.begin(), noise.out.end(), '\n') == 1 + 3 * 3);
    CHECK(noise.out.find("0,dega,1.000000000000") != std::string::npos);
    CHECK(noise.out.find("0.02,original,") != std::string::npos);

    const auto sampled = call({"bench", "noise", "--p-grid", "0:0:0.01", "--shots", "1000", "--seed", "3"});
    CHECK(sampled.code == 0);
    CHECK(sampled.out == call({"bench", "noise", "--p-grid", "0:0:0.01", "--shots", "1000", "--seed", "3"}).out);
}

TEST_CASE("config files") {
    TempDir dir;
    write(dir / "run.conf", "# demo\ndict=" + kDemoDict.string() + "\nm=16\nt=4\n");
    const auto out = (dir / "c.rt").string();
    auto r = call({"table", "gen", "--config", (dir / "run.conf").string(), "--out", out, "--m", "8"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("m=8 t=4 N=4096") != std::string::npos);

    write(dir / "bad.conf", "colour=blue\n");
    CHECK(call({"table", "gen", "--config", (dir / "bad.conf").string()}).code == 2);
    write(dir / "bad2.conf", "m 16\n");
    CHECK(call({"table", "gen", "--config", (dir / "bad2.conf").string()}).code == 2);

    CHECK(hqr::cli::parse_p_grid("0:0.1:0.01").size() == 11);
    CHECK(hqr::cli::parse_p_grid("0:0.1:0.01").back() == 0.1);
    CHECK_THROWS_AS(hqr::cli::parse_p_grid("0:2:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(hqr::cli::parse_p_grid("0:1:0"), std::invalid_argument);
}
