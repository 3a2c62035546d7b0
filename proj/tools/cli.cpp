#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "hqr/buckets.hpp"
#include "hqr/dictgen.hpp"
#include "hqr/errors.hpp"
#include "hqr/grover.hpp"
#include "hqr/qsim.hpp"
#include "hqr/rainbow.hpp"

namespace hqr::cli {

namespace {

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("'" + key + "' expects a non-negative integer, got '" + value + "'");
    try {
        return std::stoull(value);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("'" + key + "' is out of range");
    }
}

unsigned to_unsigned(const std::string& key, const std::string& value) {
    const auto v = to_u64(key, value);
    if (v > 1024) throw std::invalid_argument("'" + key + "' is out of range");
    return static_cast<unsigned>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("'" + key + "' expects true or false");
}

// Runs fn(i) for i in [0, count) over worker threads; fn writes only its own slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) fn(i);
        });
}

std::string format_probability(double p) { return fmt::format("{:.12f}", p); }

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
public:
    Sink(const std::optional<std::filesystem::path>& path, std::ostream& fallback) : stream_(&fallback) {
        if (path) {
            file_.open(*path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot write " + path->string());
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

struct Context {
    RunConfig cfg;
    std::ostream& out;
    std::ostream& err;
};

const std::filesystem::path& require(const std::optional<std::filesystem::path>& p, const char* flag) {
    if (!p) throw std::invalid_argument(std::string("missing required --") + flag);
    return *p;
}

double estimate(const std::vector<double>& probs, std::uint64_t target, const RunConfig& cfg, std::uint64_t row) {
    if (cfg.shots == 0) return probs[target];
    const auto counts = qsim::sample_counts(probs, cfg.shots, cfg.seed + row);
    return static_cast<double>(counts[target]) / static_cast<double>(cfg.shots);
}

int cmd_dict_check(Context& ctx, const std::string& file) {
    const dict::Dictionary d = dict::load_dictionary(file);
    const dict::PlaintextSpace space(d);
    fmt::print(ctx.out, "pattern={} N={}", d.pattern.to_string(), space.size());
    for (const auto& [cls, gen] : d.gset.generators) fmt::print(ctx.out, " {}={}", dict::class_symbol(cls), gen.size());
    fmt::print(ctx.out, " rules={}\n", d.gset.rules.size());
    return kExitOk;
}

rainbow::TableParams table_params(const RunConfig& cfg, dict::Dictionary dictionary) {
    rainbow::TableParams p;
    p.chain_length = cfg.t;
    p.chain_count = cfg.m;
    p.hash = cfg.hash;
    p.k = cfg.k;
    p.kappa = cfg.kappa;
    p.seed = cfg.seed;
    p.dictionary = std::move(dictionary);
    return p;
}

int cmd_table_gen(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto& dict_path = require(cfg.dict, "dict");
    const auto& out_path = cfg.out ? *cfg.out : require(cfg.table, "out");
    auto params = table_params(cfg, dict::load_dictionary(dict_path));

    const auto begin = std::chrono::steady_clock::now();
    rainbow::GenerationStats stats;
    const auto table = rainbow::generate_table(params, cfg.threads, &stats);
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin).count();
    rainbow::save_table(out_path, table);

    fmt::print(ctx.out, "m={} t={} N={} elapsed_ms={:.1f} hash_evals={} endpoint_hash_evals={} shared_end_rows={}\n",
               params.chain_count, params.chain_length, table.space_size, elapsed, stats.hash_evals,
               stats.endpoint_hash_evals, stats.shared_end_rows);
    return kExitOk;
}

int cmd_table_buckets(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto dictionary = dict::load_dictionary(require(cfg.dict, "dict"));
    const auto& table_path = require(cfg.table, "table");
    const auto table = rainbow::load_table(table_path, dictionary);
    const auto map = buckets::build(table);
    const auto out_path = cfg.out ? *cfg.out : std::filesystem::path(table_path.string() + ".buckets");
    buckets::save_buckets(out_path, map);
    fmt::print(ctx.out, "buckets={} rows={} k={} kappa={} file={}\n", map.buckets().size(), table.rows.size(),
               map.k(), map.kappa(), out_path.string());
    return kExitOk;
}

int cmd_crack(Context& ctx, const std::string& hex) {
    const auto& cfg = ctx.cfg;
    try {
        (void)from_hex(hex);
    } catch (const std::invalid_argument& e) {
        fmt::print(ctx.err, "error: malformed target hash: {}\n", e.what());
        return kExitUsage;
    }
    std::unique_ptr<BucketSearchEngine> engine;
    if (cfg.engine == "classical")
        engine = std::make_unique<ClassicalEngine>();
    else if (cfg.engine == "dega")
        engine = std::make_unique<grover::DegaEngine>();
    else
        throw std::invalid_argument("--engine must be classical or dega");

    const auto dictionary = dict::load_dictionary(require(cfg.dict, "dict"));
    const auto table = rainbow::load_table(require(cfg.table, "table"), dictionary);
    rainbow::verify_rows(table, 1);
    const auto map = cfg.buckets ? buckets::load_buckets(*cfg.buckets, table) : buckets::build(table);

    HashValue target;
    try {
        target = HashValue::from_hex(table.params.hash, hex);
    } catch (const std::invalid_argument& e) {
        fmt::print(ctx.err, "error: malformed target hash: {}\n", e.what());
        return kExitUsage;
    }

    const auto outcome = rainbow::search(target, table, map, *engine);
    fmt::print(ctx.out, "{}\n", outcome.result ? *outcome.result : std::string("NOT_FOUND"));
    fmt::print(ctx.out,
               "engine={} hash_evals={} endpoint_hash_evals={} rebuild_hash_evals={} oracle_calls={} "
               "engine_queries={} chains_examined={}\n",
               engine->name(), outcome.hash_evals, outcome.endpoint_hash_evals, outcome.rebuild_hash_evals,
               outcome.oracle_calls, outcome.engine_queries, outcome.chains_examined);
    return outcome.found() ? kExitOk : kExitNotFound;
}

int cmd_bench_noise(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const grover::TargetSpec spec{cfg.n, cfg.tau};
    spec.validate();
    const auto grid = parse_p_grid(cfg.p_grid);

    struct Cell {
        double p;
        grover::Variant variant;
        double value = 0.0;
    };
    std::vector<Cell> cells;
    for (double p : grid)
        for (auto v : grover::kAllVariants) cells.push_back({p, v});

    parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
        const auto circuit = grover::build_circuit(cells[i].variant, spec);
        const auto probs = qsim::run_circuit(circuit, spec.n, qsim::NoiseModel{cells[i].p});
        cells[i].value = estimate(probs, spec.index(), cfg, i);
    });

    Sink sink(cfg.out, ctx.out);
    fmt::print(*sink, "p,variant,success_probability\n");
    for (const auto& c : cells)
        fmt::print(*sink, "{},{},{}\n", c.p, grover::variant_name(c.variant), format_probability(c.value));
    return kExitOk;
}

int cmd_bench_success(Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<grover::TargetSpec> targets;
    if (cfg.exhaustive) {
        for (unsigned n = 2; n <= 5; ++n)
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) targets.push_back(grover::TargetSpec::from_index(n, x));
    } else {
        for (const char* tau : {"11", "001", "1100", "01011"})
            targets.push_back({static_cast<unsigned>(std::string_view(tau).size()), tau});
    }

    struct Cell {
        const grover::TargetSpec* spec;
        grover::Variant variant;
        double value = 0.0;
    };
    std::vector<Cell> cells;
    for (const auto& t : targets)
        for (auto v : grover::kAllVariants) cells.push_back({&t, v});

    parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
        const auto& spec = *cells[i].spec;
        const auto probs = qsim::run_circuit(grover::build_circuit(cells[i].variant, spec), spec.n);
        cells[i].value = estimate(probs, spec.index(), cfg, i);
    });

    Sink sink(cfg.out, ctx.out);
    fmt::print(*sink, "n,tau,variant,success_probability\n");
    for (const auto& c : cells)
        fmt::print(*sink, "{},{},{},{}\n", c.spec->n, c.spec->tau, grover::variant_name(c.variant),
                   format_probability(c.value));
    return kExitOk;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k{"dict", "table", "buckets", "out",   "seed",  "t",
                                            "m",    "k",     "kappa",   "hash",  "engine", "p-grid",
                                            "n",    "tau",   "shots",   "threads", "exhaustive"};
    return k;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "dict") dict = value;
    else if (key == "table") table = value;
    else if (key == "buckets") buckets = value;
    else if (key == "out") out = value;
    else if (key == "seed") seed = to_u64(key, value);
    else if (key == "t") t = to_u64(key, value);
    else if (key == "m") m = to_u64(key, value);
    else if (key == "k") k = to_u64(key, value);
    else if (key == "kappa") kappa = to_unsigned(key, value);
    else if (key == "hash") {
        auto h = hash_from_name(value);
        if (!h) throw std::invalid_argument("'hash' must be sha1 or sha256");
        hash = *h;
    } else if (key == "engine") {
        if (value != "classical" && value != "dega") throw std::invalid_argument("'engine' must be classical or dega");
        engine = value;
    } else if (key == "p-grid") {
        (void)parse_p_grid(value);
        p_grid = value;
    } else if (key == "n") n = to_unsigned(key, value);
    else if (key == "tau") tau = value;
    else if (key == "shots") shots = to_u64(key, value);
    else if (key == "threads") threads = to_unsigned(key, value);
    else if (key == "exhaustive") exhaustive = to_bool(key, value);
    else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t lineno = 0;
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
        const std::string key = trim(line.substr(0, eq));
        const auto& known = RunConfig::keys();
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ParseError("unknown configuration key '" + key + "'", lineno);
        values[key] = trim(line.substr(eq + 1));
    }
    return values;
}

std::vector<double> parse_p_grid(const std::string& spec) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    std::string rest;
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || (in >> rest))
        throw std::invalid_argument("p-grid must read a:b:step");
    if (!(a >= 0.0 && b <= 1.0 && a <= b)) throw std::invalid_argument("p-grid bounds must satisfy 0 <= a <= b <= 1");
    if (!(step > 0.0)) throw std::invalid_argument("p-grid step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw std::invalid_argument("p-grid has too many points");
    std::vector<double> grid;
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(std::min(1.0, std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12));
    return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid rainbow-table / distributed exact Grover toolkit", "hqr"};
    app.require_subcommand(1);

    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, CLI::Option*>> flags;
    std::string config_path, dict_file, target_hex;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value file; flags override it");
        for (const auto& key : RunConfig::keys()) {
            CLI::Option* opt = key == "exhaustive" ? sub->add_flag("--exhaustive", "all targets for n = 2..5")
                                                   : sub->add_option("--" + key, flag_values[key]);
            flags.emplace_back(key, opt);
        }
    };

    auto* dict_cmd = app.add_subcommand("dict", "dictionary tools")->require_subcommand(1);
    auto* dict_check = dict_cmd->add_subcommand("check", "parse a dictionary and report its size");
    dict_check->add_option("file", dict_file)->required();

    auto* table_cmd = app.add_subcommand("table", "rainbow table tools")->require_subcommand(1);
    auto* table_gen = table_cmd->add_subcommand("gen", "generate an RTBL1 table");
    auto* table_buckets = table_cmd->add_subcommand("buckets", "write the bucket sidecar of a table");
    auto* crack = app.add_subcommand("crack", "recover a plaintext from its hash");
    crack->add_option("target", target_hex, "target digest, hex")->required();
    auto* bench_cmd = app.add_subcommand("bench", "quantum search experiments")->require_subcommand(1);
    auto* bench_noise = bench_cmd->add_subcommand("noise", "success probability under depolarizing noise");
    auto* bench_success = bench_cmd->add_subcommand("success", "noiseless success probability per target");
    for (auto* sub : {table_gen, table_buckets, crack, bench_noise, bench_success}) add_common(sub);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Context ctx{RunConfig{}, out, err};
        if (!config_path.empty())
            for (const auto& [key, value] : read_config_file(config_path)) ctx.cfg.set(key, value);
        for (const auto& [key, opt] : flags) {
            if (opt->count() == 0) continue;
            ctx.cfg.set(key, key == "exhaustive" ? "true" : flag_values[key]);
        }

        if (dict_check->parsed()) return cmd_dict_check(ctx, dict_file);
        if (table_gen->parsed()) return cmd_table_gen(ctx);
        if (table_buckets->parsed()) return cmd_table_buckets(ctx);
        if (crack->parsed()) return cmd_crack(ctx, target_hex);
        if (bench_noise->parsed()) return cmd_bench_noise(ctx);
        if (bench_success->parsed()) return cmd_bench_success(ctx);
        err << app.help();
        return kExitUsage;
    } catch (const ParseError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const MismatchError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitMismatch;
    } catch (const ConfigError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitConfig;
    } catch (const ShapeError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(err, "internal error: {}\n", e.what());
        return 70;
    }
}

}  // namespace hqr::cli
