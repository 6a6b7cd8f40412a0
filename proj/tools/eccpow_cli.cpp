// eccpow command-line front end. Links the shared C API only; file IO,
// argument handling and report shaping live here.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eccpow.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(int rc) {
    if (rc == ECCPOW_OK) return kExitOk;
    if (rc == ECCPOW_ERR_PARAM || rc == ECCPOW_ERR_CONFIG) return kExitUsage;
    return kExitRuntime;
}

// Nonzero API status -> print the engine's message and exit.
void check(int rc, const std::string& context) {
    if (rc == ECCPOW_OK) return;
    std::cerr << "error: " << context << ": " << eccpow_last_error() << "\n";
    std::exit(exit_code_for(rc));
}

[[noreturn]] void die_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitUsage);
}

[[noreturn]] void die_runtime(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitRuntime);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die_usage("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die_runtime("cannot write " + path);
    out << content;
}

std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct TableHandle {
    eccpow_table* ptr = nullptr;
    ~TableHandle() { eccpow_table_free(ptr); }
};

// Builtin ladder unless ECCPOW_TABLE points at a JSON table file.
void load_table(TableHandle& out) {
    const char* path = std::getenv("ECCPOW_TABLE");
    if (path && *path) {
        check(eccpow_table_from_json(read_file(path).c_str(), &out.ptr),
              std::string("ECCPOW_TABLE (") + path + ")");
    } else {
        check(eccpow_table_builtin(&out.ptr), "difficulty table");
    }
}

std::vector<uint8_t> parse_hex(const std::string& hex, size_t want_bytes,
                               const std::string& what) {
    if (hex.size() != want_bytes * 2) die_usage(what + ": expected " +
                                                std::to_string(want_bytes * 2) +
                                                " hex digits");
    std::vector<uint8_t> out(want_bytes);
    for (size_t i = 0; i < want_bytes; ++i) {
        auto nib = [&](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            die_usage(what + ": invalid hex character");
        };
        out[i] = uint8_t(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
    }
    return out;
}

// Sample file reader shared by analyze/adtest: either one value per line
// (optional header) or a comma-separated table with a header naming `column`.
std::vector<double> read_samples(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) die_usage("cannot open " + path);
    std::vector<double> out;
    std::string line;
    size_t lineno = 0;
    int col_index = -1;
    bool multi_column = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (lineno == 1 && line.find(',') != std::string::npos) {
            // split header, find the requested column
            std::stringstream ss(line);
            std::string cell;
            int idx = 0;
            while (std::getline(ss, cell, ',')) {
                if (cell == column) col_index = idx;
                ++idx;
            }
            if (col_index < 0)
                die_usage(path + ": no column named \"" + column + "\" in header");
            multi_column = true;
            continue;
        }
        std::string cell = line;
        if (multi_column) {
            std::stringstream ss(line);
            int idx = 0;
            cell.clear();
            while (std::getline(ss, cell, ',') && idx < col_index) ++idx;
            if (idx != col_index)
                die_usage(path + ": line " + std::to_string(lineno) + ": missing column");
        }
        try {
            size_t used = 0;
            double v = std::stod(cell, &used);
            while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) ++used;
            if (used != cell.size()) throw std::invalid_argument("trailing text");
            out.push_back(v);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // single-column header row
            die_usage(path + ": line " + std::to_string(lineno) + ": not a number: " + cell);
        }
    }
    return out;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& config, uint64_t rng_seed, const std::string& started) {
    json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["rng_seed"] = rng_seed;
    doc["version"] = eccpow_version();
    doc["started"] = started;
    doc["finished"] = iso_now();
    write_file(out_dir + "/manifest.json", doc.dump(2) + "\n");
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) die_runtime("cannot create directory " + dir + ": " + ec.message());
}

// ---- subcommands ----------------------------------------------------------

int cmd_pcm(const std::string& seed_hex, uint32_t n, uint32_t wc, uint32_t wr) {
    std::vector<uint8_t> seed = parse_hex(seed_hex, 32, "--seed-hex");
    eccpow_pcm* pcm = nullptr;
    check(eccpow_pcm_generate(seed.data(), n, wc, wr, &pcm), "pcm");
    char* text = nullptr;
    check(eccpow_pcm_dump(pcm, &text), "pcm dump");
    std::cout << text;
    eccpow_string_free(text);
    eccpow_pcm_free(pcm);
    return kExitOk;
}

int cmd_mine_bench(uint32_t level, uint64_t blocks, unsigned threads, uint64_t seed,
                   const std::string& out_dir) {
    const std::string started = iso_now();
    TableHandle table;
    load_table(table);

    size_t table_size = 0;
    check(eccpow_table_size(table.ptr, &table_size), "table");
    if (level >= table_size) die_usage("--level out of range for the difficulty table");
    uint32_t ln = 0, lwc = 0, lwr = 0;
    double p = 0.0;
    check(eccpow_table_level(table.ptr, level, &ln, &lwc, &lwr, &p), "table level");

    ensure_dir(out_dir);

    // Chain start: a parent hash derived from the seed, so runs with
    // different seeds mine unrelated chains.
    uint8_t parent[32];
    {
        uint8_t seed_bytes[8];
        for (int i = 0; i < 8; ++i) seed_bytes[i] = uint8_t(seed >> (8 * (7 - i)));
        check(eccpow_keccak256(seed_bytes, 8, parent), "seed hash");
    }

    constexpr uint64_t kBudget = 1000000000ull;  // ~10^3x any expected run
    std::ostringstream csv;
    csv << "height,attempts,bgt_ms\n";
    double attempts_sum = 0.0;
    uint64_t total_ms = 0;

    for (uint64_t height = 1; height <= blocks; ++height) {
        const uint64_t timestamp_ms = height * 1000;
        int found = 0;
        uint64_t nonce = 0, attempts = 0;
        uint8_t digest[32];
        auto t0 = std::chrono::steady_clock::now();
        check(eccpow_mine(parent, height, timestamp_ms, level, table.ptr, 0, kBudget,
                          threads, &found, &nonce, digest, &attempts),
              "mine");
        auto t1 = std::chrono::steady_clock::now();
        if (!found) die_runtime("attempt budget exhausted at height " + std::to_string(height));
        const uint64_t ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        csv << height << ',' << attempts << ',' << ms << '\n';
        attempts_sum += double(attempts);
        total_ms += ms;

        // Next parent: digest of the sealed header's canonical 92-byte encoding.
        uint8_t sealed[92];
        std::memcpy(sealed, parent, 32);
        for (int i = 0; i < 8; ++i) sealed[32 + i] = uint8_t(height >> (8 * (7 - i)));
        for (int i = 0; i < 8; ++i) sealed[40 + i] = uint8_t(timestamp_ms >> (8 * (7 - i)));
        for (int i = 0; i < 4; ++i) sealed[48 + i] = uint8_t(level >> (8 * (3 - i)));
        for (int i = 0; i < 8; ++i) sealed[52 + i] = uint8_t(nonce >> (8 * (7 - i)));
        std::memcpy(sealed + 60, digest, 32);
        check(eccpow_keccak256(sealed, sizeof(sealed), parent), "chain hash");
    }

    write_file(out_dir + "/bgt.csv", csv.str());

    json summary;
    summary["blocks"] = blocks;
    summary["level"] = level;
    summary["code"] = {{"n", ln}, {"wc", lwc}, {"wr", lwr}};
    summary["success_prob"] = p;
    summary["expected_attempts"] = 1.0 / p;
    summary["mean_attempts"] = attempts_sum / double(blocks);
    summary["threads"] = threads;
    summary["total_wall_ms"] = total_ms;
    write_file(out_dir + "/summary.json", summary.dump(2) + "\n");

    json cfg = {{"level", level}, {"blocks", blocks}, {"threads", threads}};
    write_manifest(out_dir, "mine-bench", cfg, seed, started);
    std::cout << "mined " << blocks << " blocks at level " << level << " -> " << out_dir
              << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 bool seed_set, uint64_t seed_override) {
    const std::string started = iso_now();
    std::string config_text = read_file(config_path);

    json config_doc;
    try {
        config_doc = json::parse(config_text);
    } catch (const json::exception& e) {
        die_usage(config_path + ": " + e.what());
    }
    if (seed_set) {
        config_doc["rng_seed"] = seed_override;
        config_text = config_doc.dump();
    }
    const uint64_t seed = config_doc.value("rng_seed", 0ull);

    TableHandle table;
    load_table(table);

    eccpow_sim_report* report = nullptr;
    check(eccpow_sim_run_json(config_text.c_str(), table.ptr, &report), "simulate");

    ensure_dir(out_dir);
    char* csv = nullptr;
    check(eccpow_sim_report_csv(report, &csv), "report csv");
    write_file(out_dir + "/blocks.csv", csv);
    eccpow_string_free(csv);

    char* summary = nullptr;
    check(eccpow_sim_report_summary(report, &summary), "report summary");
    write_file(out_dir + "/summary.json", std::string(summary) + "\n");
    std::cout << summary << "\n";
    eccpow_string_free(summary);
    eccpow_sim_report_free(report);

    write_manifest(out_dir, "simulate", config_doc, seed, started);
    return kExitOk;
}

int cmd_analyze(const std::string& in_path, const std::string& out_dir, size_t bins,
                uint64_t seed, const std::string& column) {
    const std::string started = iso_now();
    std::vector<double> samples = read_samples(in_path, column);
    if (samples.size() < 10) die_usage("need at least 10 samples, got " +
                                       std::to_string(samples.size()));

    double lambda = 0.0;
    check(eccpow_fit_exponential(samples.data(), samples.size(), &lambda), "fit");

    std::vector<double> edges(bins + 1);
    std::vector<uint64_t> counts(bins);
    check(eccpow_histogram(samples.data(), samples.size(), bins, edges.data(),
                           counts.data()),
          "histogram");
    std::vector<double> expected(bins);
    check(eccpow_expected_frequencies(lambda, edges.data(), edges.size(),
                                      samples.size(), expected.data()),
          "expected frequencies");

    // Reference draws from the fitted model; the recorded seed makes the
    // comparison reproducible.
    std::vector<double> reference(samples.size());
    check(eccpow_exponential_draws(seed, lambda, reference.size(), reference.data()),
          "reference draws");

    double a2 = 0.0, standardized = 0.0;
    char p_bound[32] = {0};
    check(eccpow_ad_two_sample(samples.data(), samples.size(), reference.data(),
                               reference.size(), &a2, &standardized, p_bound,
                               sizeof(p_bound)),
          "ad test");

    ensure_dir(out_dir);
    std::ostringstream freq;
    freq << "bin_lo,bin_hi,observed,expected\n";
    for (size_t i = 0; i < bins; ++i)
        freq << edges[i] << ',' << edges[i + 1] << ',' << counts[i] << ',' << expected[i]
             << '\n';
    write_file(out_dir + "/frequencies.csv", freq.str());

    json ad;
    ad["a2"] = a2;
    ad["standardized"] = standardized;
    ad["p_bound"] = p_bound;
    ad["M"] = samples.size();
    ad["N"] = reference.size();
    write_file(out_dir + "/ad.json", ad.dump(2) + "\n");

    json analysis;
    analysis["samples"] = samples.size();
    analysis["lambda"] = lambda;
    analysis["mean"] = 1.0 / lambda;
    analysis["bins"] = bins;
    analysis["reference_seed"] = seed;
    analysis["ad"] = ad;
    write_file(out_dir + "/analysis.json", analysis.dump(2) + "\n");

    json cfg = {{"in", in_path}, {"bins", bins}, {"column", column}};
    write_manifest(out_dir, "analyze", cfg, seed, started);
    std::cout << ad.dump(2) << "\n";
    return kExitOk;
}

int cmd_adtest(const std::string& f_path, const std::string& g_path,
               const std::string& column) {
    std::vector<double> f = read_samples(f_path, column);
    std::vector<double> g = read_samples(g_path, column);
    if (f.empty()) die_usage(f_path + ": no samples");
    if (g.empty()) die_usage(g_path + ": no samples");

    double a2 = 0.0, standardized = 0.0;
    char p_bound[32] = {0};
    check(eccpow_ad_two_sample(f.data(), f.size(), g.data(), g.size(), &a2,
                               &standardized, p_bound, sizeof(p_bound)),
          "ad test");

    json doc;
    doc["a2"] = a2;
    doc["standardized"] = standardized;
    doc["p_bound"] = p_bound;
    doc["M"] = f.size();
    doc["N"] = g.size();
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ECC proof-of-work bench, simulation and analysis tool"};
    app.require_subcommand(1);

    // pcm
    auto* pcm = app.add_subcommand("pcm", "print a seeded parity-check matrix dump");
    std::string seed_hex;
    uint32_t pcm_n = 0, pcm_wc = 0, pcm_wr = 0;
    pcm->add_option("--seed-hex", seed_hex, "32-byte seed, hex")->required();
    pcm->add_option("--n", pcm_n, "code length")->required();
    pcm->add_option("--wc", pcm_wc, "column weight")->required();
    pcm->add_option("--wr", pcm_wr, "row weight")->required();

    // mine-bench
    auto* bench = app.add_subcommand("mine-bench",
                                     "mine consecutive blocks with the real decoder");
    uint32_t level = 0;
    uint64_t blocks = 1;
    unsigned threads = 1;
    uint64_t seed = 0;
    std::string out_dir = "out";
    bench->add_option("--level", level, "difficulty level index")->required();
    bench->add_option("--blocks", blocks, "number of blocks")->check(CLI::PositiveNumber);
    bench->add_option("--threads", threads, "decoder workers")->check(CLI::PositiveNumber);
    bench->add_option("--seed", seed, "chain seed");
    bench->add_option("--out", out_dir, "output directory");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run the multi-node network simulation");
    std::string config_path;
    std::string sim_out = "out";
    uint64_t sim_seed = 0;
    sim->add_option("--config", config_path, "simulation config JSON")->required();
    sim->add_option("--out", sim_out, "output directory");
    auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "override config rng_seed");

    // analyze
    auto* ana = app.add_subcommand("analyze",
                                   "fit, bin and test a block-time sample file");
    std::string ana_in, ana_out = "out", ana_column = "bgt_ms";
    size_t ana_bins = 10;
    uint64_t ana_seed = 0;
    ana->add_option("--in", ana_in, "sample CSV (one value per line, or a table "
                                    "with a --column header)")
        ->required();
    ana->add_option("--out", ana_out, "output directory");
    ana->add_option("--bins", ana_bins, "histogram bins")->check(CLI::PositiveNumber);
    ana->add_option("--seed", ana_seed, "seed for the exponential reference draws");
    ana->add_option("--column", ana_column, "column to read from a multi-column CSV");

    // adtest
    auto* ad = app.add_subcommand("adtest", "two-sample Anderson-Darling test");
    std::string f_path, g_path, ad_column = "bgt_ms";
    ad->add_option("f", f_path, "first sample CSV")->required();
    ad->add_option("g", g_path, "second sample CSV")->required();
    ad->add_option("--column", ad_column, "column to read from a multi-column CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (pcm->parsed()) return cmd_pcm(seed_hex, pcm_n, pcm_wc, pcm_wr);
    if (bench->parsed()) return cmd_mine_bench(level, blocks, threads, seed, out_dir);
    if (sim->parsed())
        return cmd_simulate(config_path, sim_out, sim_seed_opt->count() > 0, sim_seed);
    if (ana->parsed()) return cmd_analyze(ana_in, ana_out, ana_bins, ana_seed, ana_column);
    if (ad->parsed()) return cmd_adtest(f_path, g_path, ad_column);
    return kExitUsage;
}
