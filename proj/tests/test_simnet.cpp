#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>

#include "eccpow/errors.hpp"
#include "eccpow/simnet.hpp"

using namespace eccpow;

namespace {

SimConfig solo_config(double hashrate, double duration_s, uint64_t seed) {
    SimConfig cfg;
    cfg.nodes = {{"solo", hashrate, "r"}};
    cfg.duration_s = duration_s;
    cfg.rng_seed = seed;
    return cfg;
}

}  // namespace

TEST_SUITE("sim_config") {

TEST_CASE("json round trip of every section") {
    const std::string text = R"({
        "nodes": [
            {"id": "a", "hashrate": 2.5, "region": "east"},
            {"id": "b", "hashrate": 0.0, "region": "west"}
        ],
        "latency": {"pairs": [
            {"a": "east", "b": "west", "mean_ms": 900, "jitter_ms": 120}
        ]},
        "difficulty": {"genesis_level": 1},
        "duration_s": 600,
        "rng_seed": 42,
        "topology": {"edges": [["a", "b"]]},
        "hashrate_steps": [{"at_height": 10, "scale": 2.0}]
    })";
    SimConfig cfg = SimConfig::from_json(text);
    CHECK_NOTHROW(cfg.validate());
    REQUIRE(cfg.nodes.size() == 2);
    CHECK(cfg.nodes[0].id == "a");
    CHECK(cfg.nodes[0].hashrate == doctest::Approx(2.5));
    CHECK(cfg.nodes[1].hashrate == doctest::Approx(0.0));
    REQUIRE(cfg.latency_pairs.size() == 1);
    CHECK(cfg.latency_pairs[0].mean_ms == doctest::Approx(900));
    CHECK(cfg.genesis_level == 1);
    CHECK(cfg.duration_s == doctest::Approx(600));
    CHECK(cfg.rng_seed == 42);
    REQUIRE(cfg.edges.size() == 1);
    REQUIRE(cfg.hashrate_steps.size() == 1);
    CHECK(cfg.hashrate_steps[0].at_height == 10);
    CHECK(cfg.hashrate_steps[0].scale == doctest::Approx(2.0));
}

TEST_CASE("unknown keys and malformed documents rejected") {
    CHECK_THROWS_AS(SimConfig::from_json("not json"), Error);
    CHECK_THROWS_AS(SimConfig::from_json(R"({"nodes": [], "duration_s": 1, "oops": 1})"),
                    Error);
    CHECK_THROWS_AS((SimConfig::from_json(R"({"duration_s": 1})")), Error);  // nodes missing
    CHECK_THROWS_AS(
        SimConfig::from_json(R"({"nodes": [{"id":"a","region":"r"}], "duration_s": 1})"),
        Error);  // hashrate missing
    try {
        SimConfig::from_json(R"({"nodes": [], "duration_s": 1, "oops": 1})");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }
}

TEST_CASE("validation failures name the offending path") {
    SimConfig cfg = solo_config(1.0, 60, 1);

    SimConfig bad = cfg;
    bad.nodes.clear();
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.nodes.push_back({"solo", 1.0, "r"});  // duplicate id
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.nodes[0].hashrate = 0.0;  // nobody mines
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.duration_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.genesis_level = 99;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.latency_pairs = {{"nowhere", "r", 10, 0}};
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.edges = {{"solo", "solo"}};
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.hashrate_steps = {{5, 2.0}, {5, 3.0}};  // heights must strictly increase
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = cfg;
    bad.hashrate_steps = {{0, 2.0}};
    CHECK_THROWS_AS(bad.validate(), Error);

    // Relay-only nodes are fine as long as someone mines.
    SimConfig ok = cfg;
    ok.nodes.push_back({"relay", 0.0, "r"});
    CHECK_NOTHROW(ok.validate());
}

}  // TEST_SUITE

TEST_SUITE("simnet") {

TEST_CASE("runs are deterministic in config and seed") {
    SimConfig cfg = solo_config(10.0, 900, 77);
    cfg.nodes.push_back({"peer", 10.0, "r"});
    cfg.latency_pairs = {{"r", "r", 200.0, 60.0}};
    SimReport a = run_simulation(cfg);
    SimReport b = run_simulation(cfg);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.summary_json() == b.summary_json());

    cfg.rng_seed = 78;
    SimReport c = run_simulation(cfg);
    CHECK(a.to_csv() != c.to_csv());
}

TEST_CASE("solo miner never forks and propagates instantly") {
    SimReport rep = run_simulation(solo_config(10.0, 1800, 5));
    CHECK(rep.total_mined > 50);
    CHECK(rep.stale_blocks == 0);
    CHECK(fork_rate(rep) == doctest::Approx(0.0));
    for (const auto& b : rep.blocks) CHECK(b.max_prop_ms == 0);
    PropagationBuckets pb = propagation_stats(rep);
    CHECK(pb.le_1s == doctest::Approx(100.0));
    CHECK(rep.difficulty_series.size() == rep.total_mined);
}

TEST_CASE("first block inherits the genesis level") {
    SimConfig cfg = solo_config(10.0, 600, 9);
    cfg.genesis_level = 2;
    SimReport rep = run_simulation(cfg);
    REQUIRE_FALSE(rep.difficulty_series.empty());
    CHECK(rep.difficulty_series[0] == 2);
}

TEST_CASE("difficulty settles where block time fits the window") {
    // 10 attempts/s against the builtin ladder: level 4 is the only rung
    // whose expected solve time (~17 s) sits inside [9 s, 18 s].
    SimReport rep = run_simulation(solo_config(10.0, 3600, 5));
    REQUIRE(rep.difficulty_series.size() > 100);
    std::map<uint32_t, int> level_count;
    for (size_t i = 10; i < rep.difficulty_series.size(); ++i) {
        uint32_t lv = rep.difficulty_series[i];
        CHECK(lv >= 2);
        CHECK(lv <= 5);
        ++level_count[lv];
    }
    auto mode = std::max_element(level_count.begin(), level_count.end(),
                                 [](auto& x, auto& y) { return x.second < y.second; });
    CHECK(mode->first == 4);
}

TEST_CASE("high latency between equal miners produces forks") {
    SimConfig cfg;
    cfg.nodes = {{"a", 5.0, "east"}, {"b", 5.0, "west"}};
    cfg.latency_pairs = {{"east", "west", 5000.0, 0.0}};
    cfg.duration_s = 4000;
    cfg.rng_seed = 11;
    SimReport rep = run_simulation(cfg);
    CHECK(rep.total_mined > 100);
    CHECK(rep.stale_blocks > 20);
    CHECK(fork_rate(rep) > 0.1);
    CHECK(fork_rate(rep) < 0.5);
    // Stale blocks are excluded from the canonical difficulty series.
    CHECK(rep.difficulty_series.size() == rep.total_mined - rep.stale_blocks);
}

TEST_CASE("hashrate steps shift the equilibrium level") {
    SimConfig cfg = solo_config(10.0, 5400, 3);
    cfg.hashrate_steps = {{60, 4.0}};
    SimReport rep = run_simulation(cfg);
    REQUIRE(rep.difficulty_series.size() > 150);
    double before = 0.0, after = 0.0;
    int nb = 0, na = 0;
    for (size_t i = 0; i < rep.difficulty_series.size(); ++i) {
        if (i >= 20 && i < 55) {
            before += rep.difficulty_series[i];
            ++nb;
        }
        if (i >= 90) {
            after += rep.difficulty_series[i];
            ++na;
        }
    }
    REQUIRE(nb > 0);
    REQUIRE(na > 0);
    CHECK(after / na - before / nb > 0.5);  // 4x the rate pushes the ladder up
}

TEST_CASE("blocks reach nodes across a line topology") {
    SimConfig cfg;
    cfg.nodes = {{"a", 5.0, "r"}, {"b", 0.0, "r"}, {"c", 0.0, "r"}};
    cfg.edges = {{"a", "b"}, {"b", "c"}};  // a never talks to c directly
    cfg.latency_pairs = {{"r", "r", 100.0, 10.0}};
    cfg.duration_s = 1200;
    cfg.rng_seed = 21;
    SimReport rep = run_simulation(cfg);
    REQUIRE(rep.total_mined > 10);
    // Every canonical block needs two hops to finish propagating.
    int checked = 0;
    for (const auto& b : rep.blocks) {
        if (b.stale) continue;
        CHECK(b.max_prop_ms > 100);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("csv and summary formats") {
    SimReport rep = run_simulation(solo_config(10.0, 600, 13));
    std::string csv = rep.to_csv();
    CHECK(csv.rfind("height,miner,bgt_ms,level,max_prop_ms,stale\n", 0) == 0);
    std::string summary = rep.summary_json();
    for (const char* key : {"total_mined", "stale_blocks", "canonical_blocks",
                            "mean_bgt_ms", "median_bgt_ms", "fork_rate",
                            "propagation_pct", "final_level"})
        CHECK(summary.find(key) != std::string::npos);
}

TEST_CASE("empty reports are rejected by the rate helpers") {
    SimReport empty;
    CHECK_THROWS_AS(fork_rate(empty), Error);
    CHECK_THROWS_AS(propagation_stats(empty), Error);
}

}  // TEST_SUITE
