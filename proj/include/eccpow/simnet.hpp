#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eccpow/consensus.hpp"

namespace eccpow {

struct NodeSpec {
    std::string id;
    double hashrate = 0.0;  // attempts/second; 0 = relay-only node
    std::string region;
};

struct LatencyPair {
    std::string region_a;
    std::string region_b;
    double mean_ms = 0.0;
    double jitter_ms = 0.0;  // stddev of the truncated-normal delay
};

// Scales every node's hashrate for blocks at height >= at_height; with
// several steps the one with the largest at_height <= height applies.
struct HashrateStep {
    uint64_t at_height = 0;
    double scale = 1.0;
};

struct SimConfig {
    std::vector<NodeSpec> nodes;
    std::vector<LatencyPair> latency_pairs;
    // Empty edge list = full mesh; otherwise undirected id pairs.
    std::vector<std::pair<std::string, std::string>> edges;
    DifficultyTable table = DifficultyTable::builtin();
    size_t genesis_level = 0;
    double duration_s = 0.0;
    uint64_t rng_seed = 0;
    std::vector<HashrateStep> hashrate_steps;

    void validate() const;
    // Keys: nodes[].{id,hashrate,region}, latency.pairs[].{a,b,mean_ms,jitter_ms},
    // difficulty.genesis_level, duration_s, rng_seed, and optional
    // topology.edges / hashrate_steps. The difficulty table itself is not
    // part of the file; callers inject one (default stays builtin).
    static SimConfig from_json(const std::string& json_text);
};

struct BlockRecord {
    uint64_t height = 0;
    std::string miner;
    uint64_t bgt_ms = 0;
    uint32_t level = 0;
    uint64_t max_prop_ms = 0;  // mine time -> last recorded arrival
    bool stale = false;
};

struct SimReport {
    std::vector<BlockRecord> blocks;  // every mined block, in mine-time order
    uint64_t total_mined = 0;
    uint64_t stale_blocks = 0;
    std::vector<uint32_t> difficulty_series;  // canonical level per height, from 1
    double configured_hashrate = 0.0;
    double duration_s = 0.0;

    std::string to_csv() const;  // height,miner,bgt_ms,level,max_prop_ms,stale
    std::string summary_json() const;
};

// Share of canonical blocks whose full propagation finished within each
// window; percentages over [0, 100].
struct PropagationBuckets {
    double le_1s = 0.0;
    double s1_to_2 = 0.0;
    double s2_to_4 = 0.0;
    double gt_4s = 0.0;
};

PropagationBuckets propagation_stats(const SimReport& report);

double fork_rate(const SimReport& report);  // stale / total mined

// Event-driven run on one logical clock: per-head mining draws are
// Geometric(p)/hashrate, restarted memorylessly on head change; blocks flood
// with truncated-normal per-hop latency; nodes adopt the highest total
// hardness (sum of 1/p), ties to the first arrival, then the lower block
// hash. Deterministic in (config, rng_seed).
SimReport run_simulation(const SimConfig& config);

}  // namespace eccpow
