#include "eccpow/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "eccpow/bytes.hpp"
#include "eccpow/errors.hpp"
#include "eccpow/rng.hpp"

namespace eccpow {

void SimConfig::validate() const {
    if (nodes.empty())
        fail(ErrorCode::config, "nodes: at least one node required");
    if (!(duration_s > 0.0))
        fail(ErrorCode::config, "duration_s: must be positive");
    table.validate();
    if (genesis_level >= table.size())
        fail(ErrorCode::config, "difficulty.genesis_level: out of table range");

    std::map<std::string, std::string> region_of;
    double total_rate = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        const auto& nd = nodes[i];
        const std::string at = "nodes[" + std::to_string(i) + "]";
        if (nd.id.empty())
            fail(ErrorCode::config, at + ".id: must be non-empty");
        if (region_of.count(nd.id))
            fail(ErrorCode::config, at + ".id: duplicate id \"" + nd.id + "\"");
        if (nd.region.empty())
            fail(ErrorCode::config, at + ".region: must be non-empty");
        if (!(nd.hashrate >= 0.0))
            fail(ErrorCode::config, at + ".hashrate: must be >= 0");
        region_of[nd.id] = nd.region;
        total_rate += nd.hashrate;
    }
    if (!(total_rate > 0.0))
        fail(ErrorCode::config, "nodes: at least one node needs hashrate > 0");

    auto known_region = [&](const std::string& r) {
        for (const auto& nd : nodes)
            if (nd.region == r) return true;
        return false;
    };
    for (size_t i = 0; i < latency_pairs.size(); ++i) {
        const auto& p = latency_pairs[i];
        const std::string at = "latency.pairs[" + std::to_string(i) + "]";
        if (!(p.mean_ms >= 0.0) || !(p.jitter_ms >= 0.0))
            fail(ErrorCode::config, at + ": mean_ms and jitter_ms must be >= 0");
        if (!known_region(p.region_a) || !known_region(p.region_b))
            fail(ErrorCode::config, at + ": references a region no node uses");
    }
    for (size_t i = 0; i < edges.size(); ++i) {
        const std::string at = "topology.edges[" + std::to_string(i) + "]";
        if (!region_of.count(edges[i].first) || !region_of.count(edges[i].second))
            fail(ErrorCode::config, at + ": unknown node id");
        if (edges[i].first == edges[i].second)
            fail(ErrorCode::config, at + ": self-loop");
    }
    uint64_t prev_height = 0;
    for (size_t i = 0; i < hashrate_steps.size(); ++i) {
        const std::string at = "hashrate_steps[" + std::to_string(i) + "]";
        if (hashrate_steps[i].at_height < 1)
            fail(ErrorCode::config, at + ".at_height: must be >= 1");
        if (i > 0 && hashrate_steps[i].at_height <= prev_height)
            fail(ErrorCode::config, at + ".at_height: must strictly increase");
        if (!(hashrate_steps[i].scale > 0.0))
            fail(ErrorCode::config, at + ".scale: must be positive");
        prev_height = hashrate_steps[i].at_height;
    }
}

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
    fail(ErrorCode::config, path + ": " + what);
}

double num_field(const nlohmann::json& obj, const std::string& path, const char* key,
                 bool required, double fallback) {
    if (!obj.contains(key)) {
        if (required) config_fail(path + "." + key, "missing");
        return fallback;
    }
    const auto& v = obj[key];
    if (!v.is_number()) config_fail(path + "." + key, "expected a number");
    return v.get<double>();
}

std::string str_field(const nlohmann::json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) config_fail(path + "." + key, "missing");
    if (!obj[key].is_string()) config_fail(path + "." + key, "expected a string");
    return obj[key].get<std::string>();
}

}  // namespace

SimConfig SimConfig::from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::config, std::string("config: ") + e.what());
    }
    if (!doc.is_object())
        fail(ErrorCode::config, "config: expected a JSON object");

    static const char* known[] = {"nodes",      "latency",        "difficulty",
                                  "duration_s", "rng_seed",       "topology",
                                  "hashrate_steps"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            config_fail(key, "unknown key");
    }

    SimConfig cfg;

    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        config_fail("nodes", "expected an array");
    for (size_t i = 0; i < doc["nodes"].size(); ++i) {
        const auto& item = doc["nodes"][i];
        const std::string path = "nodes[" + std::to_string(i) + "]";
        if (!item.is_object()) config_fail(path, "expected an object");
        NodeSpec nd;
        nd.id = str_field(item, path, "id");
        nd.hashrate = num_field(item, path, "hashrate", true, 0.0);
        nd.region = str_field(item, path, "region");
        cfg.nodes.push_back(std::move(nd));
    }

    if (doc.contains("latency")) {
        const auto& lat = doc["latency"];
        if (!lat.is_object() || !lat.contains("pairs") || !lat["pairs"].is_array())
            config_fail("latency.pairs", "expected an array");
        for (size_t i = 0; i < lat["pairs"].size(); ++i) {
            const auto& item = lat["pairs"][i];
            const std::string path = "latency.pairs[" + std::to_string(i) + "]";
            if (!item.is_object()) config_fail(path, "expected an object");
            LatencyPair p;
            p.region_a = str_field(item, path, "a");
            p.region_b = str_field(item, path, "b");
            p.mean_ms = num_field(item, path, "mean_ms", true, 0.0);
            p.jitter_ms = num_field(item, path, "jitter_ms", false, 0.0);
            cfg.latency_pairs.push_back(std::move(p));
        }
    }

    if (doc.contains("difficulty")) {
        const auto& diff = doc["difficulty"];
        if (!diff.is_object()) config_fail("difficulty", "expected an object");
        cfg.genesis_level =
            static_cast<size_t>(num_field(diff, "difficulty", "genesis_level", false, 0.0));
    }

    if (!doc.contains("duration_s")) config_fail("duration_s", "missing");
    cfg.duration_s = num_field(doc, "config", "duration_s", true, 0.0);
    cfg.rng_seed = static_cast<uint64_t>(num_field(doc, "config", "rng_seed", false, 0.0));

    if (doc.contains("topology")) {
        const auto& topo = doc["topology"];
        if (!topo.is_object()) config_fail("topology", "expected an object");
        if (topo.contains("edges")) {
            if (!topo["edges"].is_array()) config_fail("topology.edges", "expected an array");
            for (size_t i = 0; i < topo["edges"].size(); ++i) {
                const auto& e = topo["edges"][i];
                const std::string path = "topology.edges[" + std::to_string(i) + "]";
                if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                    config_fail(path, "expected [\"id\",\"id\"]");
                cfg.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
            }
        }
    }

    if (doc.contains("hashrate_steps")) {
        if (!doc["hashrate_steps"].is_array())
            config_fail("hashrate_steps", "expected an array");
        for (size_t i = 0; i < doc["hashrate_steps"].size(); ++i) {
            const auto& item = doc["hashrate_steps"][i];
            const std::string path = "hashrate_steps[" + std::to_string(i) + "]";
            if (!item.is_object()) config_fail(path, "expected an object");
            HashrateStep st;
            st.at_height = static_cast<uint64_t>(num_field(item, path, "at_height", true, 0.0));
            st.scale = num_field(item, path, "scale", true, 1.0);
            cfg.hashrate_steps.push_back(st);
        }
    }

    return cfg;
}

namespace {

struct Block {
    int64_t parent = -1;
    uint64_t height = 0;
    uint32_t level = 0;
    int miner = -1;
    double mine_time_ms = 0.0;
    double bgt_ms = 0.0;
    double hardness = 0.0;  // cumulative 1/p along the chain
    Digest256 hash{};
};

struct Event {
    double time_ms = 0.0;
    uint64_t seq = 0;
    int type = 0;  // 0 = mining draw done, 1 = block arrival
    int node = 0;
    uint64_t payload = 0;  // mining: epoch; arrival: block id
};

struct EventAfter {
    bool operator()(const Event& x, const Event& y) const {
        if (x.time_ms != y.time_ms) return x.time_ms > y.time_ms;
        return x.seq > y.seq;
    }
};

Digest256 block_identity(uint64_t id) {
    std::vector<uint8_t> buf;
    append_be64(buf, id);
    return keccak256(buf);
}

}  // namespace

SimReport run_simulation(const SimConfig& config) {
    config.validate();
    const int n_nodes = static_cast<int>(config.nodes.size());
    const double duration_ms = config.duration_s * 1000.0;
    Rng rng(config.rng_seed);

    std::vector<std::vector<int>> neighbors(n_nodes);
    if (config.edges.empty()) {
        for (int v = 0; v < n_nodes; ++v)
            for (int u = 0; u < n_nodes; ++u)
                if (u != v) neighbors[v].push_back(u);
    } else {
        std::unordered_map<std::string, int> index;
        for (int v = 0; v < n_nodes; ++v) index[config.nodes[v].id] = v;
        for (const auto& [a, b] : config.edges) {
            neighbors[index[a]].push_back(index[b]);
            neighbors[index[b]].push_back(index[a]);
        }
        for (auto& list : neighbors) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }

    std::map<std::pair<std::string, std::string>, std::pair<double, double>> latency;
    for (const auto& p : config.latency_pairs) {
        auto key = std::minmax(p.region_a, p.region_b);
        latency[{key.first, key.second}] = {p.mean_ms, p.jitter_ms};
    }
    auto sample_latency = [&](int from, int to) {
        auto key = std::minmax(config.nodes[from].region, config.nodes[to].region);
        auto it = latency.find({key.first, key.second});
        if (it == latency.end()) return 0.0;
        return rng.truncated_normal_nonneg(it->second.first, it->second.second);
    };

    std::vector<HashrateStep> steps = config.hashrate_steps;
    auto scale_for_height = [&](uint64_t h) {
        double s = 1.0;
        for (const auto& st : steps)
            if (st.at_height <= h) s = st.scale;
        return s;
    };

    std::vector<Block> blocks;
    {
        Block genesis;
        genesis.level = static_cast<uint32_t>(config.genesis_level);
        // In-window sentinel so height-1 blocks inherit the genesis level.
        genesis.bgt_ms = double(kBgtLowMs + kBgtHighMs) / 2.0;
        genesis.hash = block_identity(0);
        blocks.push_back(genesis);
    }
    std::vector<std::vector<double>> arrival;  // -1 = not yet received
    arrival.emplace_back(n_nodes, 0.0);        // genesis known everywhere at t = 0

    std::vector<int64_t> head(n_nodes, 0);
    std::vector<double> head_arrival(n_nodes, 0.0);
    std::vector<uint64_t> epoch(n_nodes, 0);

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue;
    uint64_t seq = 0;

    auto child_level = [&](const Block& parent) {
        return static_cast<uint32_t>(adjust_difficulty(
            parent.level, static_cast<uint64_t>(std::llround(parent.bgt_ms)),
            config.table.size()));
    };

    auto schedule_mining = [&](int v, double now) {
        const Block& h = blocks[head[v]];
        const double eff = config.nodes[v].hashrate * scale_for_height(h.height + 1);
        if (eff <= 0.0) return;
        const double p = config.table.at(child_level(h)).success_prob;
        const double solve_ms = double(rng.geometric_attempts(p)) / eff * 1000.0;
        queue.push({now + solve_ms, seq++, 0, v, epoch[v]});
    };

    auto adopt_if_better = [&](int v, int64_t b, double now) {
        const Block& cand = blocks[b];
        const Block& cur = blocks[head[v]];
        bool better = cand.hardness > cur.hardness;
        if (!better && b != head[v] && cand.hardness == cur.hardness &&
            now == head_arrival[v] && cand.hash < cur.hash)
            better = true;  // simultaneous arrival: lower hash wins
        if (!better) return;
        head[v] = b;
        head_arrival[v] = now;
        ++epoch[v];
        schedule_mining(v, now);
    };

    auto flood_from = [&](int v, int64_t b, double now) {
        for (int u : neighbors[v])
            queue.push({now + sample_latency(v, u), seq++, 1, u, uint64_t(b)});
    };

    for (int v = 0; v < n_nodes; ++v) schedule_mining(v, 0.0);

    while (!queue.empty()) {
        const Event ev = queue.top();
        queue.pop();
        if (ev.time_ms > duration_ms) break;

        if (ev.type == 0) {
            if (ev.payload != epoch[ev.node]) continue;  // head changed; draw restarted
            const int64_t parent = head[ev.node];
            Block nb;
            nb.parent = parent;
            nb.height = blocks[parent].height + 1;
            nb.level = child_level(blocks[parent]);
            nb.miner = ev.node;
            nb.mine_time_ms = ev.time_ms;
            nb.bgt_ms = ev.time_ms - blocks[parent].mine_time_ms;
            nb.hardness =
                blocks[parent].hardness + 1.0 / config.table.at(nb.level).success_prob;
            const int64_t id = static_cast<int64_t>(blocks.size());
            nb.hash = block_identity(uint64_t(id));
            blocks.push_back(nb);
            arrival.emplace_back(n_nodes, -1.0);
            arrival[id][ev.node] = ev.time_ms;
            adopt_if_better(ev.node, id, ev.time_ms);
            flood_from(ev.node, id, ev.time_ms);
        } else {
            const int64_t b = static_cast<int64_t>(ev.payload);
            if (arrival[b][ev.node] >= 0.0) continue;  // duplicate copy
            arrival[b][ev.node] = ev.time_ms;
            adopt_if_better(ev.node, b, ev.time_ms);
            flood_from(ev.node, b, ev.time_ms);
        }
    }

    // Canonical chain: global best by hardness, then mine time, then hash.
    int64_t best = 0;
    for (int64_t i = 1; i < static_cast<int64_t>(blocks.size()); ++i) {
        const Block& b = blocks[i];
        const Block& c = blocks[best];
        if (b.hardness > c.hardness ||
            (b.hardness == c.hardness &&
             (b.mine_time_ms < c.mine_time_ms ||
              (b.mine_time_ms == c.mine_time_ms && b.hash < c.hash))))
            best = i;
    }
    std::vector<char> canonical(blocks.size(), 0);
    for (int64_t i = best; i >= 0; i = blocks[i].parent) canonical[i] = 1;

    SimReport report;
    report.duration_s = config.duration_s;
    for (const auto& nd : config.nodes) report.configured_hashrate += nd.hashrate;

    for (size_t i = 1; i < blocks.size(); ++i) {
        const Block& b = blocks[i];
        BlockRecord rec;
        rec.height = b.height;
        rec.miner = config.nodes[b.miner].id;
        rec.bgt_ms = static_cast<uint64_t>(std::llround(b.bgt_ms));
        rec.level = b.level;
        double last = b.mine_time_ms;
        for (int v = 0; v < n_nodes; ++v)
            if (arrival[i][v] > last) last = arrival[i][v];
        rec.max_prop_ms = static_cast<uint64_t>(std::llround(last - b.mine_time_ms));
        rec.stale = !canonical[i];
        report.blocks.push_back(std::move(rec));
        ++report.total_mined;
        if (!canonical[i]) ++report.stale_blocks;
    }

    for (int64_t i = best; i > 0; i = blocks[i].parent)
        report.difficulty_series.push_back(blocks[i].level);
    std::reverse(report.difficulty_series.begin(), report.difficulty_series.end());

    return report;
}

PropagationBuckets propagation_stats(const SimReport& report) {
    PropagationBuckets buckets;
    uint64_t n = 0;
    for (const auto& b : report.blocks) {
        if (b.stale) continue;
        ++n;
        if (b.max_prop_ms <= 1000) buckets.le_1s += 1.0;
        else if (b.max_prop_ms <= 2000) buckets.s1_to_2 += 1.0;
        else if (b.max_prop_ms <= 4000) buckets.s2_to_4 += 1.0;
        else buckets.gt_4s += 1.0;
    }
    if (n == 0)
        fail(ErrorCode::param, "propagation_stats: report has no canonical blocks");
    buckets.le_1s *= 100.0 / double(n);
    buckets.s1_to_2 *= 100.0 / double(n);
    buckets.s2_to_4 *= 100.0 / double(n);
    buckets.gt_4s *= 100.0 / double(n);
    return buckets;
}

double fork_rate(const SimReport& report) {
    if (report.total_mined == 0)
        fail(ErrorCode::param, "fork_rate: report has no blocks");
    return double(report.stale_blocks) / double(report.total_mined);
}

std::string SimReport::to_csv() const {
    std::ostringstream out;
    out << "height,miner,bgt_ms,level,max_prop_ms,stale\n";
    for (const auto& b : blocks)
        out << b.height << ',' << b.miner << ',' << b.bgt_ms << ',' << b.level << ','
            << b.max_prop_ms << ',' << (b.stale ? 1 : 0) << '\n';
    return out.str();
}

std::string SimReport::summary_json() const {
    std::vector<uint64_t> bgts;
    for (const auto& b : blocks)
        if (!b.stale) bgts.push_back(b.bgt_ms);

    nlohmann::json doc;
    doc["total_mined"] = total_mined;
    doc["stale_blocks"] = stale_blocks;
    doc["canonical_blocks"] = total_mined - stale_blocks;
    doc["configured_hashrate"] = configured_hashrate;
    doc["duration_s"] = duration_s;
    if (!bgts.empty()) {
        double sum = 0.0;
        for (uint64_t v : bgts) sum += double(v);
        doc["mean_bgt_ms"] = sum / double(bgts.size());
        std::vector<uint64_t> sorted = bgts;
        std::sort(sorted.begin(), sorted.end());
        size_t mid = sorted.size() / 2;
        doc["median_bgt_ms"] = sorted.size() % 2 ? double(sorted[mid])
                                                 : (double(sorted[mid - 1]) + double(sorted[mid])) / 2.0;
        doc["fork_rate"] = double(stale_blocks) / double(total_mined);
        PropagationBuckets pb = propagation_stats(*this);
        doc["propagation_pct"] = {{"le_1s", pb.le_1s},
                                  {"s1_to_2", pb.s1_to_2},
                                  {"s2_to_4", pb.s2_to_4},
                                  {"gt_4s", pb.gt_4s}};
    }
    if (!difficulty_series.empty()) doc["final_level"] = difficulty_series.back();
    return doc.dump(2);
}

}  // namespace eccpow
