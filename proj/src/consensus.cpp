#include "eccpow/consensus.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "eccpow/bytes.hpp"
#include "eccpow/errors.hpp"

namespace eccpow {

void DifficultyTable::validate() const {
    if (levels.empty())
        fail(ErrorCode::config, "difficulty table is empty");
    double prev = 1.0;
    for (size_t i = 0; i < levels.size(); ++i) {
        const auto& lv = levels[i];
        lv.params.validate();
        lv.decoder.validate();
        if (!(lv.success_prob > 0.0 && lv.success_prob < 1.0))
            fail(ErrorCode::config, "success_prob must lie in (0,1) at level " + std::to_string(i));
        if (i > 0 && !(lv.success_prob < prev))
            fail(ErrorCode::config, "success_prob must strictly decrease across levels");
        prev = lv.success_prob;
    }
}

const DifficultyLevel& DifficultyTable::at(size_t i) const {
    if (i >= levels.size())
        fail(ErrorCode::param, "difficulty level index out of range");
    return levels[i];
}

DifficultyTable DifficultyTable::builtin() {
    // success_prob measured once by estimate_success_probability
    // (10^6 trials each, rng_seed 1, defaults eps = 0.45, 20 iterations)
    // and frozen here; see tests/test_consensus.cpp for the re-measurement
    // consistency check.
    DifficultyTable t;
    auto add = [&t](uint32_t n, double p) {
        DifficultyLevel lv;
        lv.params = {n, 3, 4};
        lv.decoder = {};
        lv.success_prob = p;
        t.levels.push_back(lv);
    };
    add(16, 0.256585);
    add(20, 0.093170);
    add(24, 0.034932);
    add(28, 0.013799);
    add(32, 0.005823);
    add(36, 0.002571);
    return t;
}

DifficultyTable DifficultyTable::from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::config, std::string("difficulty table JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("levels") || !doc["levels"].is_array())
        fail(ErrorCode::config, "difficulty table JSON: expected object with \"levels\" array");

    DifficultyTable t;
    for (const auto& item : doc["levels"]) {
        if (!item.is_object())
            fail(ErrorCode::config, "difficulty table JSON: level entries must be objects");
        DifficultyLevel lv;
        lv.decoder = {};
        for (const auto& [key, value] : item.items()) {
            if (key == "n") lv.params.n = value.get<uint32_t>();
            else if (key == "wc") lv.params.wc = value.get<uint32_t>();
            else if (key == "wr") lv.params.wr = value.get<uint32_t>();
            else if (key == "success_prob") lv.success_prob = value.get<double>();
            else if (key == "max_iterations") lv.decoder.max_iterations = value.get<uint32_t>();
            else if (key == "crossover") lv.decoder.crossover = value.get<double>();
            else fail(ErrorCode::config, "difficulty table JSON: unknown key \"" + key + "\"");
        }
        t.levels.push_back(lv);
    }
    t.validate();
    return t;
}

std::string DifficultyTable::to_json() const {
    nlohmann::json levels_json = nlohmann::json::array();
    for (const auto& lv : levels) {
        levels_json.push_back({{"n", lv.params.n},
                               {"wc", lv.params.wc},
                               {"wr", lv.params.wr},
                               {"success_prob", lv.success_prob},
                               {"max_iterations", lv.decoder.max_iterations},
                               {"crossover", lv.decoder.crossover}});
    }
    return nlohmann::json{{"levels", levels_json}}.dump(2);
}

std::vector<uint8_t> encode_unsealed(const BlockHeader& header) {
    std::vector<uint8_t> out(header.parent_hash.begin(), header.parent_hash.end());
    append_be64(out, header.number);
    append_be64(out, header.timestamp_ms);
    append_be32(out, header.difficulty_level);
    return out;
}

std::vector<uint8_t> encode_sealed(const BlockHeader& header) {
    std::vector<uint8_t> out = encode_unsealed(header);
    append_be64(out, header.nonce);
    out.insert(out.end(), header.codeword_digest.begin(), header.codeword_digest.end());
    return out;
}

BlockHeader decode_sealed(const std::vector<uint8_t>& bytes) {
    if (bytes.size() != 92)
        fail(ErrorCode::param, "sealed header must be 92 bytes");
    BlockHeader h;
    std::copy(bytes.begin(), bytes.begin() + 32, h.parent_hash.begin());
    h.number = read_be64(bytes.data() + 32);
    h.timestamp_ms = read_be64(bytes.data() + 40);
    h.difficulty_level = read_be32(bytes.data() + 48);
    h.nonce = read_be64(bytes.data() + 52);
    std::copy(bytes.begin() + 60, bytes.begin() + 92, h.codeword_digest.begin());
    return h;
}

std::string sealed_hex_line(const BlockHeader& header) {
    return to_hex(encode_sealed(header));
}

BlockHeader parse_sealed_hex_line(const std::string& line) {
    return decode_sealed(from_hex(line));
}

Digest256 seal_hash(const BlockHeader& header) {
    return keccak256(encode_unsealed(header));
}

std::vector<uint8_t> pack_codeword(const BitVector& c) {
    return c.packed_bytes_msb();
}

namespace {

std::optional<BlockHeader> try_nonce(const BlockHeader& tmpl, const DifficultyLevel& level,
                                     const ParityCheckMatrix& h, const Digest256& sh,
                                     Nonce nonce) {
    BitVector r = hash_vector(sh, nonce, level.params.n);
    DecodeOutcome out = decode(h, r, level.decoder);
    if (!out.converged) return std::nullopt;
    BlockHeader sealed = tmpl;
    sealed.nonce = nonce;
    sealed.codeword_digest = keccak256(pack_codeword(out.codeword));
    return sealed;
}

}  // namespace

std::optional<MineResult> mine(const BlockHeader& tmpl, const DifficultyLevel& level,
                               Nonce nonce_start, uint64_t attempt_budget,
                               unsigned threads) {
    level.params.validate();
    level.decoder.validate();
    if (attempt_budget == 0) return std::nullopt;
    if (threads < 1) threads = 1;

    const ParityCheckMatrix h = generate_pcm(tmpl.parent_hash, level.params);
    const Digest256 sh = seal_hash(tmpl);

    if (threads == 1) {
        for (uint64_t i = 0; i < attempt_budget; ++i) {
            Nonce nonce = nonce_start + i;
            if (auto sealed = try_nonce(tmpl, level, h, sh, nonce))
                return MineResult{*sealed, i + 1};
        }
        return std::nullopt;
    }

    // Workers claim fixed-size chunks of the nonce range; the lowest
    // converging nonce found before shutdown wins.
    constexpr uint64_t kChunk = 64;
    std::atomic<uint64_t> next_chunk{0};
    std::atomic<bool> found{false};
    std::mutex best_mutex;
    std::optional<BlockHeader> best;
    uint64_t best_offset = 0;

    const uint64_t n_chunks = (attempt_budget + kChunk - 1) / kChunk;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                uint64_t chunk = next_chunk.fetch_add(1, std::memory_order_relaxed);
                if (chunk >= n_chunks || found.load(std::memory_order_relaxed)) return;
                uint64_t begin = chunk * kChunk;
                uint64_t end = std::min(begin + kChunk, attempt_budget);
                for (uint64_t i = begin; i < end; ++i) {
                    if (auto sealed = try_nonce(tmpl, level, h, sh, nonce_start + i)) {
                        std::lock_guard<std::mutex> lock(best_mutex);
                        if (!best || i < best_offset) {
                            best = *sealed;
                            best_offset = i;
                        }
                        found.store(true, std::memory_order_relaxed);
                        return;
                    }
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (!best) return std::nullopt;
    return MineResult{*best, best_offset + 1};
}

bool verify_seal(const BlockHeader& header, const DifficultyLevel& level) {
    try {
        const ParityCheckMatrix h = generate_pcm(header.parent_hash, level.params);
        const Digest256 sh = seal_hash(header);  // nonce and digest are outside the preimage
        BitVector r = hash_vector(sh, header.nonce, level.params.n);
        DecodeOutcome out = decode(h, r, level.decoder);
        if (!out.converged) return false;
        if (!is_codeword(h, out.codeword)) return false;
        return keccak256(pack_codeword(out.codeword)) == header.codeword_digest;
    } catch (const Error&) {
        return false;
    }
}

size_t adjust_difficulty(size_t level_index, uint64_t parent_bgt_ms, size_t table_size) {
    if (table_size == 0)
        fail(ErrorCode::param, "adjust_difficulty: empty table");
    if (level_index >= table_size)
        fail(ErrorCode::param, "adjust_difficulty: level index out of range");
    if (parent_bgt_ms < kBgtLowMs)
        return level_index + 1 < table_size ? level_index + 1 : level_index;
    if (parent_bgt_ms > kBgtHighMs)
        return level_index > 0 ? level_index - 1 : 0;
    return level_index;
}

double expected_attempts(const DifficultyLevel& level) {
    if (!(level.success_prob > 0.0 && level.success_prob <= 1.0))
        fail(ErrorCode::param, "expected_attempts: success_prob must lie in (0,1]");
    return 1.0 / level.success_prob;
}

}  // namespace eccpow
