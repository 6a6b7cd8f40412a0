#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eccpow/decoder.hpp"
#include "eccpow/hash_vector.hpp"
#include "eccpow/keccak.hpp"
#include "eccpow/ldpc.hpp"

namespace eccpow {

struct BlockHeader {
    Digest256 parent_hash{};
    uint64_t number = 0;
    uint64_t timestamp_ms = 0;
    uint32_t difficulty_level = 0;
    Nonce nonce = 0;
    Digest256 codeword_digest{};
};

struct DifficultyLevel {
    LdpcParams params;
    DecoderConfig decoder;
    double success_prob = 0.0;  // expected per-nonce decoding success rate
};

// Ordered difficulty ladder: level index up = harder (lower success_prob).
struct DifficultyTable {
    std::vector<DifficultyLevel> levels;

    void validate() const;  // non-empty, probabilities in (0,1) strictly decreasing
    size_t size() const { return levels.size(); }
    const DifficultyLevel& at(size_t i) const;

    // Compiled-in default ladder (n = 16..36 step 4, wc = 3, wr = 4).
    static DifficultyTable builtin();
    // Parse {"levels":[{"n","wc","wr","success_prob",...}]}; unknown keys rejected.
    static DifficultyTable from_json(const std::string& json_text);
    std::string to_json() const;
};

// Canonical fixed-width big-endian encodings. The unsealed form (52 bytes:
// parent_hash || number || timestamp_ms || difficulty_level) is the seal_hash
// preimage; the sealed form appends nonce || codeword_digest (92 bytes total)
// and is what fixture files store, hex, one header per line.
std::vector<uint8_t> encode_unsealed(const BlockHeader& header);
std::vector<uint8_t> encode_sealed(const BlockHeader& header);
BlockHeader decode_sealed(const std::vector<uint8_t>& bytes);
std::string sealed_hex_line(const BlockHeader& header);
BlockHeader parse_sealed_hex_line(const std::string& line);

Digest256 seal_hash(const BlockHeader& header);

// Codeword bytes fed to keccak256 for the seal digest: bits packed MSB-first
// into ceil(n/8) bytes, zero tail padding.
std::vector<uint8_t> pack_codeword(const BitVector& c);

struct MineResult {
    BlockHeader header;       // sealed: nonce and codeword_digest filled
    uint64_t attempts = 0;    // nonces consumed including the winner
};

// Sequential nonce scan from nonce_start, at most attempt_budget nonces.
// With threads > 1 the scan is chunked across workers and the lowest
// converging nonce among candidates found before shutdown wins; only the
// single-threaded scan promises the exact sequential winner.
std::optional<MineResult> mine(const BlockHeader& tmpl, const DifficultyLevel& level,
                               Nonce nonce_start, uint64_t attempt_budget,
                               unsigned threads = 1);

bool verify_seal(const BlockHeader& header, const DifficultyLevel& level);

// One step per block: fast block -> harder, slow block -> easier.
size_t adjust_difficulty(size_t level_index, uint64_t parent_bgt_ms, size_t table_size);

constexpr uint64_t kBgtLowMs = 9000;
constexpr uint64_t kBgtHighMs = 18000;

double expected_attempts(const DifficultyLevel& level);

}  // namespace eccpow
