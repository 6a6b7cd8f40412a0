#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "eccpow/bitvec.hpp"
#include "eccpow/ldpc.hpp"

namespace eccpow {

struct DecoderConfig {
    uint32_t max_iterations = 20;
    double crossover = 0.45;  // assumed channel error rate, in (0, 0.5)
    // Accept a zero-syndrome word only when its Hamming weight lies in
    // [first, second]. Unset = any weight.
    std::optional<std::pair<uint32_t, uint32_t>> weight_window;

    void validate() const;  // throws ErrorCode::param on violation
};

struct DecodeOutcome {
    BitVector codeword;
    bool converged = false;
    uint32_t iterations_used = 0;
};

// Min-sum message passing over the Tanner graph of h, seeded with hard-input
// LLRs L_j = (1-2*r_j)*ln((1-eps)/eps). Messages are integers scaled by 2^8
// and clamped to +/-64 LLR units, check nodes then variable nodes in
// ascending order, so the result is bit-identical on every platform.
// Converges (early-exits) when the running hard decision has zero syndrome
// and, if set, a Hamming weight inside the window. Iteration 0 is the
// channel hard decision itself, i.e. r.
DecodeOutcome decode(const ParityCheckMatrix& h, const BitVector& r,
                     const DecoderConfig& cfg);

// Monte-Carlo fraction of decoding successes over `trials` independent
// puzzle instances. Trial t derives its PCM seed, seal input and nonce from
// keccak256(rng_seed_be8 || t_be8), so the estimate depends only on
// (params, cfg, trials, rng_seed) — never on thread count.
double estimate_success_probability(const LdpcParams& params,
                                    const DecoderConfig& cfg, uint64_t trials,
                                    uint64_t rng_seed, unsigned threads = 1);

}  // namespace eccpow
