#include "eccpow/decoder.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "eccpow/bytes.hpp"
#include "eccpow/errors.hpp"
#include "eccpow/hash_vector.hpp"

namespace eccpow {

namespace {

constexpr int32_t kScale = 256;          // fixed-point LLR scale
constexpr int32_t kClamp = 64 * kScale;  // +/-64 LLR units

int32_t clamp_msg(int64_t v) {
    if (v > kClamp) return kClamp;
    if (v < -kClamp) return -kClamp;
    return static_cast<int32_t>(v);
}

bool weight_ok(const DecoderConfig& cfg, const BitVector& c) {
    if (!cfg.weight_window) return true;
    size_t w = c.popcount();
    return w >= cfg.weight_window->first && w <= cfg.weight_window->second;
}

}  // namespace

void DecoderConfig::validate() const {
    if (max_iterations < 1)
        fail(ErrorCode::param, "max_iterations must be >= 1");
    if (!(crossover > 0.0 && crossover < 0.5))
        fail(ErrorCode::param, "crossover must lie in (0, 0.5)");
    if (weight_window && weight_window->first > weight_window->second)
        fail(ErrorCode::param, "weight window low bound exceeds high bound");
}

DecodeOutcome decode(const ParityCheckMatrix& h, const BitVector& r,
                     const DecoderConfig& cfg) {
    cfg.validate();
    const uint32_t n = h.n();
    const uint32_t m = h.m();
    if (r.size() != n)
        fail(ErrorCode::dimension, "decode: hash vector length does not match code length");
    if (cfg.weight_window && cfg.weight_window->second > n)
        fail(ErrorCode::param, "weight window exceeds code length");

    // Channel LLRs: one quantized magnitude, sign from the received bit.
    const int32_t chan_mag =
        static_cast<int32_t>(std::llround(std::log((1.0 - cfg.crossover) / cfg.crossover) * kScale));
    std::vector<int32_t> channel(n);
    for (uint32_t j = 0; j < n; ++j)
        channel[j] = r.get(j) ? -chan_mag : chan_mag;

    // Iteration 0: the channel hard decision is r itself.
    DecodeOutcome out;
    out.codeword = r;
    if (syndrome(h, r).all_zero() && weight_ok(cfg, r)) {
        out.converged = true;
        out.iterations_used = 0;
        return out;
    }

    // Edge storage. Edge e of check i is its e-th neighbour in row order.
    std::vector<uint32_t> row_offset(m + 1, 0);
    for (uint32_t i = 0; i < m; ++i)
        row_offset[i + 1] = row_offset[i] + static_cast<uint32_t>(h.rows[i].size());
    const uint32_t n_edges = row_offset[m];

    std::vector<uint32_t> edge_var(n_edges);
    std::vector<std::vector<uint32_t>> var_edges(n);  // edges touching each variable
    for (uint32_t i = 0; i < m; ++i)
        for (size_t k = 0; k < h.rows[i].size(); ++k) {
            uint32_t e = row_offset[i] + static_cast<uint32_t>(k);
            edge_var[e] = h.rows[i][k];
            var_edges[h.rows[i][k]].push_back(e);
        }

    std::vector<int32_t> v2c(n_edges);
    std::vector<int32_t> c2v(n_edges, 0);
    for (uint32_t e = 0; e < n_edges; ++e) v2c[e] = channel[edge_var[e]];

    std::vector<int32_t> total(n);
    BitVector hard(n);

    for (uint32_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        // Check pass: sign product and two smallest magnitudes per row.
        for (uint32_t i = 0; i < m; ++i) {
            const uint32_t begin = row_offset[i], end = row_offset[i + 1];
            int sign_all = 1;
            int32_t min1 = kClamp + 1, min2 = kClamp + 1;
            uint32_t min1_edge = begin;
            for (uint32_t e = begin; e < end; ++e) {
                int32_t v = v2c[e];
                if (v < 0) sign_all = -sign_all;
                int32_t mag = v < 0 ? -v : v;
                if (mag < min1) {
                    min2 = min1;
                    min1 = mag;
                    min1_edge = e;
                } else if (mag < min2) {
                    min2 = mag;
                }
            }
            for (uint32_t e = begin; e < end; ++e) {
                int sign_out = v2c[e] < 0 ? -sign_all : sign_all;
                int32_t mag = e == min1_edge ? min2 : min1;
                c2v[e] = clamp_msg(int64_t(sign_out) * mag);
            }
        }

        // Variable pass: totals, hard decision, then extrinsic replies.
        for (uint32_t j = 0; j < n; ++j) {
            int64_t sum = channel[j];
            for (uint32_t e : var_edges[j]) sum += c2v[e];
            total[j] = clamp_msg(sum);
            hard.set(j, total[j] < 0);
            for (uint32_t e : var_edges[j]) c2v[e] = clamp_msg(int64_t(total[j]) - c2v[e]);
        }
        // c2v now holds next-round v2c values; swap the roles.
        std::swap(v2c, c2v);

        if (syndrome(h, hard).all_zero() && weight_ok(cfg, hard)) {
            out.codeword = hard;
            out.converged = true;
            out.iterations_used = iter;
            return out;
        }
    }

    out.codeword = hard;
    out.converged = false;
    out.iterations_used = cfg.max_iterations;
    return out;
}

double estimate_success_probability(const LdpcParams& params,
                                    const DecoderConfig& cfg, uint64_t trials,
                                    uint64_t rng_seed, unsigned threads) {
    params.validate();
    cfg.validate();
    if (trials < 1)
        fail(ErrorCode::param, "trials must be >= 1");
    if (threads < 1) threads = 1;

    auto run_trial = [&](uint64_t t) -> bool {
        std::vector<uint8_t> preimage;
        append_be64(preimage, rng_seed);
        append_be64(preimage, t);
        Digest256 d = keccak256(preimage);
        Digest256 dd = keccak256(std::span<const uint8_t>(d.data(), d.size()));
        Nonce nonce = read_be64(dd.data());
        ParityCheckMatrix h = generate_pcm(d, params);
        BitVector r = hash_vector(d, nonce, params.n);
        return decode(h, r, cfg).converged;
    };

    if (threads == 1 || trials < 2 * threads) {
        uint64_t successes = 0;
        for (uint64_t t = 0; t < trials; ++t) successes += run_trial(t) ? 1 : 0;
        return double(successes) / double(trials);
    }

    std::atomic<uint64_t> next{0};
    std::atomic<uint64_t> successes{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            uint64_t local = 0;
            for (;;) {
                uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
                if (t >= trials) break;
                if (run_trial(t)) ++local;
            }
            successes.fetch_add(local, std::memory_order_relaxed);
        });
    }
    for (auto& th : pool) th.join();
    return double(successes.load()) / double(trials);
}

}  // namespace eccpow
