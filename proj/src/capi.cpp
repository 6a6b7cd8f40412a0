#include "eccpow.h"

#include <cstring>
#include <new>
#include <string>

#include "eccpow/consensus.hpp"
#include "eccpow/decoder.hpp"
#include "eccpow/errors.hpp"
#include "eccpow/hash_vector.hpp"
#include "eccpow/keccak.hpp"
#include "eccpow/ldpc.hpp"
#include "eccpow/rng.hpp"
#include "eccpow/simnet.hpp"
#include "eccpow/stats.hpp"

struct eccpow_pcm {
    eccpow::ParityCheckMatrix matrix;
};
struct eccpow_table {
    eccpow::DifficultyTable table;
};
struct eccpow_sim_report {
    eccpow::SimReport report;
};

namespace {

thread_local std::string g_last_error;

int status_of(const eccpow::Error& e) {
    switch (e.code()) {
        case eccpow::ErrorCode::param: return ECCPOW_ERR_PARAM;
        case eccpow::ErrorCode::dimension: return ECCPOW_ERR_DIMENSION;
        case eccpow::ErrorCode::degenerate: return ECCPOW_ERR_DEGENERATE;
        case eccpow::ErrorCode::domain: return ECCPOW_ERR_DOMAIN;
        case eccpow::ErrorCode::config: return ECCPOW_ERR_CONFIG;
    }
    return ECCPOW_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return ECCPOW_OK;
    } catch (const eccpow::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ECCPOW_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return ECCPOW_ERR_INTERNAL;
    }
}

int require(bool ok, const char* what) {
    if (!ok) {
        g_last_error = what;
        return ECCPOW_ERR_PARAM;
    }
    return ECCPOW_OK;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

eccpow::Digest256 digest_from(const uint8_t bytes[32]) {
    eccpow::Digest256 d;
    std::memcpy(d.data(), bytes, 32);
    return d;
}

}  // namespace

extern "C" {

const char* eccpow_version(void) { return "1.0.0"; }

const char* eccpow_last_error(void) { return g_last_error.c_str(); }

void eccpow_string_free(char* s) { delete[] s; }

int eccpow_keccak256(const uint8_t* data, size_t len, uint8_t out[32]) {
    if (int rc = require(out && (data || len == 0), "null pointer")) return rc;
    return guarded([&] {
        eccpow::Digest256 d = eccpow::keccak256(std::span<const uint8_t>(data, len));
        std::memcpy(out, d.data(), 32);
    });
}

int eccpow_hash_vector(const uint8_t seal_input[32], uint64_t nonce, uint32_t n,
                       uint8_t* out_packed) {
    if (int rc = require(seal_input && out_packed, "null pointer")) return rc;
    return guarded([&] {
        eccpow::BitVector r = eccpow::hash_vector(digest_from(seal_input), nonce, n);
        auto bytes = r.packed_bytes_msb();
        std::memcpy(out_packed, bytes.data(), bytes.size());
    });
}

int eccpow_pcm_generate(const uint8_t seed[32], uint32_t n, uint32_t wc, uint32_t wr,
                        eccpow_pcm** out) {
    if (int rc = require(seed && out, "null pointer")) return rc;
    *out = nullptr;
    return guarded([&] {
        eccpow::LdpcParams params{n, wc, wr};
        auto handle = new eccpow_pcm{eccpow::generate_pcm(digest_from(seed), params)};
        *out = handle;
    });
}

void eccpow_pcm_free(eccpow_pcm* pcm) { delete pcm; }

int eccpow_pcm_dims(const eccpow_pcm* pcm, uint32_t* n_out, uint32_t* m_out) {
    if (int rc = require(pcm != nullptr, "null pcm")) return rc;
    if (n_out) *n_out = pcm->matrix.n();
    if (m_out) *m_out = pcm->matrix.m();
    return ECCPOW_OK;
}

int eccpow_pcm_dump(const eccpow_pcm* pcm, char** text_out) {
    if (int rc = require(pcm && text_out, "null pointer")) return rc;
    return guarded([&] { *text_out = dup_string(eccpow::dump(pcm->matrix)); });
}

int eccpow_decode(const eccpow_pcm* pcm, const uint8_t* r_packed,
                  uint32_t max_iterations, double crossover,
                  uint8_t* codeword_out, int* converged_out, uint32_t* iterations_out) {
    if (int rc = require(pcm && r_packed && codeword_out && converged_out, "null pointer"))
        return rc;
    return guarded([&] {
        const uint32_t n = pcm->matrix.n();
        eccpow::BitVector r =
            eccpow::BitVector::from_packed_bytes_msb(r_packed, n);
        eccpow::DecoderConfig cfg;
        cfg.max_iterations = max_iterations;
        cfg.crossover = crossover;
        eccpow::DecodeOutcome out = eccpow::decode(pcm->matrix, r, cfg);
        auto bytes = out.codeword.packed_bytes_msb();
        std::memcpy(codeword_out, bytes.data(), bytes.size());
        *converged_out = out.converged ? 1 : 0;
        if (iterations_out) *iterations_out = out.iterations_used;
    });
}

int eccpow_estimate_success_probability(uint32_t n, uint32_t wc, uint32_t wr,
                                        uint32_t max_iterations, double crossover,
                                        uint64_t trials, uint64_t rng_seed,
                                        unsigned threads, double* prob_out) {
    if (int rc = require(prob_out != nullptr, "null pointer")) return rc;
    return guarded([&] {
        eccpow::DecoderConfig cfg;
        cfg.max_iterations = max_iterations;
        cfg.crossover = crossover;
        *prob_out = eccpow::estimate_success_probability({n, wc, wr}, cfg, trials,
                                                         rng_seed, threads);
    });
}

int eccpow_table_builtin(eccpow_table** out) {
    if (int rc = require(out != nullptr, "null pointer")) return rc;
    *out = nullptr;
    return guarded([&] { *out = new eccpow_table{eccpow::DifficultyTable::builtin()}; });
}

int eccpow_table_from_json(const char* json_text, eccpow_table** out) {
    if (int rc = require(json_text && out, "null pointer")) return rc;
    *out = nullptr;
    return guarded(
        [&] { *out = new eccpow_table{eccpow::DifficultyTable::from_json(json_text)}; });
}

int eccpow_table_to_json(const eccpow_table* table, char** text_out) {
    if (int rc = require(table && text_out, "null pointer")) return rc;
    return guarded([&] { *text_out = dup_string(table->table.to_json()); });
}

void eccpow_table_free(eccpow_table* table) { delete table; }

int eccpow_table_size(const eccpow_table* table, size_t* size_out) {
    if (int rc = require(table && size_out, "null pointer")) return rc;
    *size_out = table->table.size();
    return ECCPOW_OK;
}

int eccpow_table_level(const eccpow_table* table, size_t index, uint32_t* n_out,
                       uint32_t* wc_out, uint32_t* wr_out, double* success_prob_out) {
    if (int rc = require(table != nullptr, "null table")) return rc;
    return guarded([&] {
        const eccpow::DifficultyLevel& lv = table->table.at(index);
        if (n_out) *n_out = lv.params.n;
        if (wc_out) *wc_out = lv.params.wc;
        if (wr_out) *wr_out = lv.params.wr;
        if (success_prob_out) *success_prob_out = lv.success_prob;
    });
}

int eccpow_adjust_difficulty(size_t level_index, uint64_t parent_bgt_ms,
                             size_t table_size, size_t* next_index_out) {
    if (int rc = require(next_index_out != nullptr, "null pointer")) return rc;
    return guarded([&] {
        *next_index_out = eccpow::adjust_difficulty(level_index, parent_bgt_ms, table_size);
    });
}

int eccpow_seal_hash(const uint8_t parent_hash[32], uint64_t number,
                     uint64_t timestamp_ms, uint32_t level_index, uint8_t out[32]) {
    if (int rc = require(parent_hash && out, "null pointer")) return rc;
    return guarded([&] {
        eccpow::BlockHeader h;
        h.parent_hash = digest_from(parent_hash);
        h.number = number;
        h.timestamp_ms = timestamp_ms;
        h.difficulty_level = level_index;
        eccpow::Digest256 d = eccpow::seal_hash(h);
        std::memcpy(out, d.data(), 32);
    });
}

int eccpow_mine(const uint8_t parent_hash[32], uint64_t number, uint64_t timestamp_ms,
                uint32_t level_index, const eccpow_table* table, uint64_t nonce_start,
                uint64_t attempt_budget, unsigned threads, int* found_out,
                uint64_t* nonce_out, uint8_t codeword_digest_out[32],
                uint64_t* attempts_out) {
    if (int rc = require(parent_hash && table && found_out, "null pointer")) return rc;
    *found_out = 0;
    return guarded([&] {
        eccpow::BlockHeader tmpl;
        tmpl.parent_hash = digest_from(parent_hash);
        tmpl.number = number;
        tmpl.timestamp_ms = timestamp_ms;
        tmpl.difficulty_level = level_index;
        auto result = eccpow::mine(tmpl, table->table.at(level_index), nonce_start,
                                   attempt_budget, threads);
        if (!result) return;
        *found_out = 1;
        if (nonce_out) *nonce_out = result->header.nonce;
        if (codeword_digest_out)
            std::memcpy(codeword_digest_out, result->header.codeword_digest.data(), 32);
        if (attempts_out) *attempts_out = result->attempts;
    });
}

int eccpow_verify(const uint8_t parent_hash[32], uint64_t number, uint64_t timestamp_ms,
                  uint32_t level_index, uint64_t nonce,
                  const uint8_t codeword_digest[32], const eccpow_table* table,
                  int* valid_out) {
    if (int rc = require(parent_hash && codeword_digest && table && valid_out, "null pointer"))
        return rc;
    return guarded([&] {
        eccpow::BlockHeader h;
        h.parent_hash = digest_from(parent_hash);
        h.number = number;
        h.timestamp_ms = timestamp_ms;
        h.difficulty_level = level_index;
        h.nonce = nonce;
        h.codeword_digest = digest_from(codeword_digest);
        *valid_out = eccpow::verify_seal(h, table->table.at(level_index)) ? 1 : 0;
    });
}

int eccpow_sim_run_json(const char* config_json, const eccpow_table* table,
                        eccpow_sim_report** out) {
    if (int rc = require(config_json && out, "null pointer")) return rc;
    *out = nullptr;
    return guarded([&] {
        eccpow::SimConfig cfg = eccpow::SimConfig::from_json(config_json);
        if (table) cfg.table = table->table;
        *out = new eccpow_sim_report{eccpow::run_simulation(cfg)};
    });
}

void eccpow_sim_report_free(eccpow_sim_report* report) { delete report; }

int eccpow_sim_report_csv(const eccpow_sim_report* report, char** text_out) {
    if (int rc = require(report && text_out, "null pointer")) return rc;
    return guarded([&] { *text_out = dup_string(report->report.to_csv()); });
}

int eccpow_sim_report_summary(const eccpow_sim_report* report, char** json_out) {
    if (int rc = require(report && json_out, "null pointer")) return rc;
    return guarded([&] { *json_out = dup_string(report->report.summary_json()); });
}

int eccpow_fit_exponential(const double* values, size_t count, double* lambda_out) {
    if (int rc = require(lambda_out && (values || count == 0), "null pointer")) return rc;
    return guarded([&] {
        std::vector<double> v(values, values + count);
        *lambda_out = eccpow::stats::fit_exponential_mean(v);
    });
}

int eccpow_histogram(const double* values, size_t count, size_t bins,
                     double* edges_out, uint64_t* counts_out) {
    if (int rc = require(edges_out && counts_out && (values || count == 0), "null pointer"))
        return rc;
    return guarded([&] {
        std::vector<double> v(values, values + count);
        eccpow::stats::Histogram h = eccpow::stats::histogram10(v, bins);
        std::memcpy(edges_out, h.edges.data(), h.edges.size() * sizeof(double));
        std::memcpy(counts_out, h.counts.data(), h.counts.size() * sizeof(uint64_t));
    });
}

int eccpow_expected_frequencies(double lambda, const double* edges, size_t n_edges,
                                uint64_t total, double* out) {
    if (int rc = require(out && (edges || n_edges == 0), "null pointer")) return rc;
    return guarded([&] {
        std::vector<double> e(edges, edges + n_edges);
        auto counts = eccpow::stats::expected_frequencies(lambda, e, total);
        std::memcpy(out, counts.data(), counts.size() * sizeof(double));
    });
}

int eccpow_ad_two_sample(const double* f, size_t f_count, const double* g,
                         size_t g_count, double* a2_out, double* standardized_out,
                         char* p_bound_out, size_t p_bound_cap) {
    if (int rc = require((f || f_count == 0) && (g || g_count == 0), "null pointer"))
        return rc;
    return guarded([&] {
        std::vector<double> fv(f, f + f_count), gv(g, g + g_count);
        eccpow::stats::AdResult r = eccpow::stats::ad_two_sample(fv, gv);
        if (a2_out) *a2_out = r.a2;
        if (standardized_out) *standardized_out = r.standardized;
        if (p_bound_out && p_bound_cap > 0) {
            std::string s = r.p_bound.str();
            size_t len = s.size() < p_bound_cap - 1 ? s.size() : p_bound_cap - 1;
            std::memcpy(p_bound_out, s.data(), len);
            p_bound_out[len] = '\0';
        }
    });
}

int eccpow_exponential_draws(uint64_t rng_seed, double lambda, size_t count,
                             double* out) {
    if (int rc = require(out || count == 0, "null pointer")) return rc;
    if (int rc = require(lambda > 0.0, "lambda must be positive")) return rc;
    return guarded([&] {
        eccpow::Rng rng(rng_seed);
        for (size_t i = 0; i < count; ++i) out[i] = rng.exponential(lambda);
    });
}

}  // extern "C"
