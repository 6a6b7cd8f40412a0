/* eccpow — C interface to the ECC proof-of-work engine.
 *
 * Every function returns ECCPOW_OK (0) or a nonzero status; on failure
 * eccpow_last_error() returns a thread-local message describing the fault.
 * Strings and handles returned through out-parameters are owned by the
 * caller and released with the matching *_free function.
 */
#ifndef ECCPOW_H
#define ECCPOW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    ECCPOW_OK = 0,
    ECCPOW_ERR_PARAM = 1,      /* invalid argument */
    ECCPOW_ERR_DIMENSION = 2,  /* size mismatch */
    ECCPOW_ERR_DEGENERATE = 3, /* input admits no answer (e.g. constant sample) */
    ECCPOW_ERR_DOMAIN = 4,     /* value outside a function's domain */
    ECCPOW_ERR_CONFIG = 5,     /* malformed configuration */
    ECCPOW_ERR_INTERNAL = 6
};

const char* eccpow_version(void);
const char* eccpow_last_error(void);

void eccpow_string_free(char* s);

/* ---- hashing ---------------------------------------------------------- */

/* Original Keccak-256 (pre-NIST padding, as used by Ethereum). */
int eccpow_keccak256(const uint8_t* data, size_t len, uint8_t out[32]);

/* Length-n hash vector for (seal_input, nonce), packed MSB-first into
 * ceil(n/8) bytes written to out_packed. */
int eccpow_hash_vector(const uint8_t seal_input[32], uint64_t nonce, uint32_t n,
                       uint8_t* out_packed);

/* ---- parity-check matrices -------------------------------------------- */

typedef struct eccpow_pcm eccpow_pcm;

int eccpow_pcm_generate(const uint8_t seed[32], uint32_t n, uint32_t wc, uint32_t wr,
                        eccpow_pcm** out);
void eccpow_pcm_free(eccpow_pcm* pcm);
int eccpow_pcm_dims(const eccpow_pcm* pcm, uint32_t* n_out, uint32_t* m_out);
/* Text dump: "n wc wr m" then one ascending index row per matrix row. */
int eccpow_pcm_dump(const eccpow_pcm* pcm, char** text_out);

/* Min-sum decode of the packed n-bit vector r against pcm. converged_out is
 * 1/0; the hard decision is packed into codeword_out (ceil(n/8) bytes). */
int eccpow_decode(const eccpow_pcm* pcm, const uint8_t* r_packed,
                  uint32_t max_iterations, double crossover,
                  uint8_t* codeword_out, int* converged_out, uint32_t* iterations_out);

/* Monte-Carlo decoding success rate over `trials` seeded puzzle instances. */
int eccpow_estimate_success_probability(uint32_t n, uint32_t wc, uint32_t wr,
                                        uint32_t max_iterations, double crossover,
                                        uint64_t trials, uint64_t rng_seed,
                                        unsigned threads, double* prob_out);

/* ---- difficulty table -------------------------------------------------- */

typedef struct eccpow_table eccpow_table;

int eccpow_table_builtin(eccpow_table** out);
int eccpow_table_from_json(const char* json_text, eccpow_table** out);
int eccpow_table_to_json(const eccpow_table* table, char** text_out);
void eccpow_table_free(eccpow_table* table);
int eccpow_table_size(const eccpow_table* table, size_t* size_out);
int eccpow_table_level(const eccpow_table* table, size_t index, uint32_t* n_out,
                       uint32_t* wc_out, uint32_t* wr_out, double* success_prob_out);

/* One-step difficulty move from the parent's block generation time. */
int eccpow_adjust_difficulty(size_t level_index, uint64_t parent_bgt_ms,
                             size_t table_size, size_t* next_index_out);

/* ---- sealing ----------------------------------------------------------- */

/* Digest of the canonical unsealed encoding
 * parent_hash || number_be8 || timestamp_ms_be8 || level_be4. */
int eccpow_seal_hash(const uint8_t parent_hash[32], uint64_t number,
                     uint64_t timestamp_ms, uint32_t level_index, uint8_t out[32]);

/* Scan nonces from nonce_start (at most attempt_budget of them) for one whose
 * hash vector decodes under the level's code. found_out = 1 on success with
 * nonce/digest/attempts filled; 0 when the budget runs out. threads > 1
 * parallelizes the scan; only threads == 1 guarantees the sequential winner. */
int eccpow_mine(const uint8_t parent_hash[32], uint64_t number, uint64_t timestamp_ms,
                uint32_t level_index, const eccpow_table* table, uint64_t nonce_start,
                uint64_t attempt_budget, unsigned threads, int* found_out,
                uint64_t* nonce_out, uint8_t codeword_digest_out[32],
                uint64_t* attempts_out);

/* Re-derive the puzzle and check the seal; valid_out is 1/0. */
int eccpow_verify(const uint8_t parent_hash[32], uint64_t number, uint64_t timestamp_ms,
                  uint32_t level_index, uint64_t nonce,
                  const uint8_t codeword_digest[32], const eccpow_table* table,
                  int* valid_out);

/* ---- simulation --------------------------------------------------------- */

typedef struct eccpow_sim_report eccpow_sim_report;

/* Run the event-driven network simulation from a JSON config document.
 * table may be NULL to use the compiled-in difficulty ladder. */
int eccpow_sim_run_json(const char* config_json, const eccpow_table* table,
                        eccpow_sim_report** out);
void eccpow_sim_report_free(eccpow_sim_report* report);
/* Per-block table: height,miner,bgt_ms,level,max_prop_ms,stale */
int eccpow_sim_report_csv(const eccpow_sim_report* report, char** text_out);
int eccpow_sim_report_summary(const eccpow_sim_report* report, char** json_out);

/* ---- statistics --------------------------------------------------------- */

int eccpow_fit_exponential(const double* values, size_t count, double* lambda_out);

/* Equal-width histogram; edges_out needs bins+1 slots, counts_out bins. */
int eccpow_histogram(const double* values, size_t count, size_t bins,
                     double* edges_out, uint64_t* counts_out);

/* Exponential-model bin counts; out needs n_edges-1 slots. */
int eccpow_expected_frequencies(double lambda, const double* edges, size_t n_edges,
                                uint64_t total, double* out);

/* Two-sample Anderson-Darling with tie-adjusted midranks. p_bound_out
 * receives a string such as "p >= 0.250" (truncated to p_bound_cap). */
int eccpow_ad_two_sample(const double* f, size_t f_count, const double* g,
                         size_t g_count, double* a2_out, double* standardized_out,
                         char* p_bound_out, size_t p_bound_cap);

/* Deterministic Exp(lambda) reference draws for sample-vs-model testing. */
int eccpow_exponential_draws(uint64_t rng_seed, double lambda, size_t count,
                             double* out);

#ifdef __cplusplus
}
#endif

#endif /* ECCPOW_H */
