// Exercises the shared-library surface the way an external caller would:
// through eccpow.h only, no C++ headers from the core.
#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "eccpow.h"

namespace {

std::string hex(const uint8_t* p, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (size_t i = 0; i < n; ++i) {
        out += digits[p[i] >> 4];
        out += digits[p[i] & 0xf];
    }
    return out;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error plumbing") {
    REQUIRE(eccpow_version() != nullptr);
    CHECK(std::string(eccpow_version()).find('.') != std::string::npos);

    CHECK(eccpow_keccak256(nullptr, 5, nullptr) == ECCPOW_ERR_PARAM);
    CHECK(std::string(eccpow_last_error()).size() > 0);
}

TEST_CASE("keccak through the c surface") {
    uint8_t out[32];
    REQUIRE(eccpow_keccak256(reinterpret_cast<const uint8_t*>("abc"), 3, out) == ECCPOW_OK);
    CHECK(hex(out, 32) == "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    // Zero-length input with a null pointer is legal.
    REQUIRE(eccpow_keccak256(nullptr, 0, out) == ECCPOW_OK);
    CHECK(hex(out, 32) == "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
}

TEST_CASE("hash vector packing") {
    uint8_t seal[32];
    REQUIRE(eccpow_keccak256(reinterpret_cast<const uint8_t*>("seal-a"), 6, seal) == ECCPOW_OK);
    uint8_t packed[4];
    REQUIRE(eccpow_hash_vector(seal, 0, 32, packed) == ECCPOW_OK);
    CHECK(hex(packed, 4) == "87ba4e84");  // golden from tests/golden/hash_vectors.txt
    CHECK(eccpow_hash_vector(seal, 0, 0, packed) == ECCPOW_ERR_PARAM);
    CHECK(eccpow_hash_vector(nullptr, 0, 32, packed) == ECCPOW_ERR_PARAM);
}

TEST_CASE("pcm lifecycle and dump") {
    uint8_t seed[32];
    std::memset(seed, 0, sizeof seed);
    eccpow_pcm* pcm = nullptr;
    REQUIRE(eccpow_pcm_generate(seed, 8, 2, 4, &pcm) == ECCPOW_OK);
    REQUIRE(pcm != nullptr);

    uint32_t n = 0, m = 0;
    REQUIRE(eccpow_pcm_dims(pcm, &n, &m) == ECCPOW_OK);
    CHECK(n == 8);
    CHECK(m == 4);

    char* text = nullptr;
    REQUIRE(eccpow_pcm_dump(pcm, &text) == ECCPOW_OK);
    REQUIRE(text != nullptr);
    CHECK(std::string(text).rfind("8 2 4 4\n", 0) == 0);
    eccpow_string_free(text);
    eccpow_pcm_free(pcm);

    CHECK(eccpow_pcm_generate(seed, 25, 3, 6, &pcm) == ECCPOW_ERR_PARAM);
    CHECK(eccpow_pcm_generate(nullptr, 8, 2, 4, &pcm) == ECCPOW_ERR_PARAM);
}

TEST_CASE("decode round trip") {
    uint8_t seed[32];
    std::memset(seed, 0x11, sizeof seed);
    eccpow_pcm* pcm = nullptr;
    REQUIRE(eccpow_pcm_generate(seed, 24, 3, 6, &pcm) == ECCPOW_OK);

    // The all-zero word is a codeword: converges instantly, unchanged.
    uint8_t r[3] = {0, 0, 0};
    uint8_t codeword[3] = {0xff, 0xff, 0xff};
    int converged = 0;
    uint32_t iterations = 99;
    REQUIRE(eccpow_decode(pcm, r, 20, 0.45, codeword, &converged, &iterations) == ECCPOW_OK);
    CHECK(converged == 1);
    CHECK(iterations == 0);
    CHECK((codeword[0] | codeword[1] | codeword[2]) == 0);

    CHECK(eccpow_decode(pcm, r, 20, 0.6, codeword, &converged, &iterations) ==
          ECCPOW_ERR_PARAM);  // crossover outside (0, 0.5)
    eccpow_pcm_free(pcm);
}

TEST_CASE("success probability estimate") {
    double p = 0.0;
    REQUIRE(eccpow_estimate_success_probability(20, 3, 4, 20, 0.45, 3000, 99, 2, &p) ==
            ECCPOW_OK);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(eccpow_estimate_success_probability(20, 3, 4, 20, 0.45, 0, 99, 1, &p) ==
          ECCPOW_ERR_PARAM);
}

TEST_CASE("difficulty table access and json") {
    eccpow_table* table = nullptr;
    REQUIRE(eccpow_table_builtin(&table) == ECCPOW_OK);
    size_t size = 0;
    REQUIRE(eccpow_table_size(table, &size) == ECCPOW_OK);
    REQUIRE(size == 6);

    uint32_t n = 0, wc = 0, wr = 0;
    double prob = 0.0;
    REQUIRE(eccpow_table_level(table, 0, &n, &wc, &wr, &prob) == ECCPOW_OK);
    CHECK(n == 16);
    CHECK(wc == 3);
    CHECK(wr == 4);
    CHECK(prob > 0.2);
    CHECK(eccpow_table_level(table, 6, &n, &wc, &wr, &prob) == ECCPOW_ERR_PARAM);

    char* json = nullptr;
    REQUIRE(eccpow_table_to_json(table, &json) == ECCPOW_OK);
    eccpow_table* parsed = nullptr;
    REQUIRE(eccpow_table_from_json(json, &parsed) == ECCPOW_OK);
    size_t parsed_size = 0;
    REQUIRE(eccpow_table_size(parsed, &parsed_size) == ECCPOW_OK);
    CHECK(parsed_size == size);
    eccpow_string_free(json);
    eccpow_table_free(parsed);
    eccpow_table_free(table);

    CHECK(eccpow_table_from_json("{", &parsed) == ECCPOW_ERR_CONFIG);
    CHECK(eccpow_table_from_json(R"({"levels": []})", &parsed) == ECCPOW_ERR_CONFIG);
}

TEST_CASE("difficulty adjustment") {
    size_t next = 99;
    REQUIRE(eccpow_adjust_difficulty(2, 5000, 6, &next) == ECCPOW_OK);
    CHECK(next == 3);
    REQUIRE(eccpow_adjust_difficulty(2, 12000, 6, &next) == ECCPOW_OK);
    CHECK(next == 2);
    REQUIRE(eccpow_adjust_difficulty(2, 30000, 6, &next) == ECCPOW_OK);
    CHECK(next == 1);
    CHECK(eccpow_adjust_difficulty(9, 12000, 6, &next) == ECCPOW_ERR_PARAM);
}

TEST_CASE("mine and verify through the c surface") {
    eccpow_table* table = nullptr;
    REQUIRE(eccpow_table_builtin(&table) == ECCPOW_OK);

    uint8_t parent[32];
    REQUIRE(eccpow_keccak256(reinterpret_cast<const uint8_t*>("capi-mine"), 9, parent) ==
            ECCPOW_OK);

    int found = 0;
    uint64_t nonce = 0, attempts = 0;
    uint8_t digest[32];
    REQUIRE(eccpow_mine(parent, 1, 1000, 0, table, 0, 1u << 22, 1, &found, &nonce,
                        digest, &attempts) == ECCPOW_OK);
    REQUIRE(found == 1);
    CHECK(attempts >= 1);
    CHECK(attempts == nonce + 1);  // sequential scan from zero

    int valid = 0;
    REQUIRE(eccpow_verify(parent, 1, 1000, 0, nonce, digest, table, &valid) == ECCPOW_OK);
    CHECK(valid == 1);
    REQUIRE(eccpow_verify(parent, 1, 1000, 0, nonce + 1, digest, table, &valid) ==
            ECCPOW_OK);
    CHECK(valid == 0);
    REQUIRE(eccpow_verify(parent, 2, 1000, 0, nonce, digest, table, &valid) == ECCPOW_OK);
    CHECK(valid == 0);

    // Budget of zero can never find a seal.
    REQUIRE(eccpow_mine(parent, 1, 1000, 0, table, 0, 0, 1, &found, &nonce, digest,
                        &attempts) == ECCPOW_OK);
    CHECK(found == 0);

    CHECK(eccpow_mine(parent, 1, 1000, 9, table, 0, 10, 1, &found, &nonce, digest,
                      &attempts) == ECCPOW_ERR_PARAM);  // level out of range
    eccpow_table_free(table);
}

TEST_CASE("seal hash golden") {
    uint8_t parent[32];
    std::memset(parent, 0, sizeof parent);
    uint8_t out[32];
    REQUIRE(eccpow_seal_hash(parent, 0, 0, 0, out) == ECCPOW_OK);
    CHECK(hex(out, 32) == "a86d54e9aab41ae5e520ff0062ff1b4cbd0b2192bb01080a058bb170d84e6457");
}

TEST_CASE("simulation from json") {
    const char* config = R"({
        "nodes": [{"id": "solo", "hashrate": 10.0, "region": "r"}],
        "duration_s": 300,
        "rng_seed": 7
    })";
    eccpow_sim_report* report = nullptr;
    REQUIRE(eccpow_sim_run_json(config, nullptr, &report) == ECCPOW_OK);
    REQUIRE(report != nullptr);

    char* csv = nullptr;
    REQUIRE(eccpow_sim_report_csv(report, &csv) == ECCPOW_OK);
    CHECK(std::string(csv).rfind("height,miner,bgt_ms,level,max_prop_ms,stale\n", 0) == 0);
    eccpow_string_free(csv);

    char* summary = nullptr;
    REQUIRE(eccpow_sim_report_summary(report, &summary) == ECCPOW_OK);
    CHECK(std::string(summary).find("total_mined") != std::string::npos);
    eccpow_string_free(summary);
    eccpow_sim_report_free(report);

    CHECK(eccpow_sim_run_json(R"({"nodes": [], "duration_s": 1})", nullptr, &report) ==
          ECCPOW_ERR_CONFIG);
    CHECK(eccpow_sim_run_json("nonsense", nullptr, &report) == ECCPOW_ERR_CONFIG);
}

TEST_CASE("statistics helpers") {
    const double samples[] = {2.0, 4.0};
    double lambda = 0.0;
    REQUIRE(eccpow_fit_exponential(samples, 2, &lambda) == ECCPOW_OK);
    CHECK(lambda == doctest::Approx(1.0 / 3.0));
    CHECK(eccpow_fit_exponential(samples, 0, &lambda) == ECCPOW_ERR_PARAM);

    const double vals[] = {0.0, 1.0, 2.0, 3.0, 4.0};
    double edges[3];
    uint64_t counts[2];
    REQUIRE(eccpow_histogram(vals, 5, 2, edges, counts) == ECCPOW_OK);
    CHECK(edges[0] == doctest::Approx(0.0));
    CHECK(edges[2] == doctest::Approx(4.0));
    CHECK(counts[0] + counts[1] == 5);
    const double flat[] = {3.0, 3.0};
    CHECK(eccpow_histogram(flat, 2, 2, edges, counts) == ECCPOW_ERR_DEGENERATE);

    double freq[2];
    REQUIRE(eccpow_expected_frequencies(1.0, edges, 3, 100, freq) == ECCPOW_OK);
    CHECK(freq[0] > freq[1]);  // exponential mass decays

    const double f[] = {1, 2, 3};
    const double g[] = {4, 5, 6};
    double a2 = 0.0, standardized = 0.0;
    char p_bound[32];
    REQUIRE(eccpow_ad_two_sample(f, 3, g, 3, &a2, &standardized, p_bound,
                                 sizeof p_bound) == ECCPOW_OK);
    CHECK(a2 == doctest::Approx(2.4844006568144503).epsilon(1e-9));
    CHECK(standardized == doctest::Approx(2.6332335269661775).epsilon(1e-9));
    CHECK(std::string(p_bound) == "p = 0.027");
    const double same[] = {5, 5};
    CHECK(eccpow_ad_two_sample(same, 2, same, 2, &a2, &standardized, p_bound,
                               sizeof p_bound) == ECCPOW_ERR_DEGENERATE);
}

TEST_CASE("deterministic exponential draws") {
    double a[5], b[5];
    REQUIRE(eccpow_exponential_draws(42, 2.0, 5, a) == ECCPOW_OK);
    REQUIRE(eccpow_exponential_draws(42, 2.0, 5, b) == ECCPOW_OK);
    for (int i = 0; i < 5; ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i] > 0.0);
    }
    REQUIRE(eccpow_exponential_draws(43, 2.0, 5, b) == ECCPOW_OK);
    CHECK(a[0] != b[0]);
    CHECK(eccpow_exponential_draws(42, 0.0, 5, a) == ECCPOW_ERR_PARAM);
}

}  // TEST_SUITE
