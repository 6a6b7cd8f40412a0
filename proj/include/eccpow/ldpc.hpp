#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eccpow/bitvec.hpp"
#include "eccpow/keccak.hpp"

namespace eccpow {

// Code-shape parameters. m = n*wc/wr rows are derived, never stored.
struct LdpcParams {
    uint32_t n = 0;   // code length (columns)
    uint32_t wc = 0;  // ones per column
    uint32_t wr = 0;  // ones per row

    // Throws ErrorCode::param unless wr | n, wc >= 2, wr > wc and the
    // derived row count lands in (0, n).
    void validate() const;
    uint32_t rows() const { return n * wc / wr; }
};

// Sparse binary parity-check matrix in Gallager band form: rows are grouped
// into wc bands of n/wr rows; band 0 covers columns [i*wr, (i+1)*wr) and
// every later band is a column permutation of it.
struct ParityCheckMatrix {
    LdpcParams params;
    std::vector<std::vector<uint32_t>> rows;  // sorted column indices per row

    uint32_t n() const { return params.n; }
    uint32_t m() const { return static_cast<uint32_t>(rows.size()); }
};

// Deterministic byte stream block_i = keccak256(seed || i_be8), i = 0,1,...
// Feeds the Fisher-Yates shuffles in generate_pcm; exposed for tests.
class SeededByteStream {
public:
    explicit SeededByteStream(const Digest256& seed);

    uint8_t next_byte();
    uint32_t next_u32();  // 4 stream bytes, big-endian

    // Unbiased draw from [0, k): rejection-samples next_u32() against
    // floor(2^32 / k) * k. k = 0 is a parameter error.
    uint32_t uniform_below(uint32_t k);

private:
    Digest256 seed_;
    Digest256 block_;
    uint64_t block_index_ = 0;
    size_t offset_ = 0;
};

// Seeded Gallager construction. Band 0 is canonical; for each band b >= 1 a
// fresh identity permutation of the columns is shuffled with draws taken
// from one SeededByteStream shared across bands (band 1 first).
ParityCheckMatrix generate_pcm(const Digest256& seed, const LdpcParams& params);

// H*c over GF(2); length-m result. c.size() != n is a dimension error.
BitVector syndrome(const ParityCheckMatrix& h, const BitVector& c);

bool is_codeword(const ParityCheckMatrix& h, const BitVector& c);

// Text dump: "n wc wr m" then one line of ascending column indices per row.
std::string dump(const ParityCheckMatrix& h);

}  // namespace eccpow
