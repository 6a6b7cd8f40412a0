#include "eccpow/ldpc.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "eccpow/bytes.hpp"
#include "eccpow/errors.hpp"

namespace eccpow {

void LdpcParams::validate() const {
    if (n == 0 || wc == 0 || wr == 0)
        fail(ErrorCode::param, "ldpc params must be positive");
    if (wc < 2)
        fail(ErrorCode::param, "wc must be >= 2");
    if (wr <= wc)
        fail(ErrorCode::param, "wr must exceed wc");
    if (n % wr != 0)
        fail(ErrorCode::param, "wr must divide n");
    uint32_t m = n * wc / wr;
    if (m == 0 || m >= n)
        fail(ErrorCode::param, "derived row count must lie in (0, n)");
}

SeededByteStream::SeededByteStream(const Digest256& seed) : seed_(seed) {
    std::vector<uint8_t> preimage(seed_.begin(), seed_.end());
    append_be64(preimage, 0);
    block_ = keccak256(preimage);
}

uint8_t SeededByteStream::next_byte() {
    if (offset_ == block_.size()) {
        ++block_index_;
        std::vector<uint8_t> preimage(seed_.begin(), seed_.end());
        append_be64(preimage, block_index_);
        block_ = keccak256(preimage);
        offset_ = 0;
    }
    return block_[offset_++];
}

uint32_t SeededByteStream::next_u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | next_byte();
    return v;
}

uint32_t SeededByteStream::uniform_below(uint32_t k) {
    if (k == 0)
        fail(ErrorCode::param, "uniform_below: empty range");
    const uint32_t limit = static_cast<uint32_t>((uint64_t(1) << 32) / k * k);
    for (;;) {
        uint32_t v = next_u32();
        if (limit == 0 || v < limit)  // limit 0 means the full 2^32 range
            return v % k;
    }
}

ParityCheckMatrix generate_pcm(const Digest256& seed, const LdpcParams& params) {
    params.validate();
    const uint32_t n = params.n;
    const uint32_t band_rows = n / params.wr;

    ParityCheckMatrix h;
    h.params = params;
    h.rows.reserve(params.rows());

    for (uint32_t i = 0; i < band_rows; ++i) {
        std::vector<uint32_t> row(params.wr);
        std::iota(row.begin(), row.end(), i * params.wr);
        h.rows.push_back(std::move(row));
    }

    SeededByteStream stream(seed);
    std::vector<uint32_t> perm(n);
    for (uint32_t b = 1; b < params.wc; ++b) {
        std::iota(perm.begin(), perm.end(), 0);
        for (uint32_t i = n - 1; i >= 1; --i) {
            uint32_t j = stream.uniform_below(i + 1);
            std::swap(perm[i], perm[j]);
        }
        for (uint32_t i = 0; i < band_rows; ++i) {
            std::vector<uint32_t> row(perm.begin() + i * params.wr,
                                      perm.begin() + (i + 1) * params.wr);
            std::sort(row.begin(), row.end());
            h.rows.push_back(std::move(row));
        }
    }
    return h;
}

BitVector syndrome(const ParityCheckMatrix& h, const BitVector& c) {
    if (c.size() != h.n())
        fail(ErrorCode::dimension, "syndrome: vector length does not match code length");
    BitVector s(h.m());
    for (uint32_t i = 0; i < h.m(); ++i) {
        bool parity = false;
        for (uint32_t col : h.rows[i]) parity ^= c.get(col);
        if (parity) s.set(i, true);
    }
    return s;
}

bool is_codeword(const ParityCheckMatrix& h, const BitVector& c) {
    return syndrome(h, c).all_zero();
}

std::string dump(const ParityCheckMatrix& h) {
    std::ostringstream out;
    out << h.n() << ' ' << h.params.wc << ' ' << h.params.wr << ' ' << h.m() << '\n';
    for (const auto& row : h.rows) {
        for (size_t k = 0; k < row.size(); ++k) {
            if (k) out << ' ';
            out << row[k];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace eccpow
