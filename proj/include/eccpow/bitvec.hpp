#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace eccpow {

/// Fixed-length binary vector, packed into 64-bit words.
/// Indexing past size() is a contract violation (asserted, not checked).
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    size_t size() const { return len_; }

    bool get(size_t i) const {
        assert(i < len_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(size_t i, bool v) {
        assert(i < len_);
        const uint64_t mask = uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip(size_t i) {
        assert(i < len_);
        words_[i >> 6] ^= uint64_t(1) << (i & 63);
    }

    bool all_zero() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : words_) c += size_t(std::popcount(w));
        return c;
    }

    void xor_with(const BitVector& other) {
        assert(len_ == other.len_);
        for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    }

    bool operator==(const BitVector& other) const {
        return len_ == other.len_ && words_ == other.words_;
    }

    /// Bits packed MSB-first into ceil(size/8) bytes, zero-padded at the tail.
    /// Bit i lands in byte i/8 at bit position 7-(i%8).
    std::vector<uint8_t> packed_bytes_msb() const {
        std::vector<uint8_t> out((len_ + 7) / 8, 0);
        for (size_t i = 0; i < len_; ++i)
            if (get(i)) out[i >> 3] |= uint8_t(0x80u >> (i & 7));
        return out;
    }

    static BitVector from_packed_bytes_msb(const uint8_t* bytes, size_t n_bits) {
        BitVector v(n_bits);
        for (size_t i = 0; i < n_bits; ++i)
            if ((bytes[i >> 3] >> (7 - (i & 7))) & 1u) v.set(i, true);
        return v;
    }

private:
    size_t len_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace eccpow
