#include "eccpow/keccak.hpp"

#include <cstring>

namespace eccpow {

namespace {

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rho rotation offsets and pi lane permutation, flattened to the
// x + 5y lane order used below.
constexpr int kRho[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55, 20, 3,  10, 43,
                          25, 39, 41, 45, 15, 21, 8,  18, 2,  61, 56, 14};

inline uint64_t rol64(uint64_t x, int s) {
    return s == 0 ? x : (x << s) | (x >> (64 - s));
}

inline uint64_t load_le64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void keccak_f1600(uint64_t a[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ rol64(c[(x + 1) % 5], 1);
        for (int i = 0; i < 25; ++i) a[i] ^= d[i % 5];

        // rho + pi
        uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rol64(a[x + 5 * y], kRho[x + 5 * y]);

        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x + 5 * y] =
                    b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);

        // iota
        a[0] ^= kRoundConstants[round];
    }
}

}  // namespace

Digest256 keccak256(std::span<const uint8_t> message) {
    constexpr size_t kRate = 136;  // 1088-bit rate for 256-bit output
    uint64_t state[25] = {0};

    // absorb full blocks
    size_t off = 0;
    while (message.size() - off >= kRate) {
        for (size_t i = 0; i < kRate / 8; ++i)
            state[i] ^= load_le64(message.data() + off + 8 * i);
        keccak_f1600(state);
        off += kRate;
    }

    // final block with pad10*1, domain byte 0x01
    uint8_t block[kRate] = {0};
    const size_t tail = message.size() - off;
    if (tail > 0)
        std::memcpy(block, message.data() + off, tail);
    block[tail] = 0x01;
    block[kRate - 1] |= 0x80;
    for (size_t i = 0; i < kRate / 8; ++i)
        state[i] ^= load_le64(block + 8 * i);
    keccak_f1600(state);

    Digest256 out;
    for (size_t i = 0; i < 4; ++i)
        for (int b = 0; b < 8; ++b)
            out[8 * i + b] = static_cast<uint8_t>(state[i] >> (8 * b));
    return out;
}

}  // namespace eccpow
