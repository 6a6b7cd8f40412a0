#include "eccpow/hash_vector.hpp"

#include <vector>

#include "eccpow/bytes.hpp"
#include "eccpow/errors.hpp"

namespace eccpow {

BitVector hash_vector(const Digest256& seal_input, Nonce nonce, size_t n) {
    if (n == 0)
        fail(ErrorCode::param, "hash_vector: n must be >= 1");

    std::vector<uint8_t> preimage(seal_input.begin(), seal_input.end());
    append_be64(preimage, nonce);
    Digest256 s = keccak256(preimage);

    BitVector r(n);
    size_t bit = 0;
    while (bit < n) {
        for (size_t i = 0; i < 256 && bit < n; ++i, ++bit) {
            uint8_t byte = s[i / 8];
            if ((byte >> (7 - (i % 8))) & 1)
                r.set(bit, true);
        }
        if (bit < n)
            s = keccak256(std::span<const uint8_t>(s.data(), s.size()));
    }
    return r;
}

}  // namespace eccpow
