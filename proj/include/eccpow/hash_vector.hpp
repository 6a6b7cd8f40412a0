#pragma once

#include <cstdint>

#include "eccpow/bitvec.hpp"
#include "eccpow/keccak.hpp"

namespace eccpow {

using Nonce = uint64_t;

// Length-n binary vector derived from a digest chain:
//   s_1 = keccak256(seal_input || nonce_be8), s_u = keccak256(s_{u-1}).
// Bits are consumed in digest byte order, MSB first within each byte, so
// bit 0 of the result is the top bit of s_1[0]. Throws ErrorCode::param
// when n == 0.
BitVector hash_vector(const Digest256& seal_input, Nonce nonce, size_t n);

}  // namespace eccpow
