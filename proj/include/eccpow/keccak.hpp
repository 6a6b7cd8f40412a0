#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace eccpow {

using Digest256 = std::array<uint8_t, 32>;

/// Keccak-256 with the original 0x01 domain padding (the Ethereum variant,
/// not NIST SHA3-256 which pads with 0x06).
Digest256 keccak256(std::span<const uint8_t> message);

inline Digest256 keccak256(const std::string& message) {
    return keccak256(std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(message.data()), message.size()));
}

}  // namespace eccpow
