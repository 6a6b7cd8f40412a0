#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace eccpow {

inline void append_be64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

inline void append_be32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

inline uint64_t read_be64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

inline uint32_t read_be32(const uint8_t* p) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | p[i];
    return v;
}

std::string to_hex(std::span<const uint8_t> bytes);

/// Strict hex decode; throws Error(param) on odd length or non-hex characters.
std::vector<uint8_t> from_hex(const std::string& hex);

}  // namespace eccpow
