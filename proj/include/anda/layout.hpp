#pragma once

// Bit-plane (transposed) packing: bits of equal significance across the 64
// group lanes land in one 64-bit word. Plane 0 is the most significant
// mantissa bit, matching the order the bit-plane compressor emits and the
// APU consumes.

#include <cstdint>
#include <vector>

#include "anda/group.hpp"

namespace anda {

inline constexpr std::size_t kMaxLanes = 64;

struct PackedGroup {
    uint64_t sign_plane = 0;          // bit i = sign of element i
    std::vector<uint64_t> bit_planes; // M words, MSB-first
    int8_t shared_exp_byte = kZeroGroupExp;

    int mantissa_len() const { return static_cast<int>(bit_planes.size()); }

    bool operator==(const PackedGroup&) const = default;
};

inline PackedGroup pack_group(const AndaGroup& g) {
    if (g.size() > kMaxLanes) throw GroupTooWide();
    PackedGroup p;
    p.shared_exp_byte = static_cast<int8_t>(g.shared_exp);
    p.bit_planes.assign(static_cast<std::size_t>(g.mantissa_len), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.signs[i]) p.sign_plane |= uint64_t{1} << i;
        const uint16_t m = g.mantissas[i];
        for (int k = 0; k < g.mantissa_len; ++k) {
            // Plane k holds the bit of significance 2^(M-1-k).
            if ((m >> (g.mantissa_len - 1 - k)) & 1u) p.bit_planes[static_cast<std::size_t>(k)] |= uint64_t{1} << i;
        }
    }
    return p;
}

inline AndaGroup unpack_group(const PackedGroup& p, int mantissa_len, std::size_t group_size) {
    if (p.mantissa_len() != mantissa_len) throw PlaneCountMismatch();
    if (group_size > kMaxLanes) throw GroupTooWide();
    AndaGroup g;
    g.shared_exp = p.shared_exp_byte;
    g.mantissa_len = mantissa_len;
    g.signs.assign(group_size, 0);
    g.mantissas.assign(group_size, 0);
    for (std::size_t i = 0; i < group_size; ++i) {
        g.signs[i] = (p.sign_plane >> i) & 1u;
        uint16_t m = 0;
        for (int k = 0; k < mantissa_len; ++k)
            if ((p.bit_planes[static_cast<std::size_t>(k)] >> i) & 1u) m |= uint16_t(1) << (mantissa_len - 1 - k);
        g.mantissas[i] = m;
    }
    return g;
}

// Storage footprint of packed groups: per group one sign word, M plane
// words, and one shared-exponent byte. Lanes beyond the group size still
// occupy their word slots.
inline uint64_t storage_bits(int mantissa_len, std::size_t group_size, uint64_t group_count) {
    if (group_size > kMaxLanes) throw GroupTooWide();
    return group_count * (64u * (static_cast<uint64_t>(mantissa_len) + 1) + 8u);
}

} // namespace anda
