#pragma once

// Core group encode/decode: a block of FP16 values becomes one shared
// exponent plus per-element sign and M-bit truncated mantissa.
//
// The shared exponent is the maximum unbiased exponent in the group, so the
// largest element's significand starts at the integer (Q1) bit. Every other
// element is right-shifted by its exponent difference before truncation to M
// bits. Truncation is toward zero; there is no rounding anywhere on this path.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "anda/errors.hpp"
#include "anda/half.hpp"

namespace anda {

inline constexpr int kMinMantissaLen = 1;
inline constexpr int kMaxMantissaLen = 16;
inline constexpr std::size_t kDefaultGroupSize = 64;

// W4A16g128 stand-in weight format.
inline constexpr std::size_t kDefaultWeightGroupSize = 128;
inline constexpr int kDefaultWeightBits = 4;

// Shared-exponent all-zero convention: any exponent decodes an all-zero
// group identically; the minimum is pinned for determinism.
inline constexpr int kZeroGroupExp = -15;

struct AndaParams {
    std::size_t group_size = kDefaultGroupSize;
    int mantissa_len = 8; // M, magnitude bits per element (sign excluded)

    bool valid() const {
        return group_size >= 1 && mantissa_len >= kMinMantissaLen && mantissa_len <= kMaxMantissaLen;
    }

    bool operator==(const AndaParams&) const = default;
};

struct AndaGroup {
    int shared_exp = kZeroGroupExp; // E, unbiased
    int mantissa_len = 0;           // M
    std::vector<uint8_t> signs;     // one flag per element
    std::vector<uint16_t> mantissas; // unsigned Q1.(M-1) magnitudes, < 2^M

    std::size_t size() const { return mantissas.size(); }

    bool operator==(const AndaGroup&) const = default;
};

// Shift-and-truncate conversion of one group. Short inputs are zero-padded
// to group_size elements.
inline AndaGroup encode_group(std::span<const Half> values, int mantissa_len,
                              std::size_t group_size = kDefaultGroupSize) {
    if (mantissa_len < kMinMantissaLen || mantissa_len > kMaxMantissaLen)
        throw Error("mantissa_len out of range 1..16");
    if (values.size() > group_size) throw Error("more values than group_size");

    int max_exp = kZeroGroupExp;
    for (Half h : values) {
        if (!h.is_finite()) throw NonFiniteInput();
        if (!h.is_zero() && h.unbiased_exp() > max_exp) max_exp = h.unbiased_exp();
    }

    AndaGroup g;
    g.shared_exp = max_exp;
    g.mantissa_len = mantissa_len;
    g.signs.assign(group_size, 0);
    g.mantissas.assign(group_size, 0);

    for (std::size_t i = 0; i < values.size(); ++i) {
        const Half h = values[i];
        g.signs[i] = static_cast<uint8_t>(h.sign());
        if (h.is_zero()) continue;
        // Element magnitude is significand11 * 2^(e-10). Relative to the
        // group grid 2^(E-(M-1)) that is significand11 >> ((E-e) + (11-M)),
        // floor division throughout.
        const int shift = (max_exp - h.unbiased_exp()) + (11 - mantissa_len);
        const uint32_t sig = h.significand11();
        uint32_t m;
        if (shift >= 0) {
            m = shift >= 32 ? 0u : (sig >> shift);
        } else {
            m = sig << (-shift); // at most << 5 (M=16, zero exponent difference)
        }
        g.mantissas[i] = static_cast<uint16_t>(m);
    }
    return g;
}

// Exact decode to binary32: element i is (-1)^sign * mantissa * 2^(E-(M-1)).
// A zero mantissa decodes to +0 regardless of its stored sign.
inline std::vector<float> decode_group(const AndaGroup& g) {
    std::vector<float> out(g.size(), 0.0f);
    const int e = g.shared_exp - (g.mantissa_len - 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.mantissas[i] == 0) continue;
        float mag = std::ldexp(static_cast<float>(g.mantissas[i]), e);
        out[i] = g.signs[i] ? -mag : mag;
    }
    return out;
}

} // namespace anda
