#pragma once

// IEEE 754 binary16 field manipulation. Values are carried around as raw
// 16-bit patterns; conversions to/from binary32 are exact in the half->float
// direction and round-to-nearest-even in the float->half direction.

#include <bit>
#include <cmath>
#include <cstdint>

namespace anda {

enum class FpClass : uint8_t { Zero, Subnormal, Normal, Infinity, NaN };

// One IEEE binary16 value, stored as its bit pattern.
struct Half {
    uint16_t bits = 0;

    constexpr Half() = default;
    constexpr explicit Half(uint16_t b) : bits(b) {}

    static constexpr Half from_bits(uint16_t b) { return Half(b); }

    constexpr uint16_t sign() const { return (bits >> 15) & 1u; }
    constexpr uint16_t biased_exp() const { return (bits >> 10) & 0x1Fu; }
    constexpr uint16_t fraction() const { return bits & 0x3FFu; }

    constexpr FpClass classify() const {
        const uint16_t e = biased_exp();
        const uint16_t f = fraction();
        if (e == 0x1F) return f ? FpClass::NaN : FpClass::Infinity;
        if (e == 0) return f ? FpClass::Subnormal : FpClass::Zero;
        return FpClass::Normal;
    }

    constexpr bool is_finite() const {
        return biased_exp() != 0x1F;
    }

    constexpr bool is_zero() const { return (bits & 0x7FFFu) == 0; }

    // Unbiased exponent of the value. Subnormals report -14 (their
    // significand lives in [0,1)); zero reports -15 by convention.
    constexpr int unbiased_exp() const {
        const uint16_t e = biased_exp();
        if (e == 0) return is_zero() ? -15 : -14;
        return static_cast<int>(e) - 15;
    }

    // 11-bit integer significand: 1024 + fraction for normals (value in
    // [1024, 2048)), fraction alone for subnormals and zero.
    constexpr uint32_t significand11() const {
        const uint16_t e = biased_exp();
        return (e == 0 ? 0u : 1024u) + fraction();
    }

    constexpr bool operator==(const Half&) const = default;
};

// Field decomposition of one half value; reassembling the fields gives back
// the input bit pattern.
struct HalfFields {
    uint16_t sign;       // 0 or 1
    uint16_t biased_exp; // 0..31
    uint16_t fraction;   // 0..1023
    FpClass cls;

    constexpr uint16_t reassemble() const {
        return static_cast<uint16_t>((sign << 15) | (biased_exp << 10) | fraction);
    }
};

constexpr HalfFields decompose(Half h) {
    return HalfFields{h.sign(), h.biased_exp(), h.fraction(), h.classify()};
}

// Exact widening conversion binary16 -> binary32.
inline float half_to_float(Half h) {
    const uint32_t sign = static_cast<uint32_t>(h.sign()) << 31;
    const uint16_t e = h.biased_exp();
    const uint32_t f = h.fraction();
    uint32_t out;
    if (e == 0x1F) {
        out = sign | 0x7F800000u | (f << 13); // inf / NaN (payload shifted)
    } else if (e == 0) {
        if (f == 0) {
            out = sign;
        } else {
            // Subnormal: normalize into the binary32 field.
            int shift = std::countl_zero(f) - 22; // top set bit of f -> bit 10
            uint32_t frac = (f << (shift + 1)) & 0x3FFu;
            uint32_t exp32 = static_cast<uint32_t>(127 - 15 - shift);
            out = sign | (exp32 << 23) | (frac << 13);
        }
    } else {
        out = sign | ((static_cast<uint32_t>(e) - 15 + 127) << 23) | (f << 13);
    }
    return std::bit_cast<float>(out);
}

// binary32 -> binary16 with round-to-nearest-even, overflow to infinity.
inline Half float_to_half(float x) {
    const uint32_t bits = std::bit_cast<uint32_t>(x);
    const uint32_t sign = (bits >> 16) & 0x8000u;
    const int32_t exp32 = static_cast<int32_t>((bits >> 23) & 0xFFu);
    const uint32_t frac32 = bits & 0x7FFFFFu;

    if (exp32 == 0xFF) { // inf or NaN
        uint16_t payload = frac32 ? static_cast<uint16_t>((frac32 >> 13) | 0x200u) : 0u;
        return Half(static_cast<uint16_t>(sign | 0x7C00u | payload));
    }

    int32_t e = exp32 - 127 + 15; // rebiased half exponent
    if (e >= 0x1F) {              // overflow -> infinity
        return Half(static_cast<uint16_t>(sign | 0x7C00u));
    }

    const uint32_t mant = frac32 | (exp32 ? 0x800000u : 0u); // 24-bit significand
    int shift;       // bits dropped from mant
    uint32_t packed; // exponent+fraction fields, pre-rounding
    if (e <= 0) {
        // Result is half-subnormal (or rounds to it / to zero).
        if (e < -10) return Half(static_cast<uint16_t>(sign)); // underflow to zero
        shift = 13 + (1 - e);
        packed = mant >> shift;
    } else {
        shift = 13;
        packed = (static_cast<uint32_t>(e) << 10) | ((mant >> shift) & 0x3FFu);
    }

    const uint32_t rem = mant & ((1u << shift) - 1u);
    const uint32_t halfway = 1u << (shift - 1);
    // Round up carries cleanly through the fraction into the exponent field.
    if (rem > halfway || (rem == halfway && (packed & 1u))) packed += 1;

    if (packed >= 0x7C00u) return Half(static_cast<uint16_t>(sign | 0x7C00u));
    return Half(static_cast<uint16_t>(sign | packed));
}

} // namespace anda
