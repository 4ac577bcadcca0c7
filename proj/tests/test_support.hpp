#pragma once

// Shared randomized-input helpers for the test suite. Everything is seeded
// explicitly so failures reproduce.

#include <cstdint>
#include <vector>

#include "anda/half.hpp"
#include "anda/matrix.hpp"
#include "anda/weights.hpp"
#include "anda/workload.hpp"

namespace testsup {

using anda::Half;
using anda::Xoshiro256ss;

// Uniform over all finite binary16 bit patterns (normals, subnormals, both
// zeros, both signs).
inline Half random_finite_half(Xoshiro256ss& rng) {
    for (;;) {
        const auto bits = static_cast<uint16_t>(rng.next() & 0xFFFF);
        const Half h(bits);
        if (h.is_finite()) return h;
    }
}

inline std::vector<Half> random_half_group(Xoshiro256ss& rng, std::size_t n) {
    std::vector<Half> v(n);
    for (auto& h : v) h = random_finite_half(rng);
    return v;
}

inline anda::Matrix<Half> random_half_matrix(Xoshiro256ss& rng, std::size_t rows, std::size_t cols) {
    anda::Matrix<Half> m(rows, cols);
    for (auto& h : m.data) h = random_finite_half(rng);
    return m;
}

// Moderately sized values (gaussian-ish via sums of uniforms) that exercise
// realistic exponent spreads without the extreme tails of the full lattice.
inline anda::Matrix<Half> random_llm_like_matrix(Xoshiro256ss& rng, std::size_t rows, std::size_t cols) {
    anda::Matrix<Half> m(rows, cols);
    for (auto& h : m.data) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += rng.uniform01() - 0.5;
        h = anda::float_to_half(static_cast<float>(s * 2.0));
    }
    return m;
}

inline int8_t random_int4(Xoshiro256ss& rng) {
    return static_cast<int8_t>(static_cast<int>(rng.next() & 0xF) - 8);
}

inline std::vector<int8_t> random_int4_vector(Xoshiro256ss& rng, std::size_t n) {
    std::vector<int8_t> v(n);
    for (auto& w : v) w = random_int4(rng);
    return v;
}

inline anda::Matrix<float> random_float_matrix(Xoshiro256ss& rng, std::size_t rows, std::size_t cols,
                                               double scale = 1.0) {
    anda::Matrix<float> m(rows, cols);
    for (auto& v : m.data) v = static_cast<float>((rng.uniform01() * 2.0 - 1.0) * scale);
    return m;
}

// Weight matrix with explicit values/scales, for tests that pin scales.
inline anda::QuantizedWeightMatrix make_weights(std::size_t K, std::size_t N, int8_t value,
                                                float scale) {
    anda::QuantizedWeightMatrix q;
    q.K = K;
    q.N = N;
    q.values = anda::Matrix<int8_t>(K, N, value);
    q.scales = anda::Matrix<float>(q.group_count_k(), N, scale);
    return q;
}

} // namespace testsup
