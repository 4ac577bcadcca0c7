#pragma once

// Round-to-nearest weight-only quantizer: symmetric INT values with one
// binary32 scale per (K-group, column). Ties round half away from zero so
// independent implementations agree bit-exactly.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "anda/container.hpp"
#include "anda/errors.hpp"
#include "anda/matrix.hpp"

namespace anda {

struct QuantizedWeightMatrix {
    std::size_t K = 0; // reduction dimension (rows)
    std::size_t N = 0; // output dimension (columns)
    std::size_t weight_group_size = kDefaultWeightGroupSize;
    int bit_width = kDefaultWeightBits;
    Matrix<int8_t> values; // K x N, sign-extended
    Matrix<float> scales;  // ceil(K/group) x N

    std::size_t group_count_k() const { return (K + weight_group_size - 1) / weight_group_size; }

    float scale_at(std::size_t k, std::size_t n) const { return scales.at(k / weight_group_size, n); }

    bool operator==(const QuantizedWeightMatrix&) const = default;
};

inline QuantizedWeightMatrix quantize_rtn(const Matrix<float>& w,
                                          std::size_t group = kDefaultWeightGroupSize,
                                          int bits = kDefaultWeightBits) {
    if (w.rows == 0 || group == 0 || bits < 2 || bits > 8) throw Error("invalid quantizer params");
    QuantizedWeightMatrix q;
    q.K = w.rows;
    q.N = w.cols;
    q.weight_group_size = group;
    q.bit_width = bits;
    q.values = Matrix<int8_t>(w.rows, w.cols);
    q.scales = Matrix<float>(q.group_count_k(), w.cols, 1.0f);

    const float qmax = static_cast<float>((1 << (bits - 1)) - 1); // 7 for int4
    const float qmin = -static_cast<float>(1 << (bits - 1));      // -8 for int4

    for (std::size_t n = 0; n < w.cols; ++n) {
        for (std::size_t g = 0; g < q.group_count_k(); ++g) {
            const std::size_t begin = g * group;
            const std::size_t end = std::min(begin + group, w.rows);
            float max_abs = 0.0f;
            for (std::size_t k = begin; k < end; ++k) {
                const float v = w.at(k, n);
                if (!std::isfinite(v)) throw NonFiniteInput();
                max_abs = std::max(max_abs, std::fabs(v));
            }
            const float scale = max_abs > 0.0f ? max_abs / qmax : 1.0f;
            q.scales.at(g, n) = scale;
            for (std::size_t k = begin; k < end; ++k) {
                // round half away from zero, then clamp to the signed range
                const float r = std::round(w.at(k, n) / scale);
                q.values.at(k, n) = static_cast<int8_t>(std::min(qmax, std::max(qmin, r)));
            }
        }
    }
    return q;
}

inline Matrix<float> dequantize(const QuantizedWeightMatrix& q) {
    Matrix<float> w(q.K, q.N);
    for (std::size_t k = 0; k < q.K; ++k)
        for (std::size_t n = 0; n < q.N; ++n)
            w.at(k, n) = static_cast<float>(q.values.at(k, n)) * q.scale_at(k, n);
    return w;
}

// Serialization: values as an int8 .andt plus a sidecar binary32 scale
// tensor at <path> + ".scales". The group size is a loader parameter
// (validated against the sidecar shape), not part of the container.
inline void save_weights(const QuantizedWeightMatrix& q, const std::string& path) {
    save_andt(to_raw(q.values), path);
    save_andt(to_raw(q.scales), path + ".scales");
}

inline QuantizedWeightMatrix load_weights(const std::string& path,
                                          std::size_t group = kDefaultWeightGroupSize,
                                          int bits = kDefaultWeightBits) {
    QuantizedWeightMatrix q;
    q.values = to_int8_matrix(load_andt(path));
    q.scales = to_float_matrix(load_andt(path + ".scales"));
    q.K = q.values.rows;
    q.N = q.values.cols;
    q.weight_group_size = group;
    q.bit_width = bits;
    if (q.scales.rows != q.group_count_k() || q.scales.cols != q.N)
        throw ShapeMismatch("scale sidecar does not match weight shape/group");
    return q;
}

} // namespace anda
