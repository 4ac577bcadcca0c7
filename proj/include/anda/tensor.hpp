#pragma once

// Tensor-level encode/decode: groups are tiled along the innermost
// (reduction) dimension, one run of groups per row, last group zero-padded.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "anda/group.hpp"
#include "anda/matrix.hpp"

namespace anda {

struct AndaTensor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    AndaParams params;
    std::vector<AndaGroup> groups; // row-major, ceil(cols/group_size) per row

    std::size_t groups_per_row() const {
        return params.group_size == 0 ? 0 : (cols + params.group_size - 1) / params.group_size;
    }
    std::size_t group_count() const { return groups.size(); }

    bool operator==(const AndaTensor&) const = default;
};

inline AndaTensor encode_tensor(const Matrix<Half>& m, const AndaParams& params) {
    if (!params.valid()) throw Error("invalid AndaParams");
    AndaTensor t;
    t.rows = m.rows;
    t.cols = m.cols;
    t.params = params;
    const std::size_t gs = params.group_size;
    const std::size_t gpr = t.groups_per_row();
    t.groups.reserve(m.rows * gpr);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t g = 0; g < gpr; ++g) {
            const std::size_t begin = g * gs;
            const std::size_t len = std::min(gs, m.cols - begin);
            std::span<const Half> chunk(&m.at(r, begin), len);
            t.groups.push_back(encode_group(chunk, params.mantissa_len, gs));
        }
    }
    return t;
}

inline Matrix<float> decode_tensor(const AndaTensor& t) {
    Matrix<float> out(t.rows, t.cols);
    const std::size_t gs = t.params.group_size;
    const std::size_t gpr = t.groups_per_row();
    for (std::size_t r = 0; r < t.rows; ++r) {
        for (std::size_t g = 0; g < gpr; ++g) {
            const std::vector<float> vals = decode_group(t.groups[r * gpr + g]);
            const std::size_t begin = g * gs;
            const std::size_t len = std::min(gs, t.cols - begin);
            for (std::size_t i = 0; i < len; ++i) out.at(r, begin + i) = vals[i];
        }
    }
    return out;
}

struct ErrorStats {
    double max_abs = 0.0;
    double rmse = 0.0;
    double nrmse = 0.0; // rmse / rms(original); 0 when the original is all-zero
};

template <typename T>
inline ErrorStats error_stats(const Matrix<T>& original, const Matrix<float>& decoded) {
    if (original.rows != decoded.rows || original.cols != decoded.cols) throw ShapeMismatch();
    ErrorStats s;
    double sq_err = 0.0, sq_ref = 0.0;
    const std::size_t n = original.size();
    for (std::size_t i = 0; i < n; ++i) {
        double ref;
        if constexpr (std::is_same_v<T, Half>) {
            ref = half_to_float(original.data[i]);
        } else {
            ref = static_cast<double>(original.data[i]);
        }
        const double err = ref - static_cast<double>(decoded.data[i]);
        s.max_abs = std::max(s.max_abs, std::abs(err));
        sq_err += err * err;
        sq_ref += ref * ref;
    }
    if (n > 0) {
        s.rmse = std::sqrt(sq_err / static_cast<double>(n));
        s.nrmse = sq_ref > 0.0 ? s.rmse / std::sqrt(sq_ref / static_cast<double>(n)) : 0.0;
    }
    return s;
}

} // namespace anda
