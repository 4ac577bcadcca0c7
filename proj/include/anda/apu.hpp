#pragma once

// Functional model of the bit-serial processing unit: one bit-plane of 64
// activations enters the adder tree per cycle, each plane partial folds into
// a shift-accumulate register, and the integer group result is rescaled by
// the shared exponent and the weight-group scale before cross-group FP32
// accumulation.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "anda/errors.hpp"
#include "anda/half.hpp"
#include "anda/layout.hpp"
#include "anda/tensor.hpp"
#include "anda/weights.hpp"

namespace anda {

struct DotTrace {
    std::vector<int64_t> plane_partials; // adder-tree output per plane
    std::vector<int64_t> acc_per_cycle;  // accumulator after each fold step
    int64_t final_acc = 0;
    int cycles = 0; // == M for one group
};

// Exact wide-integer oracle for one group dot product.
inline int64_t group_dot_reference(const AndaGroup& g, std::span<const int8_t> w) {
    if (w.size() != g.size()) throw LengthMismatch();
    int64_t acc = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const int64_t m = g.signs[i] ? -static_cast<int64_t>(g.mantissas[i])
                                     : static_cast<int64_t>(g.mantissas[i]);
        acc += m * w[i];
    }
    return acc;
}

// First-element-then-bit-plane reduction: per plane, sum the sign-applied
// weights of the lanes whose bit is set, then fold acc <- acc*2 + partial.
inline std::pair<int64_t, DotTrace> group_dot_bitserial(std::span<const uint64_t> planes_msb_first,
                                                        uint64_t sign_plane,
                                                        std::span<const int8_t> w) {
    if (w.size() > kMaxLanes) throw LengthMismatch();
    // Weight signs are pre-applied so each plane partial is a plain sum.
    int32_t signed_w[kMaxLanes];
    for (std::size_t i = 0; i < w.size(); ++i)
        signed_w[i] = ((sign_plane >> i) & 1u) ? -static_cast<int32_t>(w[i]) : static_cast<int32_t>(w[i]);

    DotTrace trace;
    trace.plane_partials.reserve(planes_msb_first.size());
    trace.acc_per_cycle.reserve(planes_msb_first.size());
    int64_t acc = 0;
    for (uint64_t plane : planes_msb_first) {
        int64_t partial = 0;
        uint64_t bits = plane;
        while (bits) {
            const unsigned lane = static_cast<unsigned>(std::countr_zero(bits));
            bits &= bits - 1;
            if (lane >= w.size()) throw LengthMismatch("plane bit beyond weight vector");
            partial += signed_w[lane];
        }
        acc = acc * 2 + partial;
        trace.plane_partials.push_back(partial);
        trace.acc_per_cycle.push_back(acc);
    }
    trace.final_acc = acc;
    trace.cycles = static_cast<int>(planes_msb_first.size());
    return {acc, trace};
}

inline std::pair<int64_t, DotTrace> group_dot_bitserial(const PackedGroup& p, std::span<const int8_t> w) {
    return group_dot_bitserial(p.bit_planes, p.sign_plane, w);
}

// Shift the integer group dot onto the value grid and apply the INT-weight
// group scale: acc * 2^(E-(M-1)) * w_scale.
inline float scale_group_result(int64_t acc, int shared_exp, int mantissa_len, float w_scale) {
    if (!std::isfinite(w_scale)) throw NonFiniteInput("weight scale must be finite");
    const double r = static_cast<double>(acc) * std::ldexp(1.0, shared_exp - (mantissa_len - 1)) *
                     static_cast<double>(w_scale);
    const float out = static_cast<float>(r);
    if (!std::isfinite(out) && acc != 0) throw OverflowError();
    return out;
}

struct GemmConfig {
    enum class Out { Binary32, Binary16 };
    Out out = Out::Binary32; // Binary16 rounds each output to half (RNE)
};

// binary32 reference GeMM: half activations promoted exactly, products
// accumulated in binary32 in ascending-K order.
inline Matrix<float> gemm_fp16_reference(const Matrix<Half>& a, const Matrix<float>& w_dequant) {
    if (a.cols != w_dequant.rows) throw ShapeMismatch();
    Matrix<float> af(a.rows, a.cols);
    for (std::size_t i = 0; i < a.size(); ++i) af.data[i] = half_to_float(a.data[i]);
    Matrix<float> out(a.rows, w_dequant.cols);
    for (std::size_t t = 0; t < a.rows; ++t) {
        for (std::size_t n = 0; n < w_dequant.cols; ++n) {
            float acc = 0.0f;
            for (std::size_t k = 0; k < a.cols; ++k) acc += af.at(t, k) * w_dequant.at(k, n);
            out.at(t, n) = acc;
        }
    }
    return out;
}

// Anda GeMM: exact integer dot within each activation group, scaled once per
// group, then FP32 accumulation across groups in ascending-K order.
inline Matrix<float> gemm_anda(const AndaTensor& a, const QuantizedWeightMatrix& w,
                               const GemmConfig& cfg = {}) {
    if (a.cols != w.K) throw ShapeMismatch("activation cols != weight K");
    const std::size_t gs = a.params.group_size;
    if (w.weight_group_size % gs != 0)
        throw ShapeMismatch("weight group size must be a multiple of the activation group size");

    const std::size_t gpr = a.groups_per_row();
    Matrix<float> out(a.rows, w.N);
    std::vector<int8_t> wcol(gs);
    for (std::size_t t = 0; t < a.rows; ++t) {
        for (std::size_t n = 0; n < w.N; ++n) {
            float acc = 0.0f;
            for (std::size_t g = 0; g < gpr; ++g) {
                const AndaGroup& grp = a.groups[t * gpr + g];
                const std::size_t k0 = g * gs;
                const std::size_t len = std::min(gs, a.cols - k0);
                for (std::size_t i = 0; i < gs; ++i)
                    wcol[i] = i < len ? w.values.at(k0 + i, n) : int8_t{0};
                const int64_t dot = group_dot_reference(grp, wcol);
                acc += scale_group_result(dot, grp.shared_exp, grp.mantissa_len, w.scale_at(k0, n));
            }
            if (cfg.out == GemmConfig::Out::Binary16) acc = half_to_float(float_to_half(acc));
            out.at(t, n) = acc;
        }
    }
    return out;
}

// Uniform-BFP convenience wrapper (FIGNA- / VS-Quant-style baselines):
// encode at a single mantissa length, then run the Anda GeMM.
inline Matrix<float> gemm_bfp_uniform(const Matrix<Half>& a, int mantissa_len,
                                      const QuantizedWeightMatrix& w, const GemmConfig& cfg = {}) {
    return gemm_anda(encode_tensor(a, AndaParams{kDefaultGroupSize, mantissa_len}), w, cfg);
}

} // namespace anda
