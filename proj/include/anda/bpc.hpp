#pragma once

// Cycle-by-cycle model of the bit-plane compressor's parallel-to-serial
// mantissa aligner. Each element holds an exponent-difference counter and an
// 11-bit significand register; while the counter is nonzero the element
// emits 0 and decrements, once it hits zero the register's MSB is shifted
// out each cycle. The emitted planes are bit-identical to the direct
// encoder's output, MSB-first.

#include <cstdint>
#include <span>
#include <ostream>
#include <vector>

#include "anda/group.hpp"
#include "anda/layout.hpp"
#include "anda/matrix.hpp"
#include "anda/tensor.hpp"

namespace anda {

struct BpcConfig {
    std::size_t lanes = 16;      // parallel lanes, one group each
    std::size_t lane_width = 64; // grouped values per lane
    int latency = 0;             // pipeline cycles before the first plane
};

struct SerialCompressResult {
    AndaGroup group;
    std::vector<uint64_t> emitted_planes; // lane bitmask per mantissa cycle, MSB-first
    int cycles = 0;                       // M + latency
};

inline SerialCompressResult compress_group_serial(std::span<const Half> values, int mantissa_len,
                                                  std::size_t group_size = kDefaultGroupSize,
                                                  int latency = 0) {
    if (mantissa_len < kMinMantissaLen || mantissa_len > kMaxMantissaLen)
        throw Error("mantissa_len out of range 1..16");
    if (group_size > kMaxLanes) throw GroupTooWide();
    if (values.size() > group_size) throw Error("more values than group_size");

    // Field extraction + max-exponent catcher.
    int max_exp = kZeroGroupExp;
    for (Half h : values) {
        if (!h.is_finite()) throw NonFiniteInput();
        if (!h.is_zero() && h.unbiased_exp() > max_exp) max_exp = h.unbiased_exp();
    }

    constexpr int kNeverEmits = -1; // sentinel for exact zeros
    std::vector<int> diff(values.size());
    std::vector<uint16_t> shift_reg(values.size()); // 11-bit significand, MSB at bit 10
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].is_zero()) {
            diff[i] = kNeverEmits;
            shift_reg[i] = 0;
        } else {
            diff[i] = max_exp - values[i].unbiased_exp();
            shift_reg[i] = static_cast<uint16_t>(values[i].significand11());
        }
    }

    SerialCompressResult res;
    res.group.shared_exp = max_exp;
    res.group.mantissa_len = mantissa_len;
    res.group.signs.assign(group_size, 0);
    res.group.mantissas.assign(group_size, 0);
    for (std::size_t i = 0; i < values.size(); ++i)
        res.group.signs[i] = static_cast<uint8_t>(values[i].sign());

    res.emitted_planes.reserve(static_cast<std::size_t>(mantissa_len));
    for (int cycle = 0; cycle < mantissa_len; ++cycle) {
        uint64_t plane = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (diff[i] == kNeverEmits) continue;
            if (diff[i] > 0) {
                --diff[i];
                continue; // emits 0 this cycle
            }
            const uint16_t bit = (shift_reg[i] >> 10) & 1u;
            shift_reg[i] = static_cast<uint16_t>((shift_reg[i] << 1) & 0x7FFu);
            if (bit) {
                plane |= uint64_t{1} << i;
                res.group.mantissas[i] |= uint16_t(1) << (mantissa_len - 1 - cycle);
            }
        }
        res.emitted_planes.push_back(plane);
    }
    res.cycles = mantissa_len + latency;
    return res;
}

struct TensorCompressResult {
    AndaTensor tensor;
    uint64_t cycles = 0;
};

// Whole-tensor compression: lane batches of groups run in lock step, each
// batch costing M + latency cycles regardless of data values.
inline TensorCompressResult compress_tensor(const Matrix<Half>& a, const AndaParams& params,
                                            const BpcConfig& cfg = {}) {
    if (cfg.lanes < 1 || cfg.lane_width > kMaxLanes) throw Error("invalid BpcConfig");
    if (params.group_size > cfg.lane_width) throw GroupTooWide();

    TensorCompressResult res;
    res.tensor.rows = a.rows;
    res.tensor.cols = a.cols;
    res.tensor.params = params;
    const std::size_t gs = params.group_size;
    const std::size_t gpr = res.tensor.groups_per_row();
    res.tensor.groups.reserve(a.rows * gpr);
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t g = 0; g < gpr; ++g) {
            const std::size_t begin = g * gs;
            const std::size_t len = std::min(gs, a.cols - begin);
            std::span<const Half> chunk(&a.at(r, begin), len);
            res.tensor.groups.push_back(compress_group_serial(chunk, params.mantissa_len, gs).group);
        }
    }
    const uint64_t group_count = res.tensor.groups.size();
    const uint64_t batches = (group_count + cfg.lanes - 1) / cfg.lanes;
    res.cycles = batches * static_cast<uint64_t>(params.mantissa_len + cfg.latency);
    return res;
}

// Debug trace dump, one line per cycle. Format is not stable.
inline void dump_emission_trace(const SerialCompressResult& r, std::ostream& os) {
    for (std::size_t c = 0; c < r.emitted_planes.size(); ++c) {
        os << "cycle " << c << ": ";
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(r.emitted_planes[c]));
        os << buf << "\n";
    }
}

} // namespace anda
