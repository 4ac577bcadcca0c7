#pragma once

// Bit-operations cost metric over precision combinations. One M-bit by
// W-bit multiply counts M*W bit operations; the FP16-INT4 baseline is 64
// BOPs per MAC, so a uniform combination [M,M,M,M] reduces BOPs by 16/M.

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "anda/errors.hpp"
#include "anda/group.hpp"

#include "json.hpp"

namespace anda {

enum class ModuleType : int { Qkv = 0, O = 1, U = 2, D = 3 };

inline constexpr std::array<const char*, 4> kModuleNames = {"qkv", "o", "u", "d"};

// Mantissa lengths [M_qkv, M_o, M_u, M_d].
struct PrecisionCombination {
    std::array<int, 4> m{8, 8, 8, 8};

    constexpr int& operator[](std::size_t i) { return m[i]; }
    constexpr int operator[](std::size_t i) const { return m[i]; }
    constexpr int of(ModuleType t) const { return m[static_cast<std::size_t>(t)]; }

    static constexpr PrecisionCombination uniform(int v) { return {{v, v, v, v}}; }

    constexpr bool valid() const {
        for (int v : m)
            if (v < kMinMantissaLen || v > kMaxMantissaLen) return false;
        return true;
    }

    std::string str() const {
        return "[" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "," +
               std::to_string(m[2]) + "," + std::to_string(m[3]) + "]";
    }

    auto operator<=>(const PrecisionCombination&) const = default;
};

// Transformer-layer shape: the four FP-INT GeMM module types and their MAC
// volumes. MAC counts are derived from the dimensions so the two can never
// disagree. The "llama" family fuses gate+up projections into the A_u
// module, doubling its output width.
struct ModelShape {
    std::string family = "opt"; // "opt" | "llama"
    uint64_t d_model = 0;
    uint64_t d_ff = 0;
    uint64_t n_layers = 1;
    int weight_bits = kDefaultWeightBits;

    struct GemmDims {
        uint64_t K = 0;
        uint64_t N = 0;
    };

    GemmDims dims(ModuleType t) const {
        switch (t) {
            case ModuleType::Qkv: return {d_model, 3 * d_model};
            case ModuleType::O: return {d_model, d_model};
            case ModuleType::U: return {d_model, family == "llama" ? 2 * d_ff : d_ff};
            case ModuleType::D: return {d_ff, d_model};
        }
        throw Error("bad module type");
    }

    uint64_t macs_per_token(ModuleType t) const {
        const GemmDims d = dims(t);
        return d.K * d.N;
    }

    uint64_t total_macs_per_token() const {
        uint64_t n = 0;
        for (int t = 0; t < 4; ++t) n += macs_per_token(static_cast<ModuleType>(t));
        return n;
    }

    static ModelShape opt(uint64_t d_model, uint64_t d_ff = 0, uint64_t layers = 1) {
        return ModelShape{"opt", d_model, d_ff ? d_ff : 4 * d_model, layers, kDefaultWeightBits};
    }

    static ModelShape llama(uint64_t d_model, uint64_t d_ff, uint64_t layers = 1) {
        return ModelShape{"llama", d_model, d_ff, layers, kDefaultWeightBits};
    }

    static ModelShape from_json(const nlohmann::json& j) {
        ModelShape s;
        s.family = j.at("family").get<std::string>();
        if (s.family != "opt" && s.family != "llama") throw Error("family must be opt or llama");
        s.d_model = j.at("d_model").get<uint64_t>();
        s.d_ff = j.at("d_ff").get<uint64_t>();
        s.n_layers = j.value("n_layers", uint64_t{1});
        s.weight_bits = j.value("weight_bits", kDefaultWeightBits);
        if (s.d_model == 0 || s.d_ff == 0 || s.n_layers == 0) throw Error("dims must be positive");
        return s;
    }
};

// Total bit operations for one token through the whole model.
inline uint64_t eval_bops(const PrecisionCombination& c, const ModelShape& shape) {
    uint64_t per_layer = 0;
    for (int t = 0; t < 4; ++t)
        per_layer += shape.macs_per_token(static_cast<ModuleType>(t)) *
                     static_cast<uint64_t>(c[static_cast<std::size_t>(t)]);
    return per_layer * static_cast<uint64_t>(shape.weight_bits) * shape.n_layers;
}

// Reduction over the FP16-weight-bit baseline (16-bit activation mantissa):
// 16 * sum(n) / sum(n * M). Scale-invariant in the MAC counts; uniform
// combinations give exactly 16/M.
inline double bops_reduction(const PrecisionCombination& c, const ModelShape& shape) {
    const uint64_t baseline =
        16u * shape.total_macs_per_token() * static_cast<uint64_t>(shape.weight_bits) * shape.n_layers;
    return static_cast<double>(baseline) / static_cast<double>(eval_bops(c, shape));
}

} // namespace anda
