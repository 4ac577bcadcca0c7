#pragma once

// Synthetic calibration workloads and the built-in proxy accuracy oracle.
//
// Randomness is pinned for cross-run reproducibility: xoshiro256** seeded
// through splitmix64, uniforms taken as the top 53 bits, gaussians via
// Box-Muller with the cosine branch drawn first. Draw order per module is
// documented in gen_synthetic_layer.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "anda/apu.hpp"
#include "anda/bops.hpp"
#include "anda/container.hpp"
#include "anda/errors.hpp"
#include "anda/search.hpp"
#include "anda/tensor.hpp"
#include "anda/weights.hpp"

#include "json.hpp"

namespace anda {

// xoshiro256** 1.0 (Blackman & Vigna), state initialized with four
// successive splitmix64 outputs of the seed.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9E3779B97F4A7C15ull;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            word = z ^ (z >> 31);
        }
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; } // [0,1)
    double uniform_open() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; } // (0,1]

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct WorkloadModule {
    ModuleType type = ModuleType::Qkv;
    Matrix<Half> activations;      // tokens x K
    QuantizedWeightMatrix weights; // K x N
};

struct CalibrationWorkload {
    std::string family = "opt";
    uint64_t d_model = 0;
    uint64_t d_ff = 0;
    uint64_t tokens = 0;
    uint64_t seed = 0;
    bool chained = false; // feed module outputs forward (requires conforming shapes)
    std::vector<WorkloadModule> modules;

    ModelShape shape() const {
        ModelShape s;
        s.family = family;
        s.d_model = d_model;
        s.d_ff = d_ff;
        s.n_layers = 1;
        return s;
    }
};

// Log-normal channel scales mimic LLM outlier channels; weights are
// Gaussian scaled by 1/sqrt(K) and quantized with the RTN stand-in.
// Draw order per module (qkv, o, u, d): K channel scales, then activations
// row-major, then weights row-major.
inline CalibrationWorkload gen_synthetic_layer(uint64_t seed, uint64_t d_model, uint64_t d_ff,
                                               uint64_t tokens, const std::string& family) {
    if (d_model == 0 || d_ff == 0 || tokens == 0) throw Error("dims must be >= 1");
    if (family != "opt" && family != "llama") throw Error("family must be opt or llama");

    constexpr double kChannelLogSigma = 1.0;

    CalibrationWorkload w;
    w.family = family;
    w.d_model = d_model;
    w.d_ff = d_ff;
    w.tokens = tokens;
    w.seed = seed;

    Xoshiro256ss rng(seed);
    ModelShape shape = w.shape();
    for (int t = 0; t < 4; ++t) {
        const auto mt = static_cast<ModuleType>(t);
        const ModelShape::GemmDims dims = shape.dims(mt);
        WorkloadModule mod;
        mod.type = mt;

        std::vector<double> channel_scale(dims.K);
        for (auto& s : channel_scale) s = std::exp(kChannelLogSigma * rng.gaussian());

        mod.activations = Matrix<Half>(tokens, dims.K);
        for (uint64_t r = 0; r < tokens; ++r)
            for (uint64_t k = 0; k < dims.K; ++k)
                mod.activations.at(r, k) =
                    float_to_half(static_cast<float>(rng.gaussian() * channel_scale[k]));

        Matrix<float> wf(dims.K, dims.N);
        const double w_scale = 1.0 / std::sqrt(static_cast<double>(dims.K));
        for (auto& v : wf.data) v = static_cast<float>(rng.gaussian() * w_scale);
        mod.weights = quantize_rtn(wf);

        w.modules.push_back(std::move(mod));
    }
    return w;
}

// Proxy accuracy: MAC-weighted mean output NRMSE of the Anda GeMM against
// the binary32 reference, mapped to (0,1] by 1/(1+nrmse). The FP16 sentinel
// scores exactly 1. Chained workloads feed each module's output forward
// (through FP16 storage) on both paths instead of using stored activations.
inline double proxy_accuracy(const CalibrationWorkload& w,
                             const std::optional<PrecisionCombination>& c) {
    if (!c) return 1.0;
    if (!c->valid()) throw Error("invalid combination");
    const ModelShape shape = w.shape();
    double weighted = 0.0;
    double total_n = 0.0;
    Matrix<Half> ref_in, anda_in;
    auto to_half = [](const Matrix<float>& m) {
        Matrix<Half> h(m.rows, m.cols);
        for (std::size_t i = 0; i < m.size(); ++i) h.data[i] = float_to_half(m.data[i]);
        return h;
    };
    for (std::size_t mi = 0; mi < w.modules.size(); ++mi) {
        const WorkloadModule& mod = w.modules[mi];
        const bool use_chain = w.chained && mi > 0;
        if (use_chain && ref_in.cols != mod.weights.K)
            throw ShapeMismatch("chained workload: module output does not feed the next input");
        const Matrix<Half>& ref_act = use_chain ? ref_in : mod.activations;
        const Matrix<Half>& anda_act = use_chain ? anda_in : mod.activations;
        const int m = c->of(mod.type);
        const Matrix<float> ref = gemm_fp16_reference(ref_act, dequantize(mod.weights));
        const Matrix<float> got =
            gemm_anda(encode_tensor(anda_act, AndaParams{kDefaultGroupSize, m}), mod.weights);
        const double nrmse = error_stats(ref, got).nrmse;
        const double n = static_cast<double>(shape.macs_per_token(mod.type));
        weighted += n * nrmse;
        total_n += n;
        if (w.chained) {
            ref_in = to_half(ref);
            anda_in = to_half(got);
        }
    }
    const double agg = total_n > 0 ? weighted / total_n : 0.0;
    return 1.0 / (1.0 + agg);
}

inline OracleFn make_proxy_oracle(CalibrationWorkload w) {
    auto shared = std::make_shared<CalibrationWorkload>(std::move(w));
    return make_caching_oracle(
        [shared](const std::optional<PrecisionCombination>& c) { return proxy_accuracy(*shared, c); });
}

// ---- workload directory I/O --------------------------------------------------

// Layout: <dir>/workload.json plus per-module .andt files. The manifest
// records the generator inputs so reruns are reproducible.
inline void save_workload(const CalibrationWorkload& w, const std::string& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["family"] = w.family;
    j["d_model"] = w.d_model;
    j["d_ff"] = w.d_ff;
    j["tokens"] = w.tokens;
    j["seed"] = w.seed;
    j["chained"] = w.chained;
    nlohmann::json mods = nlohmann::json::array();
    for (const WorkloadModule& m : w.modules) {
        const std::string name = kModuleNames[static_cast<std::size_t>(m.type)];
        save_andt(to_raw(m.activations), dir + "/" + name + ".act.andt");
        save_weights(m.weights, dir + "/" + name + ".weights.andt");
        mods.push_back({{"type", name},
                        {"activations", name + ".act.andt"},
                        {"weights", name + ".weights.andt"},
                        {"weight_group_size", m.weights.weight_group_size},
                        {"weight_bits", m.weights.bit_width}});
    }
    j["modules"] = mods;
    std::ofstream f(dir + "/workload.json");
    if (!f) throw Error("cannot write workload manifest");
    f << j.dump(2) << "\n";
}

inline CalibrationWorkload load_workload(const std::string& dir) {
    std::ifstream f(dir + "/workload.json");
    if (!f) throw Error("cannot open workload manifest in " + dir);
    nlohmann::json j = nlohmann::json::parse(f);
    CalibrationWorkload w;
    w.family = j.at("family").get<std::string>();
    w.d_model = j.at("d_model").get<uint64_t>();
    w.d_ff = j.at("d_ff").get<uint64_t>();
    w.tokens = j.at("tokens").get<uint64_t>();
    w.seed = j.value("seed", uint64_t{0});
    w.chained = j.value("chained", false);
    for (const auto& mj : j.at("modules")) {
        WorkloadModule m;
        const std::string type = mj.at("type").get<std::string>();
        bool found = false;
        for (std::size_t i = 0; i < kModuleNames.size(); ++i)
            if (type == kModuleNames[i]) {
                m.type = static_cast<ModuleType>(i);
                found = true;
            }
        if (!found) throw Error("unknown module type: " + type);
        m.activations = to_half_matrix(load_andt(dir + "/" + mj.at("activations").get<std::string>()));
        m.weights = load_weights(dir + "/" + mj.at("weights").get<std::string>(),
                                 mj.value("weight_group_size", kDefaultWeightGroupSize),
                                 mj.value("weight_bits", kDefaultWeightBits));
        w.modules.push_back(std::move(m));
    }
    return w;
}

} // namespace anda
