#pragma once

// Parametric cycle and energy model of the Anda system (16x16 APU array,
// bit-plane compressor, split activation buffer) and of the FP-FP, FP-INT,
// iFPU, and FIGNA baselines. Timing is roofline style: total cycles are the
// maximum of compute and DRAM-transfer cycles plus a pipeline fill term.
// All baselines are normalized to Anda's M=16 peak (1024 MACs/cycle with the
// default 16x16x64 array).
//
// Cost defaults carry provenance tags in the shipped JSON config; nothing
// here reproduces synthesized power numbers, only model-internal closed
// forms and directional trends.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "anda/bops.hpp"
#include "anda/errors.hpp"
#include "anda/layout.hpp"
#include "anda/search.hpp"

#include "json.hpp"

namespace anda {

struct ArchConfig {
    std::size_t mxu_rows = 16;
    std::size_t mxu_cols = 16;
    std::size_t apu_adder_width = 64; // equals the activation group size
    double clock_hz = 285e6;
    uint64_t act_buffer_mant_bits = uint64_t{8} << 20; // 1 MB
    uint64_t act_buffer_exp_bits = uint64_t{1} << 20;  // 0.125 MB
    uint64_t weight_buffer_bits = uint64_t{8} << 20;   // 1 MB
    double dram_bytes_per_sec = 256e9;
    std::size_t bpc_lanes = 16;
    int pipeline_fill_cycles = 0;
    int bpc_latency_cycles = 0;
    bool bpc_overlap = true;        // output compression hidden behind compute
    int ifpu_cycles_per_tile = 4;   // bit-serial over the 4 weight bits

    std::size_t peak_macs_per_cycle() const { return mxu_rows * mxu_cols * apu_adder_width / 16; }
};

struct EnergyParams {
    double dram_pj_per_bit = 3.9;
    double sram_pj_per_bit = 0.2;
    double mxu_pj_per_apu_cycle = 0.745;
    double bpc_pj_per_cycle = 3.72;
    double vector_pj_per_token = 0.0; // lump term for non-linear functions
    double fpfp_mac_multiplier = 1.67;
    double fpint_mac_multiplier = 1.60;
    double ifpu_mac_multiplier = 1.41;
    double figna_mac_multiplier = 0.87;
    double ifpu_conversion_pj_per_group = 1.0;
};

struct SimMode {
    enum class Kind { Anda, FpFp, FpInt, Ifpu, Figna };
    Kind kind = Kind::Anda;
    int mantissa_len = 16; // Anda M / FIGNA compute mantissa; unused otherwise

    static SimMode anda(int m) { return {Kind::Anda, m}; }
    static SimMode fpfp() { return {Kind::FpFp, 16}; }
    static SimMode fpint() { return {Kind::FpInt, 16}; }
    static SimMode ifpu() { return {Kind::Ifpu, 16}; }
    static SimMode figna(int m = 14) { return {Kind::Figna, m}; }

    bool stores_fp16_activations() const { return kind != Kind::Anda; }

    std::string name() const {
        switch (kind) {
            case Kind::Anda: return "anda";
            case Kind::FpFp: return "fpfp";
            case Kind::FpInt: return "fpint";
            case Kind::Ifpu: return "ifpu";
            case Kind::Figna: return mantissa_len == 14 ? "figna" : "figna-m" + std::to_string(mantissa_len);
        }
        return "?";
    }
};

struct Traffic {
    uint64_t act_bits = 0;
    uint64_t weight_bits = 0;
    uint64_t out_bits = 0;

    uint64_t total() const { return act_bits + weight_bits + out_bits; }
};

struct EnergyBreakdown {
    double compute_pj = 0.0;
    double sram_pj = 0.0;
    double dram_pj = 0.0;

    double total() const { return compute_pj + sram_pj + dram_pj; }
};

struct SimReport {
    std::string platform;
    double compute_cycles = 0.0;
    double memory_cycles = 0.0;
    double fill_cycles = 0.0;
    double total_cycles = 0.0;
    uint64_t macs = 0;
    Traffic dram;
    Traffic sram;
    EnergyBreakdown energy;
    // Filled when the report is normalized against a baseline run.
    std::string baseline;
    double speedup_vs_baseline = 0.0;
    double energy_eff_vs_baseline = 0.0;

    void add(const SimReport& o) {
        compute_cycles += o.compute_cycles;
        memory_cycles += o.memory_cycles;
        fill_cycles += o.fill_cycles;
        total_cycles += o.total_cycles;
        macs += o.macs;
        dram.act_bits += o.dram.act_bits;
        dram.weight_bits += o.dram.weight_bits;
        dram.out_bits += o.dram.out_bits;
        sram.act_bits += o.sram.act_bits;
        sram.weight_bits += o.sram.weight_bits;
        sram.out_bits += o.sram.out_bits;
        energy.compute_pj += o.energy.compute_pj;
        energy.sram_pj += o.energy.sram_pj;
        energy.dram_pj += o.energy.dram_pj;
    }
};

namespace detail {

inline uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

// Energy per full MAC, normalized to one APU running at M=16.
inline double pj_per_mac(const SimMode& mode, const ArchConfig& arch, const EnergyParams& e) {
    const double anda_m16 = e.mxu_pj_per_apu_cycle * 16.0 / static_cast<double>(arch.apu_adder_width);
    switch (mode.kind) {
        case SimMode::Kind::Anda:
            return e.mxu_pj_per_apu_cycle * mode.mantissa_len / static_cast<double>(arch.apu_adder_width);
        case SimMode::Kind::FpFp: return anda_m16 * e.fpfp_mac_multiplier;
        case SimMode::Kind::FpInt: return anda_m16 * e.fpint_mac_multiplier;
        case SimMode::Kind::Ifpu: return anda_m16 * e.ifpu_mac_multiplier;
        case SimMode::Kind::Figna:
            return anda_m16 * (mode.mantissa_len / 16.0) * e.figna_mac_multiplier;
    }
    return anda_m16;
}

} // namespace detail

// One GeMM of T x K activations against K x N INT4 weights under the given
// platform mode. Output-stationary tiling: 16-row activation strips stream
// once from DRAM and are re-read from SRAM per 16-column output tile;
// weights are fetched once if the whole matrix fits the weight buffer,
// otherwise once per strip.
inline SimReport simulate_gemm(uint64_t T, uint64_t N, uint64_t K, const SimMode& mode,
                               const ArchConfig& arch, const EnergyParams& energy) {
    if (T == 0 || N == 0 || K == 0) throw Error("gemm dims must be >= 1");
    if ((mode.kind == SimMode::Kind::Anda || mode.kind == SimMode::Kind::Figna) &&
        (mode.mantissa_len < kMinMantissaLen || mode.mantissa_len > kMaxMantissaLen))
        throw Error("mantissa length out of range 1..16");
    using detail::ceil_div;

    SimReport r;
    r.platform = mode.name();
    r.macs = T * N * K;

    const uint64_t gs = arch.apu_adder_width;
    const uint64_t tiles_t = ceil_div(T, arch.mxu_rows);
    const uint64_t tiles_n = ceil_div(N, arch.mxu_cols);
    const uint64_t kchunks = ceil_div(K, gs);
    const uint64_t tile_groups = tiles_t * tiles_n * kchunks;

    // Compute cycles per 16x16xGS tile-group.
    uint64_t cycles_per_tile = 16;
    switch (mode.kind) {
        case SimMode::Kind::Anda: cycles_per_tile = static_cast<uint64_t>(mode.mantissa_len); break;
        case SimMode::Kind::FpFp:
        case SimMode::Kind::FpInt: cycles_per_tile = 16; break;
        case SimMode::Kind::Ifpu: cycles_per_tile = static_cast<uint64_t>(arch.ifpu_cycles_per_tile); break;
        case SimMode::Kind::Figna: cycles_per_tile = static_cast<uint64_t>(mode.mantissa_len); break;
    }
    r.compute_cycles = static_cast<double>(tile_groups * cycles_per_tile);

    // Activation footprint.
    const int m = mode.mantissa_len;
    const uint64_t group_bits = mode.stores_fp16_activations()
                                    ? gs * 16
                                    : storage_bits(m, gs, 1); // 64*(M+1)+8
    const uint64_t row_bits = kchunks * group_bits;

    // A 16-row strip must fit on chip (sign+mantissa planes in the mantissa
    // buffer, exponent bytes in the exponent buffer; FP16 modes use both).
    if (mode.kind == SimMode::Kind::Anda) {
        const uint64_t strip_mant = arch.mxu_rows * kchunks * 64u * (static_cast<uint64_t>(m) + 1);
        const uint64_t strip_exp = arch.mxu_rows * kchunks * 8u;
        if (strip_mant > arch.act_buffer_mant_bits || strip_exp > arch.act_buffer_exp_bits)
            throw TileExceedsBuffer("activation strip of K=" + std::to_string(K) +
                                    " does not fit the activation buffer");
    } else {
        const uint64_t strip_bits = arch.mxu_rows * K * 16;
        if (strip_bits > arch.act_buffer_mant_bits + arch.act_buffer_exp_bits)
            throw TileExceedsBuffer("activation strip of K=" + std::to_string(K) +
                                    " does not fit the activation buffer");
    }

    r.dram.act_bits = T * row_bits;             // each strip fetched once
    r.sram.act_bits = tiles_n * T * row_bits;   // re-streamed per output tile

    // Weights: INT4 plus one binary32 scale per (128-group, column) in DRAM.
    const uint64_t w_scale_bits = ceil_div(K, kDefaultWeightGroupSize) * N * 32;
    const uint64_t w_int_bits = K * N * 4;
    const uint64_t w_total_bits = w_int_bits + w_scale_bits;
    const uint64_t w_fetches = w_total_bits <= arch.weight_buffer_bits ? 1 : tiles_t;
    r.dram.weight_bits = w_fetches * w_total_bits;
    // FP-FP converts INT4 weights to FP16 before compute, so its on-chip
    // stream is 16 bits per weight; the others consume INT4 directly.
    const uint64_t w_sram_elem_bits = mode.kind == SimMode::Kind::FpFp ? 16 : 4;
    r.sram.weight_bits = tiles_t * (K * N * w_sram_elem_bits + w_scale_bits);

    // Outputs leave in the platform's storage format, written once.
    uint64_t out_bits;
    if (mode.kind == SimMode::Kind::Anda) {
        const uint64_t out_groups = T * ceil_div(N, gs);
        out_bits = out_groups * storage_bits(m, gs, 1);
    } else {
        out_bits = T * N * 16;
    }
    r.dram.out_bits = out_bits;
    r.sram.out_bits = out_bits;

    const double bytes_per_cycle = arch.dram_bytes_per_sec / arch.clock_hz;
    r.memory_cycles = static_cast<double>(r.dram.total()) / 8.0 / bytes_per_cycle;

    // Output compression through the BPC (Anda only). Energy is always
    // spent; the cycles hide behind compute unless overlap is disabled.
    double bpc_cycles = 0.0;
    if (mode.kind == SimMode::Kind::Anda) {
        const uint64_t out_groups = T * ceil_div(N, gs);
        bpc_cycles = static_cast<double>(ceil_div(out_groups, arch.bpc_lanes) *
                                         static_cast<uint64_t>(m + arch.bpc_latency_cycles));
    }

    r.fill_cycles = arch.pipeline_fill_cycles;
    r.total_cycles = std::max(r.compute_cycles, r.memory_cycles) + r.fill_cycles;
    if (mode.kind == SimMode::Kind::Anda && !arch.bpc_overlap) r.total_cycles += bpc_cycles;

    r.energy.compute_pj = static_cast<double>(r.macs) * detail::pj_per_mac(mode, arch, energy);
    if (mode.kind == SimMode::Kind::Anda) r.energy.compute_pj += bpc_cycles * energy.bpc_pj_per_cycle;
    if (mode.kind == SimMode::Kind::Ifpu) {
        // Dynamic FP16 -> extended-BFP conversion at every SRAM group read.
        const uint64_t conversions = tiles_n * T * kchunks;
        r.energy.compute_pj += static_cast<double>(conversions) * energy.ifpu_conversion_pj_per_group;
    }
    r.energy.sram_pj = static_cast<double>(r.sram.total()) * energy.sram_pj_per_bit;
    r.energy.dram_pj = static_cast<double>(r.dram.total()) * energy.dram_pj_per_bit;
    return r;
}

namespace detail {

// Per-module mantissa length for a platform: Anda reads the combination,
// FIGNA variants use their fixed compute mantissa, FP modes are 16-bit.
inline int module_mantissa(const SimMode& mode, const PrecisionCombination& c, ModuleType t) {
    return mode.kind == SimMode::Kind::Anda ? c.of(t) : mode.mantissa_len;
}

} // namespace detail

// Whole-model run: sums the four module GeMMs across layers. BPC
// inter-module compression is part of each GeMM's output path; the vector
// unit contributes a configurable lump energy per token per layer.
inline SimReport simulate_model_mode(const ModelShape& shape, const PrecisionCombination& c,
                                     uint64_t tokens, const SimMode& mode, const ArchConfig& arch,
                                     const EnergyParams& energy) {
    SimReport total;
    total.platform = mode.name();
    if (mode.kind == SimMode::Kind::Anda && !c.valid())
        throw Error("invalid precision combination " + c.str());
    if (tokens == 0) return total;
    for (int t = 0; t < 4; ++t) {
        const auto mt = static_cast<ModuleType>(t);
        const ModelShape::GemmDims d = shape.dims(mt);
        SimMode m = mode;
        m.mantissa_len = detail::module_mantissa(mode, c, mt);
        SimReport rep = simulate_gemm(tokens, d.N, d.K, m, arch, energy);
        rep.compute_cycles *= static_cast<double>(shape.n_layers);
        rep.memory_cycles *= static_cast<double>(shape.n_layers);
        rep.fill_cycles *= static_cast<double>(shape.n_layers);
        rep.total_cycles *= static_cast<double>(shape.n_layers);
        rep.macs *= shape.n_layers;
        rep.dram.act_bits *= shape.n_layers;
        rep.dram.weight_bits *= shape.n_layers;
        rep.dram.out_bits *= shape.n_layers;
        rep.sram.act_bits *= shape.n_layers;
        rep.sram.weight_bits *= shape.n_layers;
        rep.sram.out_bits *= shape.n_layers;
        rep.energy.compute_pj *= static_cast<double>(shape.n_layers);
        rep.energy.sram_pj *= static_cast<double>(shape.n_layers);
        rep.energy.dram_pj *= static_cast<double>(shape.n_layers);
        total.add(rep);
    }
    total.energy.compute_pj +=
        energy.vector_pj_per_token * static_cast<double>(tokens) * static_cast<double>(shape.n_layers);
    return total;
}

inline SimReport simulate_model(const ModelShape& shape, const PrecisionCombination& c,
                                uint64_t tokens, const ArchConfig& arch, const EnergyParams& energy) {
    return simulate_model_mode(shape, c, tokens, SimMode::anda(0), arch, energy);
}

inline void normalize_vs(SimReport& r, const SimReport& baseline) {
    r.baseline = baseline.platform;
    r.speedup_vs_baseline = r.total_cycles > 0 ? baseline.total_cycles / r.total_cycles : 0.0;
    r.energy_eff_vs_baseline = r.energy.total() > 0 ? baseline.energy.total() / r.energy.total() : 0.0;
}

// Cross-platform comparison at one workload, all ratios normalized to FP-FP.
inline std::vector<SimReport> compare(const ModelShape& shape, const PrecisionCombination& c,
                                      uint64_t tokens, const ArchConfig& arch,
                                      const EnergyParams& energy) {
    const std::vector<SimMode> platforms = {SimMode::fpfp(),     SimMode::fpint(),   SimMode::ifpu(),
                                            SimMode::figna(14),  SimMode::figna(11), SimMode::figna(8),
                                            SimMode::anda(0)};
    std::vector<SimReport> reports;
    reports.reserve(platforms.size());
    for (const SimMode& p : platforms)
        reports.push_back(simulate_model_mode(shape, c, tokens, p, arch, energy));
    const SimReport fpfp = reports.front();
    for (SimReport& r : reports) normalize_vs(r, fpfp);
    return reports;
}

struct TradeoffPoint {
    double delta = 0.0;
    bool feasible = false;
    PrecisionCombination comb;
    double speedup_vs_fpfp = 0.0;
    double energy_eff_vs_fpfp = 0.0;
};

// Accuracy/performance trade-off curve: run the search per tolerance, then
// simulate the chosen combination. Infeasible tolerances are flagged.
inline std::vector<TradeoffPoint> tradeoff_sweep(const ModelShape& shape, const OracleFn& oracle,
                                                 const std::vector<double>& deltas, uint64_t tokens,
                                                 const ArchConfig& arch, const EnergyParams& energy,
                                                 SearchConfig cfg = {}) {
    if (deltas.empty()) throw Error("delta list must be non-empty");
    const OracleFn cached = make_caching_oracle(oracle);
    std::vector<TradeoffPoint> curve;
    const SimReport fpfp =
        simulate_model_mode(shape, PrecisionCombination::uniform(16), tokens, SimMode::fpfp(), arch, energy);
    for (double d : deltas) {
        TradeoffPoint p;
        p.delta = d;
        cfg.delta = d;
        const SearchResult res = search(shape, cached, cfg);
        if (res.best) {
            p.feasible = true;
            p.comb = *res.best;
            SimReport rep = simulate_model(shape, p.comb, tokens, arch, energy);
            normalize_vs(rep, fpfp);
            p.speedup_vs_fpfp = rep.speedup_vs_baseline;
            p.energy_eff_vs_fpfp = rep.energy_eff_vs_baseline;
        }
        curve.push_back(p);
    }
    return curve;
}

// ---- config I/O -------------------------------------------------------------

namespace detail {

// Config entries may be plain numbers or tagged objects
// {"value": x, "provenance": "...", "note": "..."}.
inline double cfg_num(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_object()) return v.at("value").get<double>();
    return v.get<double>();
}

} // namespace detail

inline ArchConfig arch_from_json(const nlohmann::json& j) {
    ArchConfig a;
    a.mxu_rows = static_cast<std::size_t>(detail::cfg_num(j, "mxu_rows", static_cast<double>(a.mxu_rows)));
    a.mxu_cols = static_cast<std::size_t>(detail::cfg_num(j, "mxu_cols", static_cast<double>(a.mxu_cols)));
    a.apu_adder_width =
        static_cast<std::size_t>(detail::cfg_num(j, "apu_adder_width", static_cast<double>(a.apu_adder_width)));
    a.clock_hz = detail::cfg_num(j, "clock_hz", a.clock_hz);
    a.act_buffer_mant_bits =
        static_cast<uint64_t>(detail::cfg_num(j, "act_buffer_mant_bits", static_cast<double>(a.act_buffer_mant_bits)));
    a.act_buffer_exp_bits =
        static_cast<uint64_t>(detail::cfg_num(j, "act_buffer_exp_bits", static_cast<double>(a.act_buffer_exp_bits)));
    a.weight_buffer_bits =
        static_cast<uint64_t>(detail::cfg_num(j, "weight_buffer_bits", static_cast<double>(a.weight_buffer_bits)));
    a.dram_bytes_per_sec = detail::cfg_num(j, "dram_bytes_per_sec", a.dram_bytes_per_sec);
    a.bpc_lanes = static_cast<std::size_t>(detail::cfg_num(j, "bpc_lanes", static_cast<double>(a.bpc_lanes)));
    a.pipeline_fill_cycles =
        static_cast<int>(detail::cfg_num(j, "pipeline_fill_cycles", a.pipeline_fill_cycles));
    a.bpc_latency_cycles = static_cast<int>(detail::cfg_num(j, "bpc_latency_cycles", a.bpc_latency_cycles));
    if (j.contains("bpc_overlap")) a.bpc_overlap = j.at("bpc_overlap").is_object()
                                                       ? j.at("bpc_overlap").at("value").get<bool>()
                                                       : j.at("bpc_overlap").get<bool>();
    a.ifpu_cycles_per_tile = static_cast<int>(detail::cfg_num(j, "ifpu_cycles_per_tile", a.ifpu_cycles_per_tile));
    if (a.mxu_rows == 0 || a.mxu_cols == 0 || a.apu_adder_width == 0 || a.apu_adder_width > kMaxLanes ||
        a.clock_hz <= 0 || a.dram_bytes_per_sec <= 0 || a.bpc_lanes == 0)
        throw Error("invalid ArchConfig");
    return a;
}

inline EnergyParams energy_from_json(const nlohmann::json& j) {
    EnergyParams e;
    e.dram_pj_per_bit = detail::cfg_num(j, "dram_pj_per_bit", e.dram_pj_per_bit);
    e.sram_pj_per_bit = detail::cfg_num(j, "sram_pj_per_bit", e.sram_pj_per_bit);
    e.mxu_pj_per_apu_cycle = detail::cfg_num(j, "mxu_pj_per_apu_cycle", e.mxu_pj_per_apu_cycle);
    e.bpc_pj_per_cycle = detail::cfg_num(j, "bpc_pj_per_cycle", e.bpc_pj_per_cycle);
    e.vector_pj_per_token = detail::cfg_num(j, "vector_pj_per_token", e.vector_pj_per_token);
    e.fpfp_mac_multiplier = detail::cfg_num(j, "fpfp_mac_multiplier", e.fpfp_mac_multiplier);
    e.fpint_mac_multiplier = detail::cfg_num(j, "fpint_mac_multiplier", e.fpint_mac_multiplier);
    e.ifpu_mac_multiplier = detail::cfg_num(j, "ifpu_mac_multiplier", e.ifpu_mac_multiplier);
    e.figna_mac_multiplier = detail::cfg_num(j, "figna_mac_multiplier", e.figna_mac_multiplier);
    e.ifpu_conversion_pj_per_group =
        detail::cfg_num(j, "ifpu_conversion_pj_per_group", e.ifpu_conversion_pj_per_group);
    for (double v : {e.dram_pj_per_bit, e.sram_pj_per_bit, e.mxu_pj_per_apu_cycle, e.bpc_pj_per_cycle,
                     e.vector_pj_per_token, e.fpfp_mac_multiplier, e.fpint_mac_multiplier,
                     e.ifpu_mac_multiplier, e.figna_mac_multiplier, e.ifpu_conversion_pj_per_group})
        if (v < 0 || !std::isfinite(v)) throw Error("energy parameters must be non-negative");
    return e;
}

// ---- report emission --------------------------------------------------------

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace detail

inline constexpr const char* kReportCsvHeader =
    "platform,compute_cycles,memory_cycles,total_cycles,macs,"
    "dram_act_bits,dram_weight_bits,dram_out_bits,"
    "sram_act_bits,sram_weight_bits,sram_out_bits,"
    "energy_compute_pj,energy_sram_pj,energy_dram_pj,energy_total_pj,"
    "speedup_vs_fpfp,energy_eff_vs_fpfp";

inline void reports_to_csv(const std::vector<SimReport>& reports, std::ostream& os) {
    os << kReportCsvHeader << "\n";
    for (const SimReport& r : reports) {
        os << r.platform << "," << detail::fmt_double(r.compute_cycles) << ","
           << detail::fmt_double(r.memory_cycles) << "," << detail::fmt_double(r.total_cycles) << ","
           << r.macs << "," << r.dram.act_bits << "," << r.dram.weight_bits << "," << r.dram.out_bits
           << "," << r.sram.act_bits << "," << r.sram.weight_bits << "," << r.sram.out_bits << ","
           << detail::fmt_double(r.energy.compute_pj) << "," << detail::fmt_double(r.energy.sram_pj)
           << "," << detail::fmt_double(r.energy.dram_pj) << ","
           << detail::fmt_double(r.energy.total()) << ","
           << detail::fmt_double(r.speedup_vs_baseline) << ","
           << detail::fmt_double(r.energy_eff_vs_baseline) << "\n";
    }
}

inline nlohmann::json report_to_json(const SimReport& r) {
    nlohmann::json j;
    j["platform"] = r.platform;
    j["compute_cycles"] = r.compute_cycles;
    j["memory_cycles"] = r.memory_cycles;
    j["fill_cycles"] = r.fill_cycles;
    j["total_cycles"] = r.total_cycles;
    j["macs"] = r.macs;
    j["dram_bits"] = {{"act", r.dram.act_bits}, {"weight", r.dram.weight_bits}, {"out", r.dram.out_bits}};
    j["sram_bits"] = {{"act", r.sram.act_bits}, {"weight", r.sram.weight_bits}, {"out", r.sram.out_bits}};
    j["energy_pj"] = {{"compute", r.energy.compute_pj},
                      {"sram", r.energy.sram_pj},
                      {"dram", r.energy.dram_pj},
                      {"total", r.energy.total()}};
    if (!r.baseline.empty()) {
        j["baseline"] = r.baseline;
        j["speedup_vs_baseline"] = r.speedup_vs_baseline;
        j["energy_eff_vs_baseline"] = r.energy_eff_vs_baseline;
    }
    return j;
}

// x/y series for external plotting (--plot-data).
inline nlohmann::json reports_to_plot_data(const std::vector<SimReport>& reports) {
    nlohmann::json x = nlohmann::json::array();
    nlohmann::json speedup = nlohmann::json::array();
    nlohmann::json eff = nlohmann::json::array();
    for (const SimReport& r : reports) {
        x.push_back(r.platform);
        speedup.push_back(r.speedup_vs_baseline);
        eff.push_back(r.energy_eff_vs_baseline);
    }
    return nlohmann::json{{"x", x},
                          {"series", nlohmann::json::array({nlohmann::json{{"name", "speedup"}, {"y", speedup}},
                                                            nlohmann::json{{"name", "energy_eff"}, {"y", eff}}})}};
}

} // namespace anda
