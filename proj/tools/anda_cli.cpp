// anda — command-line front end for the Anda activation-format toolkit.
//
// Subcommands:
//   gen       synthesize a calibration workload directory
//   encode    FP16 .andt -> .anda container
//   decode    .anda container -> binary32 .andt
//   sweep     group-size / mantissa-length error sweep to CSV
//   search    adaptive precision combination search
//   simulate  cycle/energy model for one combination (vs FP-FP)
//   compare   cross-platform comparison table
//
// Exit codes: 0 ok, 2 usage/validation, 3 no feasible combination,
// 4 cost-model precondition (activation strip exceeds the buffer).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anda/anda.hpp"
#include "json.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCostModel = 4;

// ---- run manifests -----------------------------------------------------------

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return 0;
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[8192];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!f) break;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct ManifestBuilder {
    nlohmann::json j;

    ManifestBuilder(const std::string& command, const nlohmann::json& config) {
        j["command"] = command;
        j["config"] = config;
        j["tool_version"] = kToolVersion;
        j["timestamp"] = iso_timestamp();
        j["inputs"] = nlohmann::json::object();
    }

    void add_input(const std::string& path) { j["inputs"][path] = hex64(fnv1a64_file(path)); }

    void write_for(const std::string& output_path) const {
        std::ofstream f(output_path + ".manifest.json");
        if (f) f << j.dump(2) << "\n";
    }
};

// ---- config discovery ---------------------------------------------------------

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw anda::Error("cannot open " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw anda::Error("malformed JSON in " + path + ": " + e.what());
    }
}

// Explicit flag wins; otherwise ANDA_CONFIG_DIR/<name>.json; otherwise the
// built-in defaults.
std::optional<nlohmann::json> discover_config(const std::string& explicit_path,
                                              const std::string& name, ManifestBuilder& manifest) {
    if (!explicit_path.empty()) {
        manifest.add_input(explicit_path);
        return load_json_file(explicit_path);
    }
    if (const char* dir = std::getenv("ANDA_CONFIG_DIR")) {
        const std::string path = std::string(dir) + "/" + name + ".json";
        if (std::ifstream(path).good()) {
            manifest.add_input(path);
            return load_json_file(path);
        }
    }
    return std::nullopt;
}

anda::ArchConfig resolve_arch(const std::string& path, ManifestBuilder& manifest) {
    const auto j = discover_config(path, "arch", manifest);
    return j ? anda::arch_from_json(*j) : anda::ArchConfig{};
}

anda::EnergyParams resolve_energy(const std::string& path, ManifestBuilder& manifest) {
    const auto j = discover_config(path, "energy", manifest);
    return j ? anda::energy_from_json(*j) : anda::EnergyParams{};
}

// ---- small parsers ------------------------------------------------------------

// "4,8,12" or "4..16"
std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(s.substr(0, dots));
        const int hi = std::stoi(s.substr(dots + 2));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

anda::PrecisionCombination parse_combination(const std::string& s) {
    const std::vector<int> vals = parse_int_list(s);
    if (vals.size() != 4) throw anda::Error("--comb expects four comma-separated mantissa lengths");
    anda::PrecisionCombination c;
    for (std::size_t i = 0; i < 4; ++i) c[i] = vals[i];
    if (!c.valid()) throw anda::Error("mantissa lengths must be in 1..16");
    return c;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw anda::Error("cannot open for writing: " + path);
    f << content;
}

// ---- subcommand implementations ------------------------------------------------

struct GenArgs {
    std::string out;
    uint64_t seed = 1;
    uint64_t d_model = 128;
    uint64_t d_ff = 0; // 0 -> family default (4*d for opt)
    uint64_t tokens = 32;
    std::string family = "opt";
};

int run_gen(const GenArgs& a) {
    const uint64_t d_ff = a.d_ff ? a.d_ff : 4 * a.d_model;
    const auto w = anda::gen_synthetic_layer(a.seed, a.d_model, d_ff, a.tokens, a.family);
    anda::save_workload(w, a.out);
    ManifestBuilder manifest("gen", nlohmann::json{{"seed", a.seed},
                                                   {"d_model", a.d_model},
                                                   {"d_ff", d_ff},
                                                   {"tokens", a.tokens},
                                                   {"family", a.family}});
    manifest.write_for(a.out + "/workload.json");
    std::printf("wrote workload (%s, d=%llu, d_ff=%llu, %llu tokens) to %s\n", a.family.c_str(),
                static_cast<unsigned long long>(a.d_model), static_cast<unsigned long long>(d_ff),
                static_cast<unsigned long long>(a.tokens), a.out.c_str());
    return kExitOk;
}

struct EncodeArgs {
    std::string in, out;
    std::size_t gs = anda::kDefaultGroupSize;
    int m = 8;
};

int run_encode(const EncodeArgs& a) {
    if (a.m < 1 || a.m > 16) throw anda::Error("--m must be in 1..16");
    if (a.gs < 1 || a.gs > anda::kMaxLanes) throw anda::Error("--gs must be in 1..64");
    const anda::Matrix<anda::Half> m = anda::to_half_matrix(anda::load_andt(a.in));
    const anda::AndaTensor t = anda::encode_tensor(m, {a.gs, a.m});
    anda::save_anda(t, a.out);
    const anda::ErrorStats stats = anda::error_stats(m, anda::decode_tensor(t));
    std::printf("encoded %zux%zu at gs=%zu m=%d: max_abs=%.9g rmse=%.9g nrmse=%.9g\n", m.rows,
                m.cols, a.gs, a.m, stats.max_abs, stats.rmse, stats.nrmse);
    ManifestBuilder manifest("encode",
                             nlohmann::json{{"in", a.in}, {"gs", a.gs}, {"m", a.m}});
    manifest.add_input(a.in);
    manifest.write_for(a.out);
    return kExitOk;
}

struct DecodeArgs {
    std::string in, out;
};

int run_decode(const DecodeArgs& a) {
    const anda::AndaTensor t = anda::load_anda(a.in);
    const anda::Matrix<float> m = anda::decode_tensor(t);
    anda::save_andt(anda::to_raw(m), a.out);
    std::printf("decoded %zux%zu (gs=%zu m=%d) to binary32\n", m.rows, m.cols, t.params.group_size,
                t.params.mantissa_len);
    ManifestBuilder manifest("decode", nlohmann::json{{"in", a.in}});
    manifest.add_input(a.in);
    manifest.write_for(a.out);
    return kExitOk;
}

struct SweepArgs {
    std::string workload;
    std::string gs_list = "64";
    std::string m_list;
    std::string csv;
};

int run_sweep(const SweepArgs& a) {
    const std::vector<int> gss = parse_int_list(a.gs_list);
    const std::vector<int> ms = parse_int_list(a.m_list);
    if (gss.empty() || ms.empty()) throw anda::Error("--gs-list and --m-list must be non-empty");
    for (int m : ms)
        if (m < 1 || m > 16) throw anda::Error("mantissa lengths must be in 1..16");
    for (int gs : gss)
        if (gs < 1) throw anda::Error("group sizes must be >= 1");

    const anda::CalibrationWorkload w = anda::load_workload(a.workload);

    std::string csv = "gs,m,nrmse,max_abs\n";
    for (int gs : gss) {
        for (int m : ms) {
            // Pool squared error over every activation tensor in the workload.
            double sq_err = 0.0, sq_ref = 0.0, max_abs = 0.0;
            uint64_t count = 0;
            for (const anda::WorkloadModule& mod : w.modules) {
                const anda::AndaTensor t =
                    anda::encode_tensor(mod.activations, {static_cast<std::size_t>(gs), m});
                const anda::Matrix<float> dec = anda::decode_tensor(t);
                for (std::size_t i = 0; i < dec.size(); ++i) {
                    const double ref = anda::half_to_float(mod.activations.data[i]);
                    const double err = ref - dec.data[i];
                    sq_err += err * err;
                    sq_ref += ref * ref;
                    max_abs = std::max(max_abs, std::abs(err));
                    ++count;
                }
            }
            const double rmse = count ? std::sqrt(sq_err / static_cast<double>(count)) : 0.0;
            const double nrmse =
                sq_ref > 0.0 ? rmse / std::sqrt(sq_ref / static_cast<double>(count)) : 0.0;
            char line[128];
            std::snprintf(line, sizeof line, "%d,%d,%.10g,%.10g\n", gs, m, nrmse, max_abs);
            csv += line;
        }
    }
    write_text_file(a.csv, csv);
    ManifestBuilder manifest("sweep", nlohmann::json{{"workload", a.workload},
                                                     {"gs_list", a.gs_list},
                                                     {"m_list", a.m_list}});
    manifest.add_input(a.workload + "/workload.json");
    manifest.write_for(a.csv);
    std::printf("wrote %zu sweep rows to %s\n", gss.size() * ms.size(), a.csv.c_str());
    return kExitOk;
}

struct SearchArgs {
    std::string workload;
    double delta = 0.01;
    std::size_t max_iters = 32;
    std::string oracle = "proxy";
    std::string trace;
    std::string shape_json;
};

int run_search(const SearchArgs& a) {
    if (a.delta < 0.0 || a.delta > 1.0) throw anda::Error("--delta must be in [0,1]");
    const anda::CalibrationWorkload w = anda::load_workload(a.workload);
    const anda::ModelShape shape = a.shape_json.empty()
                                       ? w.shape()
                                       : anda::ModelShape::from_json(load_json_file(a.shape_json));

    anda::OracleFn oracle;
    if (a.oracle == "proxy") {
        oracle = anda::make_proxy_oracle(w);
    } else if (a.oracle.rfind("exec:", 0) == 0) {
        oracle = anda::make_caching_oracle(anda::make_exec_oracle(a.oracle.substr(5)));
    } else {
        throw anda::Error("--oracle must be 'proxy' or 'exec:<command>'");
    }

    anda::SearchConfig cfg;
    cfg.delta = a.delta;
    cfg.max_iterations = a.max_iters;
    const anda::SearchResult res = anda::search(shape, oracle, cfg);

    if (!a.trace.empty()) {
        std::ostringstream os;
        anda::trace_to_jsonl(res.trace, os);
        write_text_file(a.trace, os.str());
        ManifestBuilder manifest("search", nlohmann::json{{"workload", a.workload},
                                                          {"delta", a.delta},
                                                          {"max_iters", a.max_iters},
                                                          {"oracle", a.oracle}});
        manifest.add_input(a.workload + "/workload.json");
        manifest.write_for(a.trace);
    }

    if (!res.best) {
        std::fprintf(stderr, "no feasible combination within delta=%g after %zu iterations\n",
                     a.delta, res.trace.records.size());
        return kExitInfeasible;
    }
    std::printf("best %s reduction %.4g iterations %zu\n", res.best->str().c_str(),
                anda::bops_reduction(*res.best, shape), res.trace.records.size());
    return kExitOk;
}

struct SimulateArgs {
    std::string shape_json;
    std::string comb = "8,8,8,8";
    uint64_t tokens = 512;
    std::string arch_json, energy_json;
    std::string csv, json_out, plot_data;
    bool is_compare = false;
};

int run_simulate(const SimulateArgs& a) {
    ManifestBuilder manifest(a.is_compare ? "compare" : "simulate",
                             nlohmann::json{{"shape", a.shape_json},
                                            {"comb", a.comb},
                                            {"tokens", a.tokens}});
    const anda::ModelShape shape = anda::ModelShape::from_json(load_json_file(a.shape_json));
    manifest.add_input(a.shape_json);
    const anda::PrecisionCombination comb = parse_combination(a.comb);
    const anda::ArchConfig arch = resolve_arch(a.arch_json, manifest);
    const anda::EnergyParams energy = resolve_energy(a.energy_json, manifest);

    std::vector<anda::SimReport> reports;
    if (a.is_compare) {
        reports = anda::compare(shape, comb, a.tokens, arch, energy);
    } else {
        const anda::SimReport fpfp = anda::simulate_model_mode(shape, comb, a.tokens,
                                                               anda::SimMode::fpfp(), arch, energy);
        anda::SimReport rep = anda::simulate_model(shape, comb, a.tokens, arch, energy);
        anda::SimReport base = fpfp;
        anda::normalize_vs(base, fpfp);
        anda::normalize_vs(rep, fpfp);
        reports = {base, rep};
    }

    std::ostringstream csv;
    anda::reports_to_csv(reports, csv);
    if (!a.csv.empty()) {
        write_text_file(a.csv, csv.str());
        manifest.write_for(a.csv);
    } else {
        std::fputs(csv.str().c_str(), stdout);
    }
    if (!a.json_out.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(anda::report_to_json(r));
        write_text_file(a.json_out, arr.dump(2) + "\n");
        manifest.write_for(a.json_out);
    }
    if (!a.plot_data.empty()) {
        write_text_file(a.plot_data, anda::reports_to_plot_data(reports).dump(2) + "\n");
        manifest.write_for(a.plot_data);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anda variable-length grouped activation format toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "Generate a synthetic calibration workload");
    cmd_gen->add_option("--out", gen.out, "Output directory")->required();
    cmd_gen->add_option("--seed", gen.seed, "PRNG seed");
    cmd_gen->add_option("--d-model", gen.d_model, "Model width");
    cmd_gen->add_option("--d-ff", gen.d_ff, "Feed-forward width (default 4*d_model)");
    cmd_gen->add_option("--tokens", gen.tokens, "Calibration tokens");
    cmd_gen->add_option("--family", gen.family, "Model family: opt | llama");

    EncodeArgs enc;
    auto* cmd_encode = app.add_subcommand("encode", "Encode an FP16 .andt tensor into .anda");
    cmd_encode->add_option("--in", enc.in, "Input .andt (binary16)")->required();
    cmd_encode->add_option("--out", enc.out, "Output .anda")->required();
    cmd_encode->add_option("--gs", enc.gs, "Group size (1..64)");
    cmd_encode->add_option("--m", enc.m, "Mantissa length (1..16)");

    DecodeArgs dec;
    auto* cmd_decode = app.add_subcommand("decode", "Decode an .anda container to binary32 .andt");
    cmd_decode->add_option("--in", dec.in, "Input .anda")->required();
    cmd_decode->add_option("--out", dec.out, "Output .andt (binary32)")->required();

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "Sweep group size and mantissa length, CSV out");
    cmd_sweep->add_option("--workload", sweep.workload, "Workload directory")->required();
    cmd_sweep->add_option("--gs-list", sweep.gs_list, "Group sizes, e.g. 16,32,64");
    cmd_sweep->add_option("--m-list", sweep.m_list, "Mantissa lengths, e.g. 4..16")->required();
    cmd_sweep->add_option("--csv", sweep.csv, "Output CSV path")->required();

    SearchArgs search;
    auto* cmd_search = app.add_subcommand("search", "Adaptive precision combination search");
    cmd_search->add_option("--workload", search.workload, "Workload directory")->required();
    cmd_search->add_option("--delta", search.delta, "Accuracy loss tolerance");
    cmd_search->add_option("--max-iters", search.max_iters, "Iteration budget");
    cmd_search->add_option("--oracle", search.oracle, "proxy | exec:<command>");
    cmd_search->add_option("--trace", search.trace, "JSONL trace output path");
    cmd_search->add_option("--shape", search.shape_json, "Model shape JSON (default: workload shape)");

    SimulateArgs sim;
    auto* cmd_simulate = app.add_subcommand("simulate", "Cycle/energy model for one combination");
    auto* cmd_compare = app.add_subcommand("compare", "Compare platforms at one workload");
    for (auto* cmd : {cmd_simulate, cmd_compare}) {
        cmd->add_option("--shape", sim.shape_json, "Model shape JSON")->required();
        cmd->add_option("--comb", sim.comb, "Mantissa lengths m1,m2,m3,m4");
        cmd->add_option("--tokens", sim.tokens, "Sequence length");
        cmd->add_option("--arch", sim.arch_json, "Arch config JSON");
        cmd->add_option("--energy", sim.energy_json, "Energy config JSON");
        cmd->add_option("--csv", sim.csv, "Output CSV path (default: stdout)");
        cmd->add_option("--json", sim.json_out, "Output JSON path");
    }
    cmd_compare->add_option("--plot-data", sim.plot_data, "x/y series JSON for plotting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_gen->parsed()) return run_gen(gen);
        if (cmd_encode->parsed()) return run_encode(enc);
        if (cmd_decode->parsed()) return run_decode(dec);
        if (cmd_sweep->parsed()) return run_sweep(sweep);
        if (cmd_search->parsed()) return run_search(search);
        if (cmd_simulate->parsed() || cmd_compare->parsed()) {
            sim.is_compare = cmd_compare->parsed();
            return run_simulate(sim);
        }
    } catch (const anda::TileExceedsBuffer& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCostModel;
    } catch (const anda::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitUsage;
}
