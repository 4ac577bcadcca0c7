// Reference implementation of the external-oracle wire protocol, used by the
// test suite and as a template for plugging in a real evaluator. Reads one
// JSON request per line on stdin and answers with {"score": ...}.
//
// Scoring modes:
//   --mode min            score = min(comb)/16, fp16 -> 1.0 (default)
//   --mode threshold --t1..--t4
//                         score = 1.0 iff comb >= [t1,t2,t3,t4] componentwise
//   --mode const --value  fixed score for every request
//   --malformed           reply "{}" to every request (protocol tests)

#include <cstdio>
#include <iostream>
#include <string>

#include "json.hpp"

int main(int argc, char** argv) {
    std::string mode = "min";
    int t[4] = {6, 6, 6, 6};
    double const_value = 1.0;
    bool malformed = false;

    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "missing value for %s\n", arg.c_str());
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--mode") mode = next();
        else if (arg == "--t1") t[0] = std::stoi(next());
        else if (arg == "--t2") t[1] = std::stoi(next());
        else if (arg == "--t3") t[2] = std::stoi(next());
        else if (arg == "--t4") t[3] = std::stoi(next());
        else if (arg == "--value") const_value = std::stod(next());
        else if (arg == "--malformed") malformed = true;
        else {
            std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
            return 2;
        }
    }

    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        if (malformed) {
            std::printf("{}\n");
            std::fflush(stdout);
            continue;
        }
        double score = 0.0;
        try {
            const nlohmann::json req = nlohmann::json::parse(line);
            const auto& comb = req.at("comb");
            if (comb.is_string() && comb.get<std::string>() == "fp16") {
                score = mode == "const" ? const_value : 1.0;
            } else {
                int m[4];
                for (int i = 0; i < 4; ++i) m[i] = comb.at(i).get<int>();
                if (mode == "min") {
                    int lo = m[0];
                    for (int v : m) lo = std::min(lo, v);
                    score = static_cast<double>(lo) / 16.0;
                } else if (mode == "threshold") {
                    score = (m[0] >= t[0] && m[1] >= t[1] && m[2] >= t[2] && m[3] >= t[3]) ? 1.0 : 0.0;
                } else if (mode == "const") {
                    score = const_value;
                } else {
                    std::fprintf(stderr, "unknown mode: %s\n", mode.c_str());
                    return 2;
                }
            }
        } catch (const std::exception& e) {
            std::fprintf(stderr, "bad request: %s\n", e.what());
            return 1;
        }
        nlohmann::json resp;
        resp["score"] = score;
        std::printf("%s\n", resp.dump().c_str());
        std::fflush(stdout);
    }
    return 0;
}
