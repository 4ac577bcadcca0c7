#pragma once

// Language-neutral external accuracy oracle. Requests and responses are
// single newline-terminated JSON lines:
//
//   -> {"comb":[7,7,6,5]}     or     {"comb":"fp16"}
//   <- {"score": 0.993}
//
// Transports: a child process speaking the protocol on stdin/stdout, or a
// file pair (requests appended to one file, responses appended to another
// by some external loop). One request is outstanding at a time.

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "anda/errors.hpp"
#include "anda/search.hpp"

#include "json.hpp"

namespace anda {

struct OracleEndpointConfig {
    double timeout_sec = 10.0;
};

namespace detail {

inline std::string oracle_request_line(const std::optional<PrecisionCombination>& c) {
    nlohmann::json j;
    if (c)
        j["comb"] = c->m;
    else
        j["comb"] = "fp16";
    return j.dump() + "\n";
}

inline double parse_oracle_response(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
        throw MalformedResponse("oracle reply is not valid JSON: " + line);
    }
    if (!j.is_object() || !j.contains("score") || !j.at("score").is_number())
        throw MalformedResponse("oracle reply lacks a numeric \"score\": " + line);
    const double score = j.at("score").get<double>();
    if (!std::isfinite(score)) throw NonFiniteScore();
    return score;
}

} // namespace detail

// Child process speaking the oracle protocol on its standard streams. The
// process is started once and reused for every request.
class ProcessOracle {
public:
    explicit ProcessOracle(const std::string& command, OracleEndpointConfig cfg = {}) : cfg_(cfg) {
        // A child that exits early must surface as an error, not SIGPIPE.
        static const bool sigpipe_ignored = [] {
            signal(SIGPIPE, SIG_IGN);
            return true;
        }();
        (void)sigpipe_ignored;
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) throw Error("pipe() failed");
        pid_ = fork();
        if (pid_ < 0) throw Error("fork() failed");
        if (pid_ == 0) {
            setpgid(0, 0); // own process group, so teardown reaches grandchildren
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        wfd_ = to_child[1];
        rfd_ = from_child[0];
    }

    ProcessOracle(const ProcessOracle&) = delete;
    ProcessOracle& operator=(const ProcessOracle&) = delete;

    ~ProcessOracle() {
        if (wfd_ >= 0) close(wfd_);
        if (rfd_ >= 0) close(rfd_);
        if (pid_ > 0) {
            int status = 0;
            // Give the child a moment to exit on EOF, then force the whole
            // process group (the shell may have spawned grandchildren).
            for (int i = 0; i < 20; ++i) {
                if (waitpid(pid_, &status, WNOHANG) != 0) {
                    kill(-pid_, SIGKILL);
                    return;
                }
                std::this_thread::sleep_for(std::chrono::milliseconds(10));
            }
            kill(-pid_, SIGKILL);
            kill(pid_, SIGKILL);
            waitpid(pid_, &status, 0);
        }
    }

    double evaluate(const std::optional<PrecisionCombination>& c) {
        const std::string req = detail::oracle_request_line(c);
        ssize_t off = 0;
        while (off < static_cast<ssize_t>(req.size())) {
            const ssize_t n = write(wfd_, req.data() + off, req.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw OracleFailure(std::string("oracle write failed: ") + std::strerror(errno));
            }
            off += n;
        }
        return detail::parse_oracle_response(read_line());
    }

private:
    std::string read_line() {
        const auto deadline =
            std::chrono::steady_clock::now() + std::chrono::duration<double>(cfg_.timeout_sec);
        for (;;) {
            const auto nl = buf_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buf_.substr(0, nl);
                buf_.erase(0, nl + 1);
                return line;
            }
            const auto remaining = deadline - std::chrono::steady_clock::now();
            if (remaining <= std::chrono::steady_clock::duration::zero()) throw OracleTimeout();
            pollfd pfd{rfd_, POLLIN, 0};
            const int ms = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count());
            const int pr = poll(&pfd, 1, std::max(1, ms));
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw OracleFailure(std::string("poll failed: ") + std::strerror(errno));
            }
            if (pr == 0) throw OracleTimeout();
            char chunk[4096];
            const ssize_t n = read(rfd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw OracleFailure(std::string("oracle read failed: ") + std::strerror(errno));
            }
            if (n == 0) throw MalformedResponse("oracle closed its output stream");
            buf_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    OracleEndpointConfig cfg_;
    pid_t pid_ = -1;
    int wfd_ = -1;
    int rfd_ = -1;
    std::string buf_;
};

// File-pair transport: requests are appended to one file, and the n-th
// response line is awaited in the other.
class FilePairOracle {
public:
    FilePairOracle(std::string request_path, std::string response_path, OracleEndpointConfig cfg = {})
        : req_path_(std::move(request_path)), resp_path_(std::move(response_path)), cfg_(cfg) {}

    double evaluate(const std::optional<PrecisionCombination>& c) {
        {
            std::ofstream f(req_path_, std::ios::app);
            if (!f) throw OracleFailure("cannot append to " + req_path_);
            f << detail::oracle_request_line(c);
        }
        const auto deadline =
            std::chrono::steady_clock::now() + std::chrono::duration<double>(cfg_.timeout_sec);
        for (;;) {
            std::ifstream f(resp_path_);
            if (f) {
                std::string line;
                std::size_t count = 0;
                while (std::getline(f, line)) {
                    if (count == answered_) {
                        ++answered_;
                        return detail::parse_oracle_response(line);
                    }
                    ++count;
                }
            }
            if (std::chrono::steady_clock::now() >= deadline) throw OracleTimeout();
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    }

private:
    std::string req_path_;
    std::string resp_path_;
    OracleEndpointConfig cfg_;
    std::size_t answered_ = 0;
};

inline OracleFn make_exec_oracle(const std::string& command, OracleEndpointConfig cfg = {}) {
    auto proc = std::make_shared<ProcessOracle>(command, cfg);
    return [proc](const std::optional<PrecisionCombination>& c) { return proc->evaluate(c); };
}

inline OracleFn make_file_pair_oracle(const std::string& request_path, const std::string& response_path,
                                      OracleEndpointConfig cfg = {}) {
    auto pair = std::make_shared<FilePairOracle>(request_path, response_path, cfg);
    return [pair](const std::optional<PrecisionCombination>& c) { return pair->evaluate(c); };
}

} // namespace anda
