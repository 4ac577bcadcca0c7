#include "doctest.h"

#include <sstream>

#include "anda/bpc.hpp"
#include "test_support.hpp"

using namespace anda;

namespace {

std::vector<Half> halves(std::initializer_list<float> xs) {
    std::vector<Half> v;
    for (float x : xs) v.push_back(float_to_half(x));
    return v;
}

} // namespace

TEST_CASE("serial aligner reproduces the hand cycle trace") {
    // e1 (0.25) waits two cycles before emitting '1'; e2 truncates away.
    const auto r = compress_group_serial(halves({1.5f, 0.25f, -0.09375f, 0.0f}), 4, 4);
    CHECK(r.emitted_planes == std::vector<uint64_t>{0b0001, 0b0001, 0b0010, 0b0000});
    CHECK(r.group.mantissas == std::vector<uint16_t>{12, 2, 0, 0});
    CHECK(r.group.signs == std::vector<uint8_t>{0, 0, 1, 0});
    CHECK(r.group.shared_exp == 0);
    CHECK(r.cycles == 4);
}

TEST_CASE("all-equal values emit from cycle zero") {
    const auto r = compress_group_serial(halves({1.25f, 1.25f, 1.25f}), 5, 3);
    // significand 1.0100..., top 5 bits replicated across all lanes
    CHECK(r.emitted_planes == std::vector<uint64_t>{0b111, 0b000, 0b111, 0b000, 0b000});
    for (uint16_t m : r.group.mantissas) CHECK(m == 0b10100);
}

TEST_CASE("serial/direct equivalence, exhaustive over a small significand lattice") {
    // Two-element groups spanning every (exponent-difference, fraction-step)
    // pair across the normal/subnormal boundary, at three mantissa lengths.
    for (int m : {1, 6, 11}) {
        for (uint16_t e1 : {0, 1, 2, 14, 15, 16, 29, 30}) {
            for (uint16_t e2 : {0, 1, 2, 15, 30}) {
                for (uint16_t f1 = 0; f1 < 1024; f1 += 31) {
                    for (uint16_t f2 = 0; f2 < 1024; f2 += 127) {
                        const std::vector<Half> vals = {
                            Half(static_cast<uint16_t>((e1 << 10) | f1)),
                            Half(static_cast<uint16_t>(0x8000 | (e2 << 10) | f2))};
                        REQUIRE(compress_group_serial(vals, m, 2).group ==
                                encode_group(vals, m, 2));
                    }
                }
            }
        }
    }
}

TEST_CASE("serial output equals the direct encoder bit-exactly, all M") {
    Xoshiro256ss rng(0xBC);
    for (int m = 1; m <= 16; ++m) {
        for (int rep = 0; rep < 400; ++rep) {
            const std::size_t n = 1 + rng.next() % 64;
            const auto vals = testsup::random_half_group(rng, n);
            const auto r = compress_group_serial(vals, m, n);
            CHECK(r.group == encode_group(vals, m, n));
        }
    }
}

TEST_CASE("emitted planes match the packed direct encoding") {
    Xoshiro256ss rng(0xBD);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 1 + static_cast<int>(rng.next() % 16);
        const auto vals = testsup::random_half_group(rng, 64);
        const auto r = compress_group_serial(vals, m);
        CHECK(r.emitted_planes == pack_group(encode_group(vals, m)).bit_planes);
    }
}

TEST_CASE("zero and subnormal lanes behave") {
    // Zeros never emit; an all-subnormal group emits its fraction bits with
    // no integer bit.
    const auto r = compress_group_serial(std::vector<Half>{Half(0x0000), Half(0x03FF)}, 11, 2);
    CHECK(r.group == encode_group(std::vector<Half>{Half(0x0000), Half(0x03FF)}, 11, 2));
    CHECK(r.group.shared_exp == -14);
    CHECK(r.group.mantissas[0] == 0);
    CHECK(r.group.mantissas[1] == 1023);
    CHECK((r.emitted_planes[0] & 1) == 0);
}

TEST_CASE("max-exponent element leads plane 0 when a normal is present") {
    Xoshiro256ss rng(0xBE);
    for (int rep = 0; rep < 200; ++rep) {
        auto vals = testsup::random_half_group(rng, 32);
        bool has_normal = false;
        for (Half h : vals) has_normal |= h.classify() == FpClass::Normal;
        if (!has_normal) continue;
        const auto r = compress_group_serial(vals, 1 + static_cast<int>(rng.next() % 16), 32);
        CHECK(r.emitted_planes[0] != 0);
    }
}

TEST_CASE("cycle law: M + latency per group, data-independent") {
    Xoshiro256ss rng(0xBF);
    for (int m : {1, 7, 16}) {
        const auto vals = testsup::random_half_group(rng, 64);
        CHECK(compress_group_serial(vals, m, 64, 0).cycles == m);
        CHECK(compress_group_serial(vals, m, 64, 3).cycles == m + 3);
    }
}

TEST_CASE("compress_tensor equals encode_tensor and batches lanes") {
    Xoshiro256ss rng(0xC0);
    const auto a = testsup::random_half_matrix(rng, 16, 64); // 16 groups
    const AndaParams params{64, 8};

    const auto r = compress_tensor(a, params, BpcConfig{16, 64, 0});
    CHECK(r.tensor == encode_tensor(a, params));
    CHECK(r.cycles == 8); // one batch of 16 lanes

    const auto a17 = testsup::random_half_matrix(rng, 17, 64); // 17 groups
    CHECK(compress_tensor(a17, params, BpcConfig{16, 64, 0}).cycles == 16); // two batches

    Matrix<Half> empty(0, 0);
    CHECK(compress_tensor(empty, params, BpcConfig{16, 64, 0}).cycles == 0);
}

TEST_CASE("compress_tensor respects latency in the batch cost") {
    Xoshiro256ss rng(0xC1);
    const auto a = testsup::random_half_matrix(rng, 16, 64);
    CHECK(compress_tensor(a, {64, 8}, BpcConfig{16, 64, 2}).cycles == 10);
}

TEST_CASE("compressor propagates NonFiniteInput") {
    CHECK_THROWS_AS(compress_group_serial(std::vector<Half>{Half(0xFC00)}, 4, 1), NonFiniteInput);
}

TEST_CASE("trace dump emits one line per cycle") {
    const auto r = compress_group_serial(halves({1.0f, 0.5f}), 3, 2);
    std::ostringstream os;
    dump_emission_trace(r, os);
    int lines = 0;
    for (char c : os.str())
        if (c == '\n') ++lines;
    CHECK(lines == 3);
}
