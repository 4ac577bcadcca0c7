#include "doctest.h"

#include <cmath>

#include "anda/apu.hpp"
#include "test_support.hpp"

using namespace anda;
using testsup::make_weights;

namespace {

AndaGroup worked_group() {
    AndaGroup g;
    g.shared_exp = 0;
    g.mantissa_len = 4;
    g.signs = {0, 0, 1, 0};
    g.mantissas = {12, 2, 0, 0};
    return g;
}

} // namespace

TEST_CASE("group_dot_reference worked example and degenerate cases") {
    const AndaGroup g = worked_group();
    const std::vector<int8_t> w = {2, -1, 3, 7};
    CHECK(group_dot_reference(g, w) == 22);
    CHECK(group_dot_reference(g, std::vector<int8_t>{0, 0, 0, 0}) == 0);

    AndaGroup zeros = g;
    zeros.mantissas = {0, 0, 0, 0};
    CHECK(group_dot_reference(zeros, w) == 0);

    CHECK_THROWS_AS(group_dot_reference(g, std::vector<int8_t>{1, 2}), LengthMismatch);
}

TEST_CASE("bit-serial fold reproduces the hand trace") {
    const PackedGroup p = pack_group(worked_group());
    const std::vector<int8_t> w = {2, -1, 3, 7};
    const auto [result, trace] = group_dot_bitserial(p, w);
    CHECK(result == 22);
    CHECK(trace.cycles == 4);
    CHECK(trace.plane_partials == std::vector<int64_t>{2, 2, -1, 0});
    CHECK(trace.acc_per_cycle == std::vector<int64_t>{2, 6, 11, 22});
    CHECK(trace.final_acc == 22);
}

TEST_CASE("single-plane groups reduce to a signed masked sum") {
    Xoshiro256ss rng(0x31);
    for (int rep = 0; rep < 100; ++rep) {
        AndaGroup g;
        g.shared_exp = 0;
        g.mantissa_len = 1;
        g.signs.resize(64);
        g.mantissas.resize(64);
        for (std::size_t i = 0; i < 64; ++i) {
            g.signs[i] = rng.next() & 1;
            g.mantissas[i] = rng.next() & 1;
        }
        const auto w = testsup::random_int4_vector(rng, 64);
        const auto [result, trace] = group_dot_bitserial(pack_group(g), w);
        CHECK(trace.cycles == 1);
        CHECK(result == group_dot_reference(g, w));
    }
}

TEST_CASE("shift-accumulate identity: final equals weighted partial sum") {
    Xoshiro256ss rng(0x32);
    for (int rep = 0; rep < 200; ++rep) {
        const int m = 1 + static_cast<int>(rng.next() % 16);
        const auto vals = testsup::random_half_group(rng, 64);
        const AndaGroup g = encode_group(vals, m);
        const auto w = testsup::random_int4_vector(rng, 64);
        const auto [result, trace] = group_dot_bitserial(pack_group(g), w);
        int64_t weighted = 0;
        for (int k = 0; k < m; ++k)
            weighted += trace.plane_partials[static_cast<std::size_t>(k)] * (int64_t{1} << (m - 1 - k));
        CHECK(result == weighted);
        CHECK(result == group_dot_reference(g, w));
    }
}

TEST_CASE("negating every activation sign negates the result") {
    Xoshiro256ss rng(0x33);
    for (int rep = 0; rep < 100; ++rep) {
        const auto vals = testsup::random_half_group(rng, 64);
        AndaGroup g = encode_group(vals, 7);
        const auto w = testsup::random_int4_vector(rng, 64);
        const int64_t base = group_dot_reference(g, w);
        for (auto& s : g.signs) s ^= 1;
        CHECK(group_dot_reference(g, w) == -base);
        CHECK(group_dot_bitserial(pack_group(g), w).first == -base);
    }
}

TEST_CASE("scale_group_result worked values") {
    CHECK(scale_group_result(22, 0, 4, 0.5f) == 1.375f);
    CHECK(scale_group_result(0, 9, 3, 123.0f) == 0.0f);
    // E = M-1 makes the shift a no-op
    CHECK(scale_group_result(12345, 7, 8, 1.0f) == 12345.0f);
    CHECK_THROWS_AS(scale_group_result(1, 0, 4, std::numeric_limits<float>::quiet_NaN()),
                    NonFiniteInput);
    CHECK_THROWS_AS(scale_group_result(1 << 30, 16, 1, 3e38f), OverflowError);
}

TEST_CASE("gemm_anda counts ones exactly") {
    Matrix<Half> a(1, 64, float_to_half(1.0f));
    const QuantizedWeightMatrix w = make_weights(64, 1, 1, 1.0f);
    const Matrix<float> out = gemm_anda(encode_tensor(a, {64, 8}), w);
    CHECK(out.at(0, 0) == 64.0f);
}

TEST_CASE("gemm_anda reproduces the scaled worked group") {
    // Worked 4-element group padded to a 64-wide row, one weight column.
    Matrix<Half> a(1, 64, float_to_half(0.0f));
    a.at(0, 0) = float_to_half(1.5f);
    a.at(0, 1) = float_to_half(0.25f);
    a.at(0, 2) = float_to_half(-0.09375f);
    QuantizedWeightMatrix w = make_weights(64, 1, 0, 0.5f);
    w.values.at(0, 0) = 2;
    w.values.at(1, 0) = -1;
    w.values.at(2, 0) = 3;
    w.values.at(3, 0) = 7;
    const Matrix<float> out = gemm_anda(encode_tensor(a, {64, 4}), w);
    CHECK(out.at(0, 0) == 1.375f);
}

TEST_CASE("gemm_fp16_reference basics") {
    Matrix<Half> ident(2, 2);
    ident.at(0, 0) = float_to_half(1.0f);
    ident.at(1, 1) = float_to_half(1.0f);
    Matrix<float> identf(2, 2);
    identf.at(0, 0) = 1.0f;
    identf.at(1, 1) = 1.0f;
    const Matrix<float> out = gemm_fp16_reference(ident, identf);
    CHECK(out == identf);

    Matrix<Half> row(1, 2, float_to_half(1.0f));
    Matrix<float> col(2, 1);
    col.at(0, 0) = 1.0f;
    col.at(1, 0) = -1.0f;
    CHECK(gemm_fp16_reference(row, col).at(0, 0) == 0.0f);

    Matrix<float> bad(3, 1);
    CHECK_THROWS_AS(gemm_fp16_reference(row, bad), ShapeMismatch);
}

// Truncation bound propagated through the group sums, plus slack for the
// different binary32 accumulation groupings of the two paths.
static double output_bound(const AndaTensor& a, const QuantizedWeightMatrix& w, std::size_t t,
                           std::size_t n, double ref) {
    const std::size_t gs = a.params.group_size;
    double bound = 0.0;
    for (std::size_t g = 0; g < a.groups_per_row(); ++g) {
        const AndaGroup& grp = a.groups[t * a.groups_per_row() + g];
        const double grid = std::ldexp(1.0, grp.shared_exp - (grp.mantissa_len - 1));
        double wsum = 0.0;
        const std::size_t k0 = g * gs;
        const std::size_t len = std::min(gs, a.cols - k0);
        for (std::size_t i = 0; i < len; ++i) wsum += std::abs(static_cast<double>(w.values.at(k0 + i, n)));
        bound += grid * wsum * w.scale_at(k0, n);
    }
    return bound + 1e-4 * std::abs(ref) + 1e-6;
}

TEST_CASE("gemm_anda at M=16 stays within the propagated truncation bound") {
    Xoshiro256ss rng(0x99);
    const auto a = testsup::random_llm_like_matrix(rng, 8, 128);
    const auto wf = testsup::random_float_matrix(rng, 128, 8, 0.1);
    const QuantizedWeightMatrix w = quantize_rtn(wf);
    const AndaTensor enc = encode_tensor(a, {64, 16});
    const Matrix<float> got = gemm_anda(enc, w);
    const Matrix<float> ref = gemm_fp16_reference(a, dequantize(w));
    for (std::size_t t = 0; t < got.rows; ++t)
        for (std::size_t n = 0; n < got.cols; ++n)
            CHECK(std::abs(static_cast<double>(got.at(t, n)) - ref.at(t, n)) <=
                  output_bound(enc, w, t, n, ref.at(t, n)));
}

TEST_CASE("gemm_bfp_uniform is the encode-then-gemm composition") {
    Xoshiro256ss rng(0x9A);
    const auto a = testsup::random_llm_like_matrix(rng, 4, 100);
    const auto wf = testsup::random_float_matrix(rng, 100, 3, 0.2);
    const QuantizedWeightMatrix w = quantize_rtn(wf);
    for (int m : {4, 14}) {
        const Matrix<float> lhs = gemm_bfp_uniform(a, m, w);
        const Matrix<float> rhs = gemm_anda(encode_tensor(a, {64, m}), w);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("uniform-BFP output error is non-increasing from M=4 to M=14") {
    Xoshiro256ss rng(0x9B);
    const auto a = testsup::random_llm_like_matrix(rng, 8, 192);
    const auto wf = testsup::random_float_matrix(rng, 192, 8, 0.2);
    const QuantizedWeightMatrix w = quantize_rtn(wf);
    const Matrix<float> ref = gemm_fp16_reference(a, dequantize(w));
    const double e4 = error_stats(ref, gemm_bfp_uniform(a, 4, w)).nrmse;
    const double e14 = error_stats(ref, gemm_bfp_uniform(a, 14, w)).nrmse;
    CHECK(e14 <= e4);
}

TEST_CASE("all-zero activations give zero output for every M") {
    Matrix<Half> a(3, 70);
    Xoshiro256ss rng(0x9C);
    const QuantizedWeightMatrix w = quantize_rtn(testsup::random_float_matrix(rng, 70, 4, 1.0));
    for (int m : {1, 8, 16}) {
        const Matrix<float> out = gemm_bfp_uniform(a, m, w);
        for (float v : out.data) CHECK(v == 0.0f);
    }
}

TEST_CASE("gemm determinism: identical inputs give identical bits") {
    Xoshiro256ss rng(0x9D);
    const auto a = testsup::random_llm_like_matrix(rng, 4, 128);
    const QuantizedWeightMatrix w = quantize_rtn(testsup::random_float_matrix(rng, 128, 4, 0.3));
    const AndaTensor enc = encode_tensor(a, {64, 9});
    CHECK(gemm_anda(enc, w) == gemm_anda(enc, w));
}

TEST_CASE("binary16 output mode rounds through half") {
    Matrix<Half> a(1, 64, float_to_half(1.0f));
    QuantizedWeightMatrix w = make_weights(64, 1, 7, 1.0f / 3.0f);
    GemmConfig cfg;
    cfg.out = GemmConfig::Out::Binary16;
    const Matrix<float> out = gemm_anda(encode_tensor(a, {64, 8}), w, cfg);
    CHECK(out.at(0, 0) == half_to_float(float_to_half(448.0f * (1.0f / 3.0f))));
}

TEST_CASE("gemm_anda validates shapes and group alignment") {
    Matrix<Half> a(1, 65, float_to_half(1.0f));
    const QuantizedWeightMatrix w = make_weights(64, 1, 1, 1.0f);
    CHECK_THROWS_AS(gemm_anda(encode_tensor(a, {64, 8}), w), ShapeMismatch);

    Matrix<Half> a2(1, 64, float_to_half(1.0f));
    QuantizedWeightMatrix w2 = make_weights(64, 1, 1, 1.0f);
    w2.weight_group_size = 48; // not a multiple of the 64-wide activation group
    CHECK_THROWS_AS(gemm_anda(encode_tensor(a2, {64, 8}), w2), ShapeMismatch);
}
