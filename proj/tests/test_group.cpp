#include "doctest.h"

#include <cmath>

#include "anda/group.hpp"
#include "anda/tensor.hpp"
#include "test_support.hpp"

using namespace anda;
using testsup::random_finite_half;
using testsup::random_half_group;

namespace {

std::vector<Half> halves(std::initializer_list<float> xs) {
    std::vector<Half> v;
    for (float x : xs) v.push_back(float_to_half(x));
    return v;
}

} // namespace

TEST_CASE("encode_group: identical values land on the Q1 grid exactly") {
    const AndaGroup g = encode_group(halves({1.0f, 1.0f, 1.0f, 1.0f}), 4, 4);
    CHECK(g.shared_exp == 0);
    CHECK(g.mantissas == std::vector<uint16_t>{8, 8, 8, 8});
    CHECK(g.signs == std::vector<uint8_t>{0, 0, 0, 0});
}

TEST_CASE("encode_group: all-zero group stores the minimum exponent") {
    const AndaGroup g = encode_group(halves({0.0f, 0.0f}), 6, 2);
    CHECK(g.shared_exp == -15);
    CHECK(g.mantissas == std::vector<uint16_t>{0, 0});
}

TEST_CASE("encode_group: shift-and-truncate worked example") {
    const AndaGroup g = encode_group(halves({1.5f, 0.25f, -0.09375f, 0.0f}), 4, 4);
    CHECK(g.shared_exp == 0);
    CHECK(g.signs == std::vector<uint8_t>{0, 0, 1, 0});
    CHECK(g.mantissas == std::vector<uint16_t>{12, 2, 0, 0});
}

TEST_CASE("encode_group rejects non-finite input") {
    CHECK_THROWS_AS(encode_group(std::vector<Half>{Half(0x7C00)}, 4, 1), NonFiniteInput);
    CHECK_THROWS_AS(encode_group(std::vector<Half>{Half(0x7E00)}, 4, 1), NonFiniteInput);
}

TEST_CASE("decode_group inverts the worked example") {
    AndaGroup g;
    g.shared_exp = 0;
    g.mantissa_len = 4;
    g.signs = {0, 0, 1, 0};
    g.mantissas = {12, 2, 0, 0};
    const auto vals = decode_group(g);
    CHECK(vals == std::vector<float>{1.5f, 0.25f, 0.0f, 0.0f});
    // mantissa 0 decodes to +0 even with the sign flag set
    CHECK(!std::signbit(vals[2]));
}

TEST_CASE("decode_group: full-width mantissa at zero shift is lossless") {
    const Half h(0x3C01); // 1.0009765625
    const AndaGroup g = encode_group(std::vector<Half>{h}, 11, 1);
    CHECK(decode_group(g)[0] == half_to_float(h));
}

TEST_CASE("truncation bound and magnitude shrink hold over random groups") {
    Xoshiro256ss rng(0xA11CE);
    for (int m : {1, 4, 8, 11, 16}) {
        for (int rep = 0; rep < 200; ++rep) {
            const auto vals = random_half_group(rng, 64);
            const AndaGroup g = encode_group(vals, m);
            const auto dec = decode_group(g);
            const double grid = std::ldexp(1.0, g.shared_exp - (m - 1));
            for (std::size_t i = 0; i < vals.size(); ++i) {
                const double x = half_to_float(vals[i]);
                const double d = dec[i];
                CHECK(std::abs(d - x) < grid);
                CHECK(std::abs(d) <= std::abs(x));
            }
        }
    }
}

TEST_CASE("per-element error is non-increasing in M") {
    Xoshiro256ss rng(0xB0B);
    for (int rep = 0; rep < 100; ++rep) {
        const auto vals = random_half_group(rng, 64);
        std::vector<double> prev_err(64, 0.0);
        for (int m = kMinMantissaLen; m <= kMaxMantissaLen; ++m) {
            const auto dec = decode_group(encode_group(vals, m));
            for (std::size_t i = 0; i < 64; ++i) {
                const double err = std::abs(half_to_float(vals[i]) - dec[i]);
                if (m > kMinMantissaLen) CHECK(err <= prev_err[i]);
                prev_err[i] = err;
            }
        }
    }
}

TEST_CASE("encode is deterministic") {
    Xoshiro256ss rng(7);
    const auto vals = random_half_group(rng, 64);
    CHECK(encode_group(vals, 9) == encode_group(vals, 9));
}

TEST_CASE("max-exponent normal element sets the Q1 bit") {
    Xoshiro256ss rng(0xE0);
    for (int rep = 0; rep < 200; ++rep) {
        const auto vals = random_half_group(rng, 16);
        const AndaGroup g = encode_group(vals, 1 + static_cast<int>(rng.next() % 16), 16);
        bool has_normal = false;
        for (Half h : vals)
            if (h.classify() == FpClass::Normal) has_normal = true;
        if (!has_normal) continue; // all-subnormal groups have no integer bit
        bool top_set = false;
        for (uint16_t m : g.mantissas)
            if (m >> (g.mantissa_len - 1)) top_set = true;
        CHECK(top_set);
    }
}

TEST_CASE("subnormal inputs use exponent -14 and significand below one") {
    // Largest subnormal alone in a group: E = -14 and the Q1 bit stays clear.
    const AndaGroup g = encode_group(std::vector<Half>{Half(0x03FF)}, 11, 1);
    CHECK(g.shared_exp == -14);
    CHECK(g.mantissas[0] == 1023); // 0.1111111111 in Q1.10
    CHECK(decode_group(g)[0] == half_to_float(Half(0x03FF)));
}

TEST_CASE("encode_tensor tiles along the innermost dimension and pads with zeros") {
    Matrix<Half> m(1, 65, float_to_half(2.0f));
    const AndaTensor t = encode_tensor(m, {64, 8});
    CHECK(t.group_count() == 2);
    CHECK(t.groups[1].mantissas[0] != 0);
    for (std::size_t i = 1; i < 64; ++i) CHECK(t.groups[1].mantissas[i] == 0);
    const Matrix<float> dec = decode_tensor(t);
    CHECK(dec.rows == 1);
    CHECK(dec.cols == 65);
    for (std::size_t i = 0; i < 65; ++i) CHECK(dec.at(0, i) == 2.0f);
}

TEST_CASE("tensor group count follows rows * ceil(cols/gs)") {
    Xoshiro256ss rng(11);
    const auto m = testsup::random_half_matrix(rng, 4, 200);
    const AndaTensor t = encode_tensor(m, {64, 5});
    CHECK(t.group_count() == 4 * 4);
    CHECK(t.groups_per_row() == 4);
}

TEST_CASE("roundtrip error shrinks (or holds) when M grows, tensor level") {
    Xoshiro256ss rng(0x5EED);
    const auto m = testsup::random_half_matrix(rng, 4, 256);
    const ErrorStats e4 = error_stats(m, decode_tensor(encode_tensor(m, {64, 4})));
    const ErrorStats e16 = error_stats(m, decode_tensor(encode_tensor(m, {64, 16})));
    CHECK(e16.max_abs <= e4.max_abs);
    CHECK(e16.rmse <= e4.rmse);
}

TEST_CASE("error_stats worked values") {
    Matrix<Half> ident(2, 2, float_to_half(3.0f));
    Matrix<float> same(2, 2, 3.0f);
    const ErrorStats zero = error_stats(ident, same);
    CHECK(zero.max_abs == 0.0);
    CHECK(zero.rmse == 0.0);
    CHECK(zero.nrmse == 0.0);

    Matrix<Half> orig(1, 2);
    orig.at(0, 0) = float_to_half(1.0f);
    orig.at(0, 1) = float_to_half(0.0f);
    Matrix<float> dec(1, 2, 0.0f);
    const ErrorStats s = error_stats(orig, dec);
    CHECK(s.max_abs == 1.0);
    CHECK(s.rmse == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s.nrmse == doctest::Approx(1.0).epsilon(1e-12));

    // Worked group at M=4: the -0.09375 element truncates away entirely.
    Matrix<Half> fig(1, 4);
    fig.at(0, 0) = float_to_half(1.5f);
    fig.at(0, 1) = float_to_half(0.25f);
    fig.at(0, 2) = float_to_half(-0.09375f);
    fig.at(0, 3) = float_to_half(0.0f);
    const ErrorStats fs = error_stats(fig, decode_tensor(encode_tensor(fig, {64, 4})));
    CHECK(fs.max_abs == 0.09375);

    Matrix<Half> bad(2, 2);
    CHECK_THROWS_AS(error_stats(bad, dec), ShapeMismatch);
}

TEST_CASE("all-zero original gives nrmse 0 by convention") {
    Matrix<Half> zeros(2, 3);
    Matrix<float> dec(2, 3, 0.0f);
    CHECK(error_stats(zeros, dec).nrmse == 0.0);
}

TEST_CASE("tensor encode propagates NonFiniteInput") {
    Matrix<Half> m(1, 2);
    m.at(0, 1) = Half(0xFC00);
    CHECK_THROWS_AS(encode_tensor(m, {64, 8}), NonFiniteInput);
}
