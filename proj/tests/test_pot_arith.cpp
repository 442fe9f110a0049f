#include "lcc/errors.hpp"
#include "lcc/pot_arith.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lcc;

TEST_CASE("quantize_pow2 rounds at the arithmetic midpoint") {
    CHECK(quantize_pow2(0.75).value == SignedPow2::make(1, 0));
    CHECK(quantize_pow2(0.7).value == SignedPow2::make(1, -1));
    CHECK(quantize_pow2(-3.0).value == SignedPow2::make(-1, 2));
    CHECK(quantize_pow2(1.0).value == SignedPow2::make(1, 0));
    CHECK(quantize_pow2(1.4999).value == SignedPow2::make(1, 0));
    CHECK(quantize_pow2(0.0).value.is_zero());
    CHECK_FALSE(quantize_pow2(0.0).clamped);
    CHECK_THROWS_AS(quantize_pow2(std::nan("")), DomainError);
}

TEST_CASE("quantize_pow2 agrees with an exhaustive exponent scan") {
    Rng rng(21);
    for (int i = 0; i < 3000; ++i) {
        const double x = std::ldexp(rng.uniform_pm1(), static_cast<int>(rng.between(-40, 40)));
        const auto [sign, exp] = oracle::nearest_pow2(x);
        const auto got = quantize_pow2(x, {-200, 200}).value;
        CHECK(got.sign == sign);
        if (sign != 0) CHECK(got.exponent == exp);
    }
}

TEST_CASE("quantize_pow2 clamps and flags out-of-range exponents") {
    const auto hi = quantize_pow2(std::ldexp(1.0, 100));
    CHECK(hi.clamped);
    CHECK(hi.value == SignedPow2::make(1, 63));
    const auto lo = quantize_pow2(-std::ldexp(1.0, -100));
    CHECK(lo.clamped);
    CHECK(lo.value == SignedPow2::make(-1, -64));
    const auto narrow = quantize_pow2(8.0, {-2, 2});
    CHECK(narrow.clamped);
    CHECK(narrow.value.exponent == 2);
}

TEST_CASE("SignedPow2 scaling is a shift with a sign flip") {
    const Dyadic x(Dyadic::Int(5), -1);
    CHECK(SignedPow2::make(-1, 3).scale(x) == Dyadic(Dyadic::Int(-5), 2));
    CHECK(SignedPow2::zero().scale(x).is_zero());
    CHECK(SignedPow2::make(1, -2).value() == 0.25);
    CHECK(to_string(SignedPow2::make(-1, -2)) == "-2^-2");
}

TEST_CASE("CsdForm validates its terms") {
    CHECK_NOTHROW(CsdForm({{1, 0}, {-1, -2}}));
    CHECK_THROWS_AS(CsdForm({{1, 0}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(CsdForm({{1, -2}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(CsdForm({{0, 0}}), DomainError);
    CHECK(CsdForm().to_string() == "0");
}

TEST_CASE("csd_encode examples") {
    const CsdForm f = csd_encode(0.75, 2);
    CHECK(f.to_string() == "+2^0 -2^-2");
    CHECK(csd_decode(f) == Dyadic::from_double(0.75));
    CHECK(csd_encode(0.75, 1).to_string() == "+2^0");
    CHECK(csd_encode(0.0, 5).empty());
    CHECK(csd_encode(0.3, 0).empty());
    // Exact values stop early.
    CHECK(csd_encode(0.5, 8).size() == 1);
}

TEST_CASE("csd_encode residuals shrink and decoding is exact") {
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        const double t = rng.uniform_pm1();
        double prev = std::fabs(t);
        for (int c = 1; c <= 6; ++c) {
            const CsdForm f = csd_encode(t, c);
            CHECK(f.size() <= static_cast<std::size_t>(c));
            const double err = std::fabs(t - f.value());
            CHECK(err <= prev);
            CHECK(oracle::to_rational(csd_decode(f)) ==
                  oracle::to_rational(Dyadic::from_double(f.value())));
            prev = err;
        }
    }
}

TEST_CASE("binary_encode truncates to the bit budget") {
    CHECK(binary_encode(0.625, 4).to_string() == "+2^-1 +2^-3");
    CHECK(binary_encode(-0.625, 4).to_string() == "-2^-1 -2^-3");
    CHECK(binary_encode(0.0, 4).empty());
    CHECK(binary_encode(0.999, 1).to_string() == "+2^-1");
    CHECK_THROWS_AS(binary_encode(0.5, 0), DomainError);
    Rng rng(9);
    for (int i = 0; i < 2000; ++i) {
        const double t = rng.uniform_pm1();
        for (int b : {1, 4, 8, 15}) {
            const double v = binary_encode(t, b).value();
            CHECK(std::fabs(v) <= std::fabs(t));
            CHECK(std::fabs(t - v) < std::ldexp(1.0, -b));
        }
    }
}

TEST_CASE("distortion oracles are close to their scalar laws") {
    for (int b : {2, 6}) CHECK(binary_distortion_oracle(b, 200000, 1) == doctest::Approx(std::pow(4.0, -b) / 3).epsilon(0.05));
    for (int c : {1, 2}) CHECK(csd_distortion_oracle(c, 200000, 2) == doctest::Approx(std::pow(28.0, -c) / 3).epsilon(0.05));
}
