#pragma once

// Scalar power-of-two arithmetic: signed powers of two, canonical signed
// digit (CSD) forms, the binary and CSD quantizers and their empirical
// distortion oracles.

#include "lcc/dyadic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lcc {

struct ExponentRange {
    int min = -64;
    int max = 63;
};

// A value from {0, +-2^e}. The exponent is meaningless when sign == 0 and is
// kept at 0 so that equality is field-wise.
struct SignedPow2 {
    int sign = 0;
    int exponent = 0;

    static constexpr SignedPow2 zero() noexcept { return {}; }
    static constexpr SignedPow2 make(int sign, int exponent) noexcept {
        return sign == 0 ? SignedPow2{} : SignedPow2{sign > 0 ? 1 : -1, exponent};
    }

    bool is_zero() const noexcept { return sign == 0; }
    double value() const noexcept;
    Dyadic to_dyadic() const;
    // x * value, computed as a shift plus optional sign flip.
    Dyadic scale(const Dyadic& x) const;

    friend bool operator==(const SignedPow2&, const SignedPow2&) = default;
};

std::string to_string(const SignedPow2& p);

struct Pow2Rounding {
    SignedPow2 value;
    bool clamped = false;
};

// Nearest signed power of two under arithmetic-midpoint rounding: with
// p = 2^floor(log2|x|), magnitudes in [p, 1.5p) map to p and [1.5p, 2p) map
// to 2p. Zero maps to zero. Exponents outside `range` are clamped and
// flagged. Throws DomainError for non-finite x.
Pow2Rounding quantize_pow2(double x, ExponentRange range = {});

struct CsdTerm {
    int sign = 1;
    int exponent = 0;
    friend bool operator==(const CsdTerm&, const CsdTerm&) = default;
};

// Sum of signed powers of two with strictly decreasing exponents.
class CsdForm {
public:
    CsdForm() = default;
    // Throws DomainError if the invariants are violated.
    explicit CsdForm(std::vector<CsdTerm> terms);

    const std::vector<CsdTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    double value() const noexcept;

    // "+2^0 -2^-2"; the empty form prints as "0".
    std::string to_string() const;

    friend bool operator==(const CsdForm&, const CsdForm&) = default;

private:
    std::vector<CsdTerm> terms_;
};

// Sign-magnitude binary expansion of t with num_bits fractional bits. The
// magnitude is truncated (rounded toward zero), so the error is uniform on
// one quantization step and the mean squared error over uniform t is
// 4^-num_bits / 3.
CsdForm binary_encode(double t, int num_bits);

// Greedy recentered expansion: quantize_pow2 the residual and subtract, at
// most max_terms times or until the residual vanishes.
CsdForm csd_encode(double t, int max_terms, ExponentRange range = {});

Dyadic csd_decode(const CsdForm& form);

// Mean of (t - decode(encode(t)))^2 for t ~ U[-1, 1]; approaches 28^-C / 3.
double csd_distortion_oracle(int num_terms, std::uint64_t samples, std::uint64_t seed);

// Same for binary_encode; approaches 4^-num_bits / 3.
double binary_distortion_oracle(int num_bits, std::uint64_t samples, std::uint64_t seed);

} // namespace lcc
