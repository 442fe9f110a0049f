#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lcc {

// Exact number mantissa * 2^exponent.
//
// Kept in canonical form: the mantissa is odd, or zero with exponent 0. Two
// Dyadic values are equal iff their fields are equal.
class Dyadic {
public:
    using Int = boost::multiprecision::cpp_int;

    Dyadic() = default;
    Dyadic(Int mantissa, std::int64_t exponent);
    explicit Dyadic(std::int64_t integer) : Dyadic(Int(integer), 0) {}

    // Exact conversion; every finite double is dyadic. Throws DomainError on
    // NaN or infinity.
    static Dyadic from_double(double value);

    // Parses "m,e" style pairs elsewhere; this accepts decimal text such as
    // "-0.375" or "1.5e-3" and fails with FormatError unless the value has a
    // power-of-two denominator.
    static Dyadic parse_decimal(std::string_view text);

    const Int& mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }
    bool is_zero() const noexcept { return mantissa_.is_zero(); }
    int sign() const noexcept { return mantissa_.sign(); }

    // Multiplication by 2^shift.
    Dyadic shifted(std::int64_t shift) const;

    Dyadic operator-() const;
    Dyadic& operator+=(const Dyadic& other);
    Dyadic& operator-=(const Dyadic& other);
    friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
    friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);

    friend bool operator==(const Dyadic&, const Dyadic&) = default;
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

    // Nearest double (correctly rounded for in-range values).
    double to_double() const;

    // Exact decimal rendering; terminates because 2^-k has a finite decimal
    // expansion.
    std::string to_decimal() const;

    // "mantissa,exponent"
    std::string to_pair_string() const;

private:
    void normalize();

    Int mantissa_ = 0;
    std::int64_t exponent_ = 0;
};

using DyadicVector = std::vector<Dyadic>;

// Dense column-major matrix of exact values.
struct DyadicMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Dyadic> data;

    DyadicMatrix() = default;
    DyadicMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Dyadic& operator()(std::size_t r, std::size_t c) { return data[c * rows + r]; }
    const Dyadic& operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
};

// Reference dense product; no operation counting.
DyadicVector multiply(const DyadicMatrix& m, const DyadicVector& x);

} // namespace lcc
