#include "lcc/dyadic.hpp"

#include "lcc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace lcc {

namespace mp = boost::multiprecision;

namespace {

std::size_t trailing_zero_bits(const Dyadic::Int& m) {
    return m.sign() < 0 ? mp::lsb(Dyadic::Int(-m)) : mp::lsb(m);
}

Dyadic::Int pow5(std::int64_t k) {
    Dyadic::Int r = 1;
    Dyadic::Int base = 5;
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

// Decimal exponents beyond this are rejected rather than expanded.
constexpr std::int64_t kMaxDecimalScale = 4000;

} // namespace

Dyadic::Dyadic(Int mantissa, std::int64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
}

void Dyadic::normalize() {
    if (mantissa_.is_zero()) {
        exponent_ = 0;
        return;
    }
    if (mp::bit_test(mantissa_.sign() < 0 ? Int(-mantissa_) : mantissa_, 0)) return;
    const auto shift = trailing_zero_bits(mantissa_);
    mantissa_ >>= shift;
    exponent_ += static_cast<std::int64_t>(shift);
}

Dyadic Dyadic::from_double(double value) {
    if (!std::isfinite(value)) throw DomainError("Dyadic::from_double: value is not finite");
    if (value == 0.0) return {};
    int exp = 0;
    const double frac = std::frexp(value, &exp);
    // frac * 2^53 is an integer for every finite double.
    const auto scaled = static_cast<std::int64_t>(std::ldexp(frac, 53));
    return Dyadic(Int(scaled), static_cast<std::int64_t>(exp) - 53);
}

Dyadic Dyadic::parse_decimal(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = text.size();
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    text = text.substr(i, end - i);
    if (text.empty()) throw FormatError("empty number");

    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    Int digits = 0;
    std::int64_t fraction_digits = 0;
    std::size_t digit_count = 0;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            ++digit_count;
            if (seen_point) ++fraction_digits;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digit_count == 0) throw FormatError("not a number: '" + std::string(text) + "'");

    std::int64_t exp10 = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_negative = text[pos] == '-';
            ++pos;
        }
        const std::size_t start = pos;
        for (; pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); ++pos) {
            exp10 = exp10 * 10 + (text[pos] - '0');
            if (exp10 > kMaxDecimalScale) throw FormatError("decimal exponent too large");
        }
        if (pos == start) throw FormatError("missing exponent digits: '" + std::string(text) + "'");
        if (exp_negative) exp10 = -exp10;
    }
    if (pos != text.size()) throw FormatError("trailing characters in number: '" + std::string(text) + "'");

    if (negative) digits = -digits;
    const std::int64_t scale = exp10 - fraction_digits;
    if (std::abs(scale) > kMaxDecimalScale) throw FormatError("decimal exponent too large");
    if (scale >= 0) return Dyadic(digits * pow5(scale), scale);

    // digits * 10^scale = (digits / 5^-scale) * 2^scale
    const Int divisor = pow5(-scale);
    Int quotient;
    Int remainder;
    mp::divide_qr(digits, divisor, quotient, remainder);
    if (!remainder.is_zero())
        throw FormatError("'" + std::string(text) + "' is not a dyadic rational (denominator is not a power of two)");
    return Dyadic(std::move(quotient), scale);
}

Dyadic Dyadic::shifted(std::int64_t shift) const {
    if (is_zero()) return {};
    Dyadic r = *this;
    r.exponent_ += shift;
    return r;
}

Dyadic Dyadic::operator-() const {
    Dyadic r = *this;
    r.mantissa_ = -r.mantissa_;
    return r;
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
    if (other.is_zero()) return *this;
    if (is_zero()) return *this = other;
    if (exponent_ == other.exponent_) {
        mantissa_ += other.mantissa_;
    } else if (exponent_ < other.exponent_) {
        mantissa_ += other.mantissa_ << static_cast<unsigned>(other.exponent_ - exponent_);
    } else {
        mantissa_ <<= static_cast<unsigned>(exponent_ - other.exponent_);
        mantissa_ += other.mantissa_;
        exponent_ = other.exponent_;
    }
    normalize();
    return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& other) { return *this += -other; }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const int s = (a - b).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double Dyadic::to_double() const {
    if (is_zero()) return 0.0;
    const Int magnitude = mantissa_.sign() < 0 ? Int(-mantissa_) : mantissa_;
    const auto bits = static_cast<std::int64_t>(mp::msb(magnitude)) + 1;
    double value = 0.0;
    std::int64_t exp = exponent_;
    if (bits > 200) {
        // Keep 200 leading bits; the remaining ones cannot affect a 53-bit
        // result except through ties, which a sticky bit preserves.
        const auto drop = static_cast<unsigned>(bits - 200);
        Int head = magnitude >> drop;
        if (trailing_zero_bits(magnitude) < drop) head |= 1;
        value = head.convert_to<double>();
        exp += drop;
    } else {
        value = magnitude.convert_to<double>();
    }
    const double clamped_exp = std::clamp<double>(static_cast<double>(exp), -4000.0, 4000.0);
    value = std::ldexp(value, static_cast<int>(clamped_exp));
    return mantissa_.sign() < 0 ? -value : value;
}

std::string Dyadic::to_decimal() const {
    if (is_zero()) return "0";
    if (exponent_ >= 0) return Int(mantissa_ << static_cast<unsigned>(exponent_)).str();
    const std::int64_t k = -exponent_;
    Int scaled = mantissa_ * pow5(k);
    const bool negative = scaled.sign() < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.str();
    if (static_cast<std::int64_t>(digits.size()) <= k)
        digits.insert(0, static_cast<std::size_t>(k) - digits.size() + 1, '0');
    digits.insert(digits.size() - static_cast<std::size_t>(k), 1, '.');
    return negative ? "-" + digits : digits;
}

std::string Dyadic::to_pair_string() const { return mantissa_.str() + "," + std::to_string(exponent_); }

DyadicVector multiply(const DyadicMatrix& m, const DyadicVector& x) {
    if (x.size() != m.cols) throw DimensionError("multiply: vector length does not match matrix columns");
    DyadicVector y(m.rows);
    for (std::size_t c = 0; c < m.cols; ++c) {
        if (x[c].is_zero()) continue;
        for (std::size_t r = 0; r < m.rows; ++r) {
            const Dyadic& a = m(r, c);
            if (!a.is_zero()) y[r] += a * x[c];
        }
    }
    return y;
}

} // namespace lcc
