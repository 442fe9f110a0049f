#include "lcc/pot_arith.hpp"

#include "lcc/errors.hpp"
#include "lcc/random.hpp"

#include <cmath>
#include <cstdlib>

namespace lcc {

double SignedPow2::value() const noexcept {
    return sign == 0 ? 0.0 : std::ldexp(static_cast<double>(sign), exponent);
}

Dyadic SignedPow2::to_dyadic() const { return sign == 0 ? Dyadic{} : Dyadic(Dyadic::Int(sign), exponent); }

Dyadic SignedPow2::scale(const Dyadic& x) const {
    if (sign == 0) return {};
    return sign > 0 ? x.shifted(exponent) : (-x).shifted(exponent);
}

std::string to_string(const SignedPow2& p) {
    if (p.sign == 0) return "0";
    return std::string(p.sign > 0 ? "+" : "-") + "2^" + std::to_string(p.exponent);
}

Pow2Rounding quantize_pow2(double x, ExponentRange range) {
    if (!std::isfinite(x)) throw DomainError("quantize_pow2: value is not finite");
    if (x == 0.0) return {};
    int e = 0;
    const double f = std::frexp(std::fabs(x), &e); // |x| = f * 2^e, f in [0.5, 1)
    // floor(log2|x|) = e - 1; round up once |x| >= 1.5 * 2^(e-1), i.e. f >= 0.75.
    int exponent = f >= 0.75 ? e : e - 1;
    bool clamped = false;
    if (exponent < range.min) {
        exponent = range.min;
        clamped = true;
    } else if (exponent > range.max) {
        exponent = range.max;
        clamped = true;
    }
    return {SignedPow2::make(x < 0 ? -1 : 1, exponent), clamped};
}

CsdForm::CsdForm(std::vector<CsdTerm> terms) : terms_(std::move(terms)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].sign != 1 && terms_[i].sign != -1) throw DomainError("CsdForm: term sign must be +1 or -1");
        if (i > 0 && terms_[i].exponent >= terms_[i - 1].exponent)
            throw DomainError("CsdForm: exponents must be strictly decreasing");
    }
}

double CsdForm::value() const noexcept {
    double v = 0.0;
    for (const auto& t : terms_) v += std::ldexp(static_cast<double>(t.sign), t.exponent);
    return v;
}

std::string CsdForm::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += ' ';
        out += t.sign > 0 ? '+' : '-';
        out += "2^" + std::to_string(t.exponent);
    }
    return out;
}

CsdForm binary_encode(double t, int num_bits) {
    if (num_bits < 1) throw DomainError("binary_encode: num_bits must be >= 1");
    if (!std::isfinite(t)) throw DomainError("binary_encode: value is not finite");
    const double scaled = std::floor(std::ldexp(std::fabs(t), num_bits));
    if (scaled >= 0x1.0p63) throw DomainError("binary_encode: |t| * 2^num_bits does not fit in 63 bits");
    auto magnitude = static_cast<std::uint64_t>(scaled);
    const int sign = t < 0 ? -1 : 1;
    std::vector<CsdTerm> terms;
    for (int bit = 63; bit >= 0; --bit) {
        if ((magnitude >> bit) & 1u) terms.push_back({sign, bit - num_bits});
    }
    return CsdForm(std::move(terms));
}

CsdForm csd_encode(double t, int max_terms, ExponentRange range) {
    if (max_terms < 0) throw DomainError("csd_encode: max_terms must be >= 0");
    if (!std::isfinite(t)) throw DomainError("csd_encode: value is not finite");
    std::vector<CsdTerm> terms;
    double residual = t;
    while (static_cast<int>(terms.size()) < max_terms && residual != 0.0) {
        const SignedPow2 q = quantize_pow2(residual, range).value;
        // A clamped exponent can repeat; the form must stay strictly decreasing.
        if (!terms.empty() && q.exponent >= terms.back().exponent) break;
        terms.push_back({q.sign, q.exponent});
        // |residual| lies within [q/2, 2q], so the subtraction is exact.
        residual -= q.value();
    }
    return CsdForm(std::move(terms));
}

Dyadic csd_decode(const CsdForm& form) {
    Dyadic sum;
    for (const auto& t : form.terms()) sum += Dyadic(Dyadic::Int(t.sign), t.exponent);
    return sum;
}

namespace {

template <class Encode>
double empirical_mse(std::uint64_t samples, std::uint64_t seed, Encode encode) {
    if (samples == 0) throw DomainError("distortion oracle: samples must be >= 1");
    Rng rng(seed);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double t = rng.uniform_pm1();
        const double err = t - encode(t).value();
        sum += err * err;
    }
    return sum / static_cast<double>(samples);
}

} // namespace

double csd_distortion_oracle(int num_terms, std::uint64_t samples, std::uint64_t seed) {
    return empirical_mse(samples, seed, [num_terms](double t) { return csd_encode(t, num_terms); });
}

double binary_distortion_oracle(int num_bits, std::uint64_t samples, std::uint64_t seed) {
    return empirical_mse(samples, seed, [num_bits](double t) { return binary_encode(t, num_bits); });
}

} // namespace lcc
