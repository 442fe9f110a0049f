#include "lcc/analysis.hpp"

#include "lcc/errors.hpp"
#include "lcc/parallel.hpp"
#include "lcc/plan.hpp"
#include "lcc/random.hpp"
#include "lcc/wiring.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lcc {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 20000;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// x^a (1-x)^b / (a B(a, b))
double front_factor(double a, double b, double x) {
    return std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b)) / a;
}

// Continued fraction for I_x(a, b) / front_factor, evaluated by the modified
// Lentz method. Converges quickly for x < (a + 1) / (a + b + 2).
bool beta_continued_fraction(double a, double b, double x, double& out) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            out = h;
            return true;
        }
    }
    return false;
}

// I_x(a, b) = x^a / B(a, b) * sum_n (1 - b)_n / n! * x^n / (a + n)
double beta_series(double a, double b, double x) {
    double term = 1.0;
    double sum = 1.0 / a;
    for (int n = 1; n <= 10 * kMaxIterations; ++n) {
        term *= (n - b) * x / n;
        const double add = term / (a + n);
        sum += add;
        if (std::fabs(add) < kEps * std::fabs(sum)) break;
    }
    return std::exp(a * std::log(x) - log_beta(a, b)) * sum;
}

// I_x(a, b) evaluated directly, for x on the fast side of the mean.
double beta_direct(double a, double b, double x) {
    double cf = 0.0;
    if (beta_continued_fraction(a, b, x, cf)) return front_factor(a, b, x) * cf;
    return beta_series(a, b, x);
}

void check_beta_args(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("reg_inc_beta: shape parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta: x must lie in [0, 1]");
}

} // namespace

BetaTails reg_inc_beta_tails(double a, double b, double x) {
    check_beta_args(a, b, x);
    if (x == 0.0) return {0.0, 1.0};
    if (x == 1.0) return {1.0, 0.0};
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = std::clamp(beta_direct(a, b, x), 0.0, 1.0);
        return {lower, 1.0 - lower};
    }
    const double upper = std::clamp(beta_direct(b, a, 1.0 - x), 0.0, 1.0);
    return {1.0 - upper, upper};
}

double reg_inc_beta(double a, double b, double x) { return reg_inc_beta_tails(a, b, x).lower; }

double code_rate(std::size_t rows, std::uint64_t cols) {
    if (rows < 1 || cols < 1) throw DomainError("code_rate: N and K must be >= 1");
    return std::log2(static_cast<double>(cols)) / static_cast<double>(rows);
}

namespace {

void check_model(std::size_t rows, std::uint64_t cols) {
    if (rows < 2) throw DomainError("angle error model: N must be >= 2");
    if (cols < 1) throw DomainError("angle error model: K must be >= 1");
}

// B(1/2, (N-1)/2, u)^K, computed in log space from whichever tail is small.
double beta_cdf_power(std::size_t rows, std::uint64_t cols, double u) {
    const BetaTails t = reg_inc_beta_tails(0.5, 0.5 * static_cast<double>(rows - 1), u);
    const double k = static_cast<double>(cols);
    if (t.lower <= 0.0) return 0.0;
    if (t.lower < 0.5) return std::exp(k * std::log(t.lower));
    return std::exp(k * std::log1p(-t.upper));
}

} // namespace

double rho2_cdf(std::size_t rows, double r) {
    check_model(rows, 1);
    return reg_inc_beta(0.5, 0.5 * static_cast<double>(rows - 1), std::clamp(r, 0.0, 1.0));
}

double angle_error_cdf(std::size_t rows, std::uint64_t cols, double r) {
    check_model(rows, cols);
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    // 1 - B^K = -expm1(K log B), accurate when B^K is close to 1.
    const BetaTails t = reg_inc_beta_tails(0.5, 0.5 * static_cast<double>(rows - 1), 1.0 - r);
    const double k = static_cast<double>(cols);
    if (t.lower <= 0.0) return 1.0;
    const double log_b = t.lower < 0.5 ? std::log(t.lower) : std::log1p(-t.upper);
    return -std::expm1(k * log_b);
}

double mean_sq_angle_error(std::size_t rows, std::uint64_t cols) {
    check_model(rows, cols);
    using boost::math::quadrature::gauss_kronrod;
    // u = sin^2(theta) smooths the square-root behaviour of the integrand at
    // u = 0 and, for N = 2, at u = 1.
    auto f = [rows, cols](double theta) {
        const double s = std::sin(theta);
        return beta_cdf_power(rows, cols, s * s) * std::sin(2.0 * theta);
    };
    // The integrand rises from 0 to 1 around u = 1 - 4^-R; splitting there
    // keeps the adaptive rule from straddling the step.
    const double rate = code_rate(rows, cols);
    const double knee_u = rate > 0.0 ? std::clamp(1.0 - asymptotic_threshold(rate), 0.05, 0.95) : 0.5;
    const double knee = std::asin(std::sqrt(knee_u));
    const double half_pi = std::acos(0.0);
    const double left = gauss_kronrod<double, 61>::integrate(f, 0.0, knee, 15, 1e-11);
    const double right = gauss_kronrod<double, 61>::integrate(f, knee, half_pi, 15, 1e-11);
    return left + right;
}

double total_error_from_angle(double mean_sq_angle) { return (1.0 + 26.0 * mean_sq_angle) / 27.0; }

double total_error(std::size_t rows, std::uint64_t cols) {
    return total_error_from_angle(mean_sq_angle_error(rows, cols));
}

double distortion_lower_bound(std::size_t rows, std::uint64_t cols, int steps) {
    if (steps < 0) throw DomainError("distortion_lower_bound: steps must be >= 0");
    return std::pow(total_error(rows, cols), steps + 1);
}

double asymptotic_threshold(double rate) {
    if (!(rate > 0.0)) throw DomainError("asymptotic_threshold: rate must be positive");
    return std::pow(4.0, -rate);
}

std::vector<double> simulate_angle_error(std::size_t rows, std::uint64_t cols, std::uint64_t trials,
                                         std::uint64_t seed) {
    check_model(rows, cols);
    if (trials < 1) throw DomainError("simulate_angle_error: trials must be >= 1");
    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
    std::vector<double> samples(trials);
    parallel_for(blocks, [&](std::size_t block) {
        Rng rng(derive_seed(seed, block));
        std::vector<double> t(rows);
        const std::uint64_t end = std::min<std::uint64_t>(trials, (block + 1) * kBlock);
        for (std::uint64_t i = block * kBlock; i < end; ++i) {
            double tt = 0.0;
            for (auto& v : t) {
                v = rng.normal();
                tt += v * v;
            }
            double best = 0.0;
            for (std::uint64_t k = 0; k < cols; ++k) {
                double tb = 0.0;
                double bb = 0.0;
                for (std::size_t n = 0; n < rows; ++n) {
                    const double b = rng.normal();
                    tb += t[n] * b;
                    bb += b * b;
                }
                best = std::max(best, tb * tb / (tt * bb));
            }
            samples[i] = std::max(0.0, 1.0 - best);
        }
    });
    std::sort(samples.begin(), samples.end());
    return samples;
}

std::vector<CurvePoint> simulate_decomposition(std::size_t rows, std::size_t cols, int stages, CodebookKind kind,
                                               std::uint64_t seed, int matrix_samples) {
    if (stages < 0) throw DomainError("simulate_decomposition: stages must be >= 0");
    if (matrix_samples < 1) throw DomainError("simulate_decomposition: need at least one matrix");

    const auto samples = static_cast<std::size_t>(matrix_samples);
    // errors[m][s]: mean relative squared column error of matrix m after s stages
    std::vector<std::vector<double>> errors(samples);
    for (std::size_t m = 0; m < samples; ++m) {
        const std::uint64_t sample_seed = derive_seed(seed, m);
        Rng rng(derive_seed(sample_seed, 0));
        RealMatrix target(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index c = 0; c < target.cols(); ++c)
            for (Eigen::Index r = 0; r < target.rows(); ++r) target(r, c) = rng.normal();

        CodebookDescriptor codebook;
        switch (kind) {
        case CodebookKind::mailman:
            if (cols != (std::size_t{1} << rows))
                throw DimensionError("simulate_decomposition: the mailman codebook needs K = 2^N");
            codebook = mailman_codebook(rows);
            break;
        case CodebookKind::two_sparse: codebook = two_sparse_codebook(rows, cols); break;
        case CodebookKind::self_designing: codebook = self_design_build(target); break;
        case CodebookKind::gaussian: codebook = gaussian_codebook(rows, cols, derive_seed(sample_seed, 1)); break;
        }
        const auto plan =
            decompose(target, std::move(codebook), StageSchedule::fixed(std::vector<int>(stages, 1)), sample_seed);

        auto column_error = [&](const RealMatrix& approx) {
            double sum = 0.0;
            for (Eigen::Index c = 0; c < target.cols(); ++c)
                sum += (target.col(c) - approx.col(c)).squaredNorm() / target.col(c).squaredNorm();
            return sum / static_cast<double>(target.cols());
        };
        auto& e = errors[m];
        e.push_back(1.0);
        RealMatrix effective = materialize(plan.codebook);
        for (const auto& w : plan.stages) {
            effective = right_multiply(effective, w);
            e.push_back(column_error(effective));
        }
    }

    std::vector<CurvePoint> curve;
    const double lb_base = rows >= 2 ? total_error(rows, cols) : 1.0;
    for (int s = 0; s <= stages; ++s) {
        CurvePoint p;
        p.s = s;
        p.lower_bound = std::pow(lb_base, s + 1);
        double sum = 0.0;
        for (const auto& e : errors) sum += e[static_cast<std::size_t>(s)];
        p.mean = sum / static_cast<double>(samples);
        double sq = 0.0;
        for (const auto& e : errors) sq += (e[static_cast<std::size_t>(s)] - p.mean) * (e[static_cast<std::size_t>(s)] - p.mean);
        p.std_error = samples > 1 ? std::sqrt(sq / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
        curve.push_back(p);
    }
    return curve;
}

} // namespace lcc
