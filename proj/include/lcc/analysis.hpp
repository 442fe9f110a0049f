#pragma once

// Performance model for greedy decomposition with i.i.d. Gaussian codebooks:
// the squared correlation between a target and a random codeword is
// Beta(1/2, (N-1)/2); the best of K codewords leaves the squared angle error
//   P(a^2 <= r) = 1 - B(1/2, (N-1)/2, 1 - r)^K,
// quantizing the scale to a power of two adds the distance error
// (1 - mean a^2) / 27, and s + 1 independent steps would leave
//   D_LB = ((1 + 26 mean a^2) / 27)^(s + 1),
// a lower bound on the error actually observed.

#include "lcc/codebook.hpp"

#include <cstdint>
#include <vector>

namespace lcc {

// Regularized incomplete beta function I_x(a, b), absolute accuracy ~1e-14.
// Throws DomainError unless a, b > 0 and 0 <= x <= 1.
double reg_inc_beta(double a, double b, double x);

// I_x(a, b) and 1 - I_x(a, b), each with small relative error on the side
// that is evaluated directly.
struct BetaTails {
    double lower = 0.0;
    double upper = 1.0;
};
BetaTails reg_inc_beta_tails(double a, double b, double x);

double code_rate(std::size_t rows, std::uint64_t cols);

// CDF of the squared correlation coefficient, B(1/2, (N-1)/2, r). N >= 2.
double rho2_cdf(std::size_t rows, double r);

// CDF of the minimum squared angle error over K codewords.
double angle_error_cdf(std::size_t rows, std::uint64_t cols, double r);

// integral_0^1 B(1/2, (N-1)/2, r)^K dr, relative accuracy 1e-8.
double mean_sq_angle_error(std::size_t rows, std::uint64_t cols);

// (1 + 26 a2) / 27 for a given mean squared angle error a2.
double total_error_from_angle(double mean_sq_angle);
double total_error(std::size_t rows, std::uint64_t cols);

// total_error^(steps + 1)
double distortion_lower_bound(std::size_t rows, std::uint64_t cols, int steps);

// Step location 4^-R of the limiting angle-error CDF.
double asymptotic_threshold(double rate);

struct AngleErrorModel {
    std::size_t rows = 0;
    std::uint64_t cols = 0;

    double rate() const { return code_rate(rows, cols); }
    double cdf(double r) const { return angle_error_cdf(rows, cols, r); }
    double mean_sq_angle() const { return mean_sq_angle_error(rows, cols); }
    double mean_sq_distance() const { return (1.0 - mean_sq_angle()) / 27.0; }
    double total() const { return total_error(rows, cols); }
    double lower_bound(int steps) const { return distortion_lower_bound(rows, cols, steps); }
};

// Sorted samples of 1 - max_k rho_k^2 for Gaussian targets and codewords.
std::vector<double> simulate_angle_error(std::size_t rows, std::uint64_t cols, std::uint64_t trials,
                                         std::uint64_t seed);

// sup_r |F_empirical(r) - cdf(r)| for sorted samples.
template <class Cdf>
double ks_distance(const std::vector<double>& sorted, Cdf cdf) {
    double worst = 0.0;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double below = static_cast<double>(i) / n;
        const double above = static_cast<double>(i + 1) / n;
        worst = std::max({worst, f - below, above - f});
    }
    return worst;
}

struct CurvePoint {
    int s = 0;                 // wiring additions per column = number of stages
    double lower_bound = 0.0;  // D_LB(s)
    double mean = 0.0;         // mean relative squared column error
    double std_error = 0.0;    // across matrices
};

// Gaussian N x K targets decomposed with `stages` stages of one extra term
// each. Point s = 0 is the zero approximation (error 1); point s >= 1 is the
// error after s stages.
std::vector<CurvePoint> simulate_decomposition(std::size_t rows, std::size_t cols, int stages,
                                               CodebookKind kind, std::uint64_t seed,
                                               int matrix_samples);

} // namespace lcc
