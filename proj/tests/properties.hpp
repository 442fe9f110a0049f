#pragma once
// Randomized property checks shared by the unit suite and the acceptance
// runner. Each returns the number of failing cases.

#include "lcc/analysis.hpp"
#include "lcc/engine.hpp"
#include "lcc/plan.hpp"
#include "lcc/wiring.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace props {

inline lcc::RealMatrix gaussian(std::size_t rows, std::size_t cols, lcc::Rng& rng) {
    lcc::RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

// Every applied greedy step strictly lowers |r|^2, the reported norms match a
// direct recomputation, and at most 1 + s terms are used.
struct GreedyStats {
    int monotone_failures = 0;
    int budget_failures = 0;
};

inline GreedyStats check_greedy(int cases, std::uint64_t seed) {
    GreedyStats stats;
    for (int i = 0; i < cases; ++i) {
        lcc::Rng rng(lcc::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const std::size_t n = 2 + rng.below(10);
        const std::size_t k = 1 + rng.below(60);
        const int s = static_cast<int>(rng.below(8));
        const lcc::RealMatrix b = gaussian(n, k, rng);
        const lcc::RealVector t = gaussian(n, 1, rng).col(0);
        const auto fit = lcc::fit_column(t, b, s);
        bool ok = !fit.residual_norms.empty() && fit.residual_norms.size() <= static_cast<std::size_t>(s) + 2;
        for (std::size_t j = 1; j < fit.residual_norms.size(); ++j)
            ok = ok && fit.residual_norms[j] < fit.residual_norms[j - 1];
        lcc::RealVector w = lcc::RealVector::Zero(static_cast<Eigen::Index>(k));
        for (const auto& e : fit.omega) w(static_cast<Eigen::Index>(e.row)) = e.coef.value();
        const double direct = (t - b * w).squaredNorm();
        ok = ok && std::fabs(direct - fit.residual_norms.back()) <= 1e-9 * (t.squaredNorm() + 1e-300);
        ok = ok && direct <= t.squaredNorm();
        if (!ok) ++stats.monotone_failures;
        if (fit.omega.size() > static_cast<std::size_t>(1 + s)) ++stats.budget_failures;
    }
    return stats;
}

inline lcc::DecompositionPlan random_plan(lcc::Rng& rng) {
    const auto kind = static_cast<lcc::CodebookKind>(rng.below(4));
    const std::size_t n = 1 + rng.below(5);
    const std::size_t k = kind == lcc::CodebookKind::mailman ? std::size_t{1} << n : n + rng.below(30);
    lcc::DecompositionPlan plan;
    plan.rows = n;
    plan.cols = k;
    switch (kind) {
    case lcc::CodebookKind::mailman: plan.codebook = lcc::mailman_codebook(n); break;
    case lcc::CodebookKind::two_sparse:
        plan.cols = std::min(k, lcc::two_sparse_capacity(n, lcc::kTwoSparseDefaultMaxExponent));
        plan.codebook = lcc::two_sparse_codebook(n, plan.cols);
        break;
    case lcc::CodebookKind::self_designing: plan.codebook = lcc::self_design_build(gaussian(n, k, rng)); break;
    case lcc::CodebookKind::gaussian: plan.codebook = lcc::gaussian_codebook(n, k, rng.next()); break;
    }
    const auto stages = rng.below(6);
    for (std::uint64_t l = 0; l < stages; ++l)
        plan.stages.push_back(oracle::random_pow2_matrix(rng, plan.cols, plan.cols, 4));
    plan.metadata.seed = rng.next();
    plan.metadata.target_hash = "fnv1a64:" + std::to_string(rng.next());
    plan.metadata.schedule = rng.below(2) ? lcc::StageSchedule::adaptive(static_cast<int>(1 + rng.below(30)))
                                          : lcc::StageSchedule::fixed({1, 2, 0});
    plan.metadata.stage_distortion = {rng.uniform01(), std::ldexp(rng.uniform01(), -200)};
    return plan;
}

inline int check_serialization(int cases, std::uint64_t seed) {
    int failures = 0;
    for (int i = 0; i < cases; ++i) {
        lcc::Rng rng(lcc::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const auto plan = random_plan(rng);
        if (!(lcc::deserialize(lcc::serialize(plan)) == plan)) ++failures;
    }
    return failures;
}

// apply equals the rational product of the reconstruction, and the runtime
// counts equal the structural ones.
inline int check_engine(int cases, std::uint64_t seed, int max_stages = 8, std::size_t max_cols = 256) {
    int failures = 0;
    for (int i = 0; i < cases; ++i) {
        lcc::Rng rng(lcc::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const auto kind = static_cast<lcc::CodebookKind>(i % 4);
        const std::size_t n = kind == lcc::CodebookKind::mailman ? 1 + rng.below(8) : 1 + rng.below(12);
        const std::size_t k = kind == lcc::CodebookKind::mailman
                                  ? std::size_t{1} << n
                                  : n + rng.below(max_cols - n + 1);
        lcc::DecompositionPlan plan;
        plan.rows = n;
        plan.cols = k;
        switch (kind) {
        case lcc::CodebookKind::mailman: plan.codebook = lcc::mailman_codebook(n); break;
        case lcc::CodebookKind::two_sparse:
        plan.cols = std::min(k, lcc::two_sparse_capacity(n, lcc::kTwoSparseDefaultMaxExponent));
        plan.codebook = lcc::two_sparse_codebook(n, plan.cols);
        break;
        case lcc::CodebookKind::self_designing: plan.codebook = lcc::self_design_build(gaussian(n, k, rng)); break;
        case lcc::CodebookKind::gaussian: plan.codebook = lcc::gaussian_codebook(n, k, rng.next()); break;
        }
        const std::size_t kk = plan.cols;
        const auto stages = rng.below(static_cast<std::uint64_t>(max_stages) + 1);
        for (std::uint64_t l = 0; l < stages; ++l) plan.stages.push_back(oracle::random_pow2_matrix(rng, kk, kk, 3));
        const auto x = oracle::random_dyadic_vector(rng, kk);
        const auto r = lcc::apply(plan, x);
        const bool ok = oracle::equal(r.y, oracle::dense_product(lcc::reconstruct_exact(plan), x)) &&
                        r.counts == lcc::cost_of(plan).executed;
        if (!ok) ++failures;
    }
    return failures;
}

// rho2_cdf and angle_error_cdf are monotone in r, hit 0 and 1 at the ends,
// and a larger codebook never has a smaller angle-error CDF.
inline int check_cdfs(int cases, std::uint64_t seed) {
    int failures = 0;
    for (int i = 0; i < cases; ++i) {
        lcc::Rng rng(lcc::derive_seed(seed, static_cast<std::uint64_t>(i)));
        const std::size_t n = 2 + rng.below(40);
        const std::uint64_t k = 1 + rng.below(1u << (1 + rng.below(20)));
        bool ok = lcc::rho2_cdf(n, 0.0) == 0.0 && lcc::rho2_cdf(n, 1.0) == 1.0 &&
                  lcc::angle_error_cdf(n, k, 0.0) == 0.0 && lcc::angle_error_cdf(n, k, 1.0) == 1.0;
        double prev_rho = 0.0;
        double prev_angle = 0.0;
        for (int g = 1; g <= 40; ++g) {
            const double r = g / 40.0;
            const double rho = lcc::rho2_cdf(n, r);
            const double angle = lcc::angle_error_cdf(n, k, r);
            const double bigger = lcc::angle_error_cdf(n, k + 1, r);
            ok = ok && rho >= prev_rho && angle >= prev_angle && bigger >= angle - 1e-15;
            ok = ok && rho <= 1.0 && angle <= 1.0;
            prev_rho = rho;
            prev_angle = angle;
        }
        if (!ok) ++failures;
    }
    return failures;
}

} // namespace props
