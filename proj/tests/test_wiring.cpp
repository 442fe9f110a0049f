#include "lcc/errors.hpp"
#include "lcc/wiring.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <limits>

using namespace lcc;

namespace {

RealMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

RealVector dense(const SparseColumn& col, Eigen::Index size) {
    RealVector w = RealVector::Zero(size);
    for (const auto& e : col) w(static_cast<Eigen::Index>(e.row)) = e.coef.value();
    return w;
}

// Best single replacement found by trying every column and evaluating the
// residual from scratch.
std::pair<Eigen::Index, double> brute_force_step(const RealVector& t, const RealMatrix& b, const RealVector& w) {
    const RealVector r = t - b * w;
    double best = oracle::residual_norm(t, b, w);
    Eigen::Index best_j = -1;
    double best_v = 0.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        const double bb = b.col(j).squaredNorm();
        if (bb == 0.0) continue;
        const double ideal = w(j) + b.col(j).dot(r) / bb;
        const auto [s, e] = oracle::nearest_pow2(ideal);
        RealVector w2 = w;
        w2(j) = s == 0 ? 0.0 : s * std::ldexp(1.0, e);
        const double n = oracle::residual_norm(t, b, w2);
        if (n < best * (1 - 1e-12)) {
            best = n;
            best_j = j;
            best_v = w2(j);
        }
    }
    return {best_j, best_v};
}

} // namespace

TEST_CASE("first greedy step matches the brute-force best replacement") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const RealMatrix b = gaussian(6, 20, seed);
        const RealVector t = gaussian(6, 1, seed + 1000).col(0);
        const ColumnFit fit = fit_column(t, b, 0);
        REQUIRE(fit.omega.size() == 1);
        const auto [j, v] = brute_force_step(t, b, RealVector::Zero(20));
        CHECK(static_cast<Eigen::Index>(fit.omega[0].row) == j);
        CHECK(fit.omega[0].coef.value() == v);
    }
}

TEST_CASE("later greedy steps match the brute-force oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RealMatrix b = gaussian(5, 16, seed);
        const RealVector t = gaussian(5, 1, seed + 500).col(0);
        for (int s = 1; s <= 4; ++s) {
            const ColumnFit prev = fit_column(t, b, s - 1);
            const ColumnFit next = fit_column(t, b, s);
            if (prev.stopped_early) continue;
            const auto [j, v] = brute_force_step(t, b, dense(prev.omega, 16));
            if (j < 0) continue;
            const RealVector w = dense(next.omega, 16);
            CHECK(w(j) == v);
        }
    }
}

TEST_CASE("an exactly representable column is recovered") {
    const RealMatrix b = gaussian(4, 10, 3);
    const RealVector t = 0.5 * b.col(3) - 4.0 * b.col(7);
    const ColumnFit fit = fit_column(t, b, 3);
    REQUIRE(fit.omega.size() == 2);
    CHECK(fit.omega[0].row == 3);
    CHECK(fit.omega[0].coef == SignedPow2::make(1, -1));
    CHECK(fit.omega[1].row == 7);
    CHECK(fit.omega[1].coef == SignedPow2::make(-1, 2));
    CHECK(fit.residual_norms.back() <= 1e-20 * t.squaredNorm());
    CHECK(fit.stopped_early);
}

TEST_CASE("a zero target needs no terms") {
    const ColumnFit fit = fit_column(RealVector::Zero(4), gaussian(4, 8, 1), 3);
    CHECK(fit.omega.empty());
    CHECK(fit.stopped_early);
}

TEST_CASE("residual norms are monotone and match a direct recomputation") {
    const RealMatrix b = gaussian(8, 64, 12);
    const RealVector t = gaussian(8, 1, 13).col(0);
    const ColumnFit fit = fit_column(t, b, 6);
    CHECK(fit.omega.size() <= 7);
    for (std::size_t i = 1; i < fit.residual_norms.size(); ++i) CHECK(fit.residual_norms[i] < fit.residual_norms[i - 1]);
    CHECK(fit.residual_norms.back() == doctest::Approx(oracle::residual_norm(t, b, dense(fit.omega, 64))));
}

TEST_CASE("fit_column_until stops at its threshold") {
    const RealMatrix b = gaussian(8, 256, 1);
    const RealVector t = gaussian(8, 1, 2).col(0);
    const AdaptiveColumnFit fit = fit_column_until(t, b, 1e-4, 40);
    CHECK(fit.reached);
    CHECK(fit.residual_norms.back() <= 1e-4 * t.squaredNorm());
    CHECK(fit.residual_norms[fit.residual_norms.size() - 2] > 1e-4 * t.squaredNorm());
    const AdaptiveColumnFit tight = fit_column_until(t, b, 1e-30, 2);
    CHECK_FALSE(tight.reached);
    CHECK(tight.omega.size() <= 3);
}

TEST_CASE("fit_stage shapes and budgets") {
    const RealMatrix b = gaussian(6, 30, 1);
    const RealMatrix t = gaussian(6, 12, 2);
    const Pow2Matrix w = fit_stage(t, b, 2);
    CHECK(w.rows() == 30);
    CHECK(w.cols() == 12);
    CHECK(w.max_column_nonzeros() <= 3);
    CHECK_THROWS_AS(fit_stage(gaussian(5, 12, 1), b, 1), DimensionError);
}

TEST_CASE("decompose with a fixed number of stages") {
    const RealMatrix t = gaussian(6, 64, 7);
    const auto plan = decompose(t, gaussian_codebook(6, 64, 8), StageSchedule::fixed({1, 1, 2}), 8);
    CHECK(plan.stages.size() == 3);
    CHECK(plan.stages[2].max_column_nonzeros() <= 3);
    REQUIRE(plan.metadata.stage_distortion.size() == 4);
    for (std::size_t l = 2; l < 4; ++l)
        CHECK(plan.metadata.stage_distortion[l] < plan.metadata.stage_distortion[l - 1]);
    CHECK(plan.metadata.target_hash == target_hash(t));
    CHECK(plan.metadata.seed == 8);
}

TEST_CASE("decompose until a bit target") {
    const RealMatrix t = gaussian(8, 128, 1);
    const auto plan = decompose(t, self_design_build(t), StageSchedule::until_bits(8), 1);
    CHECK(plan.metadata.stage_distortion.back() <= threshold(8));
    CHECK(plan.metadata.stage_distortion[plan.stages.size() - 1] > threshold(8));
    CHECK(distortion(plan, t).achieved_bits >= 8);
    CHECK_THROWS_AS(decompose(t, self_design_build(t), StageSchedule::until_bits(30, 1, 2)), AccuracyUnreachable);
}

TEST_CASE("adaptive single stage meets the per-column threshold") {
    const RealMatrix t = gaussian(8, 128, 3);
    const auto plan = decompose(t, self_design_build(gaussian(8, 128, 4)), StageSchedule::adaptive(8));
    REQUIRE(plan.stages.size() == 1);
    const auto d = distortion(plan, t);
    for (double c : d.column_relative) CHECK(c <= threshold(8) * (1 + 1e-9));
    CHECK_THROWS_AS(decompose(t, self_design_build(t), StageSchedule::adaptive(40, 1)), AccuracyUnreachable);
}

TEST_CASE("decompose rejects mismatched shapes and bad schedules") {
    const RealMatrix t = gaussian(4, 16, 1);
    CHECK_THROWS_AS(decompose(t, gaussian_codebook(4, 17, 1), StageSchedule::fixed({1})), DimensionError);
    StageSchedule bad = StageSchedule::adaptive(8);
    bad.target_bits.reset();
    CHECK_THROWS_AS(decompose(t, gaussian_codebook(4, 16, 1), bad), DomainError);
}
