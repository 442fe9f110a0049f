#include "lcc/errors.hpp"
#include "lcc/plan.hpp"
#include "lcc/wiring.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace lcc;

namespace {

RealMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

} // namespace

TEST_CASE("threshold of q-bit arithmetic") {
    CHECK(threshold(1) == doctest::Approx(1.0 / 3));
    CHECK(threshold(16) == std::pow(4.0, -15) / 3);
    // 16 bit is about -95 dB.
    CHECK(10 * std::log10(threshold(16)) == doctest::Approx(-95.08).epsilon(1e-3));
    CHECK_THROWS_AS(threshold(0), DomainError);
}

TEST_CASE("achieved_bits") {
    for (int q = 1; q <= 40; ++q) {
        CHECK(achieved_bits(threshold(q)) == q);
        CHECK(achieved_bits(threshold(q) * 1.0001) == q - 1);
    }
    CHECK(achieved_bits(0.5) == 0);
    CHECK(std::isinf(achieved_bits(0.0)));
}

TEST_CASE("reconstruction applies stages in design order") {
    const RealMatrix t = gaussian(4, 16, 1);
    const auto plan = decompose(t, two_sparse_codebook(4, 16), StageSchedule::fixed({1, 1}));
    const RealMatrix expected =
        materialize(plan.codebook) * plan.stages[0].to_dense() * plan.stages[1].to_dense();
    CHECK((reconstruct(plan) - expected).norm() <= 1e-12 * expected.norm());
    const DyadicMatrix exact = reconstruct_exact(plan);
    CHECK((to_real(exact) - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("cost of a self-designing plan with one extra term per stage is (L + 2) K") {
    const RealMatrix t = gaussian(8, 128, 2);
    const auto plan = decompose(t, self_design_build(t), StageSchedule::fixed({1, 1, 1, 1}));
    const CostReport cost = cost_of(plan);
    std::size_t full = 0;
    for (const auto& f : plan.codebook.factors) full += f.nonzeros();
    for (const auto& w : plan.stages) full += w.nonzeros();
    // Every column that stopped early costs one addition less.
    const std::size_t columns = 6 * 128;
    CHECK(cost.additions == full - columns);
    CHECK(cost.additions <= 6 * 128);
    CHECK(cost.adds_per_entry == doctest::Approx(static_cast<double>(cost.additions) / (8 * 128)));
    CHECK_FALSE(cost.analytic_only);
    CHECK(cost.stage_additions.size() == 4);
}

TEST_CASE("mailman and gaussian cost accounting") {
    const RealMatrix t = gaussian(3, 8, 4);
    const auto mm = decompose(t, mailman_codebook(3), StageSchedule::fixed({}));
    CHECK(cost_of(mm).additions == 10);
    CHECK(cost_of(mm).executed.additions == 10);
    const auto g = decompose(t, gaussian_codebook(3, 8, 1), StageSchedule::fixed({}));
    const CostReport c = cost_of(g);
    CHECK(c.analytic_only);
    CHECK(c.executed.multiplications == 24);
    CHECK(c.executed.additions == 21);
}

TEST_CASE("distortion report") {
    RealMatrix t(2, 2);
    t << 1, 0, 0, 2;
    RealMatrix a(2, 2);
    a << 1, 0, 0, 1;
    const auto d = distortion_of(a, t);
    CHECK(d.relative == doctest::Approx(1.0 / 5));
    CHECK(d.column_relative[0] == 0.0);
    CHECK(d.column_relative[1] == doctest::Approx(0.25));
    CHECK(d.mean_column_relative == doctest::Approx(0.125));
    CHECK(d.db == doctest::Approx(10 * std::log10(0.2)));
    CHECK_THROWS_AS(distortion_of(a, RealMatrix::Zero(3, 2)), DimensionError);
}

TEST_CASE("relative distortion is invariant to scaling by two") {
    const RealMatrix t = gaussian(4, 16, 9);
    auto plan = decompose(t, two_sparse_codebook(4, 16), StageSchedule::fixed({1}));
    const double before = distortion(plan, t).relative;
    std::vector<SparseColumn> doubled;
    for (const auto& col : plan.stages[0].columns()) {
        SparseColumn c = col;
        for (auto& e : c) e.coef.exponent += 1;
        doubled.push_back(c);
    }
    plan.stages[0] = Pow2Matrix(16, doubled);
    CHECK(distortion(plan, 2.0 * t).relative == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("serialization round-trips") {
    const RealMatrix t = gaussian(6, 40, 3);
    for (const CodebookDescriptor& cb : {self_design_build(t), two_sparse_codebook(6, 40), gaussian_codebook(6, 40, 5)}) {
        const auto plan = decompose(t, cb, StageSchedule::until_bits(6), 77);
        const std::string text = serialize(plan);
        CHECK(deserialize(text) == plan);
        CHECK(text.find("\"evaluation_order\"") != std::string::npos);
    }
    const auto mm = decompose(gaussian(3, 8, 1), mailman_codebook(3), StageSchedule::adaptive(4));
    CHECK(deserialize(serialize(mm)) == mm);
}

TEST_CASE("deserialize rejects bad input") {
    const auto plan = decompose(gaussian(3, 8, 1), mailman_codebook(3), StageSchedule::fixed({1}));
    const std::string text = serialize(plan);
    CHECK_THROWS_AS(deserialize(text.substr(0, text.size() / 2)), FormatError);
    CHECK_THROWS_AS(deserialize(""), FormatError);
    CHECK_THROWS_AS(deserialize("[1,2]"), FormatError);
    std::string v2 = text;
    v2.replace(v2.find("\"version\":1"), 11, "\"version\":2");
    CHECK_THROWS_AS(deserialize(v2), VersionError);
    std::string bad_sign = text;
    const auto pos = bad_sign.find("\"sign\":");
    REQUIRE(pos != std::string::npos);
    bad_sign.replace(pos, 8, "\"sign\":0");
    CHECK_THROWS_AS(deserialize(bad_sign), FormatError);
    std::string bad_shape = text;
    bad_shape.replace(bad_shape.find("\"K\":8"), 5, "\"K\":9");
    CHECK_THROWS_AS(deserialize(bad_shape), FormatError);
}

TEST_CASE("target hash") {
    const RealMatrix t = gaussian(3, 4, 1);
    CHECK(target_hash(t) == target_hash(t));
    RealMatrix u = t;
    u(2, 3) += 1e-12;
    CHECK(target_hash(t) != target_hash(u));
    CHECK(target_hash(t).rfind("fnv1a64:", 0) == 0);
    CHECK(target_hash(t).size() == 8 + 16);
}

TEST_CASE("schedule helpers") {
    CHECK(parse_schedule_mode(to_string(StageSchedule::Mode::adaptive_single_stage)) ==
          StageSchedule::Mode::adaptive_single_stage);
    CHECK_THROWS_AS(parse_schedule_mode("x"), FormatError);
    CHECK_THROWS_AS(validate(StageSchedule::fixed({-1})), DomainError);
    CHECK_THROWS_AS(validate(StageSchedule::until_bits(0)), DomainError);
}
