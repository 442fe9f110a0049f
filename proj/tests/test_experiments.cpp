#include "lcc/errors.hpp"
#include "lcc/experiments.hpp"

#include <doctest.h>

#include <cmath>

using namespace lcc;

TEST_CASE("random matrices are reproducible and have the right ranges") {
    const RealMatrix a = random_matrix(4, 50, TargetDistribution::uniform01, 3);
    CHECK((a - random_matrix(4, 50, TargetDistribution::uniform01, 3)).norm() == 0.0);
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.maxCoeff() < 1.0);
    const RealMatrix b = random_matrix(4, 50, TargetDistribution::uniform_pm1, 3);
    CHECK(b.minCoeff() >= -1.0);
    CHECK(b.minCoeff() < 0.0);
    CHECK(parse_target_distribution(to_string(TargetDistribution::uniform_pm1)) == TargetDistribution::uniform_pm1);
    CHECK_THROWS_AS(parse_target_distribution("cauchy"), DomainError);
}

TEST_CASE("looks_gaussian separates centred from one-sided targets") {
    CHECK(looks_gaussian(random_matrix(10, 100, TargetDistribution::gaussian, 1)));
    CHECK(looks_gaussian(random_matrix(10, 100, TargetDistribution::uniform_pm1, 1)));
    CHECK_FALSE(looks_gaussian(random_matrix(10, 100, TargetDistribution::uniform01, 1)));
}

TEST_CASE("bench cells are deterministic and ordered by accuracy") {
    BenchOptions o;
    o.rows = 6;
    o.cols = 64;
    o.bits = {2, 4, 8};
    o.samples = 3;
    const auto a = run_bench(o);
    const auto b = run_bench(o);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mean_adds_per_entry == b[i].mean_adds_per_entry);
        CHECK(a[i].samples == 3);
        CHECK(a[i].worst_distortion <= threshold(a[i].bits));
        if (i) CHECK(a[i].mean_adds_per_entry >= a[i - 1].mean_adds_per_entry);
    }
    // (L + 2) / N for full columns.
    CHECK(a[0].mean_adds_per_entry == doctest::Approx((a[0].mean_wiring_terms + 2) / 6).epsilon(0.05));
}

TEST_CASE("adaptive bench with a Gaussian model") {
    BenchOptions o;
    o.rows = 6;
    o.cols = 64;
    o.bits = {4};
    o.samples = 2;
    o.adaptive = true;
    o.aux_from_target = false;
    o.distribution = TargetDistribution::uniform01;
    const auto cells = run_bench(o);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].samples == 2);
    CHECK(cells[0].mean_adds_per_entry > 0.0);
}

TEST_CASE("unreachable accuracy is counted, not thrown") {
    BenchOptions o;
    o.rows = 4;
    o.cols = 16;
    o.bits = {40};
    o.samples = 2;
    o.max_stages = 1;
    const auto cells = run_bench(o);
    CHECK(cells[0].unreachable == 2);
    CHECK(cells[0].samples == 0);
}

TEST_CASE("scalar baselines") {
    const auto ref = baseline_reference(32, 256, 16, 1);
    CHECK(ref.fixed_point_adds_per_entry == doctest::Approx(7.5).epsilon(0.02));
    CHECK(ref.fixed_point_mse == doctest::Approx(threshold(16)).epsilon(0.1));
    CHECK(ref.csd_terms == 7);
    CHECK(ref.csd_analytic_terms == doctest::Approx(6.24).epsilon(0.01));
    CHECK(ref.csd_mse <= threshold(16) * 1.1);
}
