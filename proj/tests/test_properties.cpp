#include "properties.hpp"

#include <doctest.h>

TEST_CASE("greedy residual is monotone and the budget holds on 1000 cases") {
    const auto stats = props::check_greedy(1000, 101);
    CHECK(stats.monotone_failures == 0);
    CHECK(stats.budget_failures == 0);
}

TEST_CASE("plan serialization round-trips on 1000 random plans") { CHECK(props::check_serialization(1000, 202) == 0); }

TEST_CASE("CDFs are monotone and ordered in K on 1000 cases") { CHECK(props::check_cdfs(1000, 303) == 0); }

TEST_CASE("engine is exact on random plans") { CHECK(props::check_engine(100, 404, 5, 64) == 0); }

TEST_CASE("total error stays within its bounds") {
    for (std::size_t n : {2u, 3u, 8u, 20u})
        for (std::uint64_t k : {1ull, 2ull, 100ull, 100000ull}) {
            const double e = lcc::total_error(n, k);
            CHECK(e >= 1.0 / 27);
            CHECK(e <= 1.0);
        }
}

TEST_CASE("achieved bits grow with the number of stages on average") {
    constexpr int kSeeds = 20;
    std::vector<double> mean_bits(7, 0.0);
    for (int seed = 0; seed < kSeeds; ++seed) {
        lcc::Rng rng(lcc::derive_seed(55, static_cast<std::uint64_t>(seed)));
        const lcc::RealMatrix t = props::gaussian(6, 64, rng);
        const auto plan = lcc::decompose(t, lcc::self_design_build(t), lcc::StageSchedule::fixed(std::vector<int>(6, 1)));
        for (std::size_t l = 0; l < plan.metadata.stage_distortion.size(); ++l)
            mean_bits[l] += lcc::achieved_bits(plan.metadata.stage_distortion[l]) / kSeeds;
    }
    for (std::size_t l = 1; l < mean_bits.size(); ++l) CHECK(mean_bits[l] >= mean_bits[l - 1]);
}
