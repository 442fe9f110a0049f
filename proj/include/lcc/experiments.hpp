#pragma once

// Adds-per-entry tables: how many additions per matrix entry a decomposition
// needs to reach the accuracy of q-bit signed integer arithmetic.

#include "lcc/plan.hpp"
#include "lcc/pow2_matrix.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace lcc {

enum class TargetDistribution { gaussian, uniform01, uniform_pm1 };

std::string_view to_string(TargetDistribution d);
TargetDistribution parse_target_distribution(std::string_view text);

RealMatrix random_matrix(std::size_t rows, std::size_t cols, TargetDistribution dist, std::uint64_t seed);

// Heuristic used when no auxiliary target is given: a target whose mean is
// large relative to its spread (e.g. all-positive entries) makes a poor
// codebook model, so a Gaussian stand-in is used instead.
bool looks_gaussian(const RealMatrix& target);

struct BenchOptions {
    std::size_t rows = 16;
    std::size_t cols = 1024;
    std::vector<int> bits{2, 4, 8, 16, 24};
    TargetDistribution distribution = TargetDistribution::gaussian;
    // false: stages with one extra term each until the accuracy is met.
    // true: a single wiring matrix whose columns adapt their own sparsity.
    bool adaptive = false;
    // Self-design the codebook from the target itself; otherwise from a
    // seeded Gaussian matrix of the same shape.
    bool aux_from_target = true;
    int samples = 20;
    std::uint64_t seed = 1;
    int max_stages = 64;
};

struct BenchCell {
    std::size_t rows = 0;
    std::size_t cols = 0;
    int bits = 0;
    int samples = 0;      // matrices that reached the accuracy
    int unreachable = 0;  // matrices that did not
    double mean_adds_per_entry = 0.0;
    double std_error = 0.0;
    double mean_executed_adds_per_entry = 0.0;
    double mean_wiring_terms = 0.0; // mean s: stages, or extra terms per column
    double worst_distortion = 0.0;  // largest relative error among samples
};

// One cell per requested bit width. Randomness for sample m is derived from
// (seed, rows, cols, m), so cells are reproducible independently.
std::vector<BenchCell> run_bench(const BenchOptions& options);

// Reference costs of scalar shift-and-add evaluation at q bits for a
// uniform [-1, 1) matrix of the given shape.
struct BaselineReference {
    int bits = 0;
    double fixed_point_adds_per_entry = 0.0; // binary, q-1 fractional bits
    double fixed_point_mse = 0.0;
    int csd_terms = 0;                       // smallest C with 28^-C/3 <= threshold(q)
    double csd_adds_per_entry = 0.0;         // simulated at csd_terms
    double csd_mse = 0.0;
    double csd_analytic_terms = 0.0;         // log_28(4^(q-1))
};
BaselineReference baseline_reference(std::size_t rows, std::size_t cols, int bits, std::uint64_t seed);

} // namespace lcc
