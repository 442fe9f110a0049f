#pragma once

// The decomposition plan T ~ B * W1 * ... * WL, its exact reconstruction,
// cost and distortion accounting, and the versioned JSON plan file.

#include "lcc/codebook.hpp"
#include "lcc/dyadic.hpp"
#include "lcc/pow2_matrix.hpp"
#include "lcc/schedule.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lcc {

inline constexpr int kPlanFormatVersion = 1;

struct PlanMetadata {
    std::string target_hash;
    std::uint64_t seed = 0;
    StageSchedule schedule;
    // Where the self-designing codebook got its model: "target", "gaussian",
    // or empty for other codebooks.
    std::string aux_source;
    // Relative Frobenius error of the codebook alone, then after each stage,
    // as estimated in double precision during the design.
    std::vector<double> stage_distortion;

    friend bool operator==(const PlanMetadata&, const PlanMetadata&) = default;
};

struct DecompositionPlan {
    std::size_t rows = 0; // N
    std::size_t cols = 0; // K
    CodebookDescriptor codebook;
    std::vector<Pow2Matrix> stages; // design order W1 ... WL
    PlanMetadata metadata;

    friend bool operator==(const DecompositionPlan&, const DecompositionPlan&) = default;
};

// Throws DomainError on inconsistent shapes.
void validate(const DecompositionPlan& plan);

// B * W1 * ... * WL, exactly.
DyadicMatrix reconstruct_exact(const DecompositionPlan& plan);
RealMatrix reconstruct(const DecompositionPlan& plan);

// Relative distortion of q-bit signed integer arithmetic (sign plus q-1
// magnitude bits): 4^-(q-1) / 3.
double threshold(int bits);

// Largest q >= 1 with distortion <= threshold(q); 0 if none, +inf for 0.
double achieved_bits(double relative_distortion);

struct OpCounts {
    std::uint64_t additions = 0;
    std::uint64_t shifts = 0;
    std::uint64_t sign_changes = 0;
    std::uint64_t multiplications = 0; // only a gaussian codebook needs these

    OpCounts& operator+=(const OpCounts& o) {
        additions += o.additions;
        shifts += o.shifts;
        sign_changes += o.sign_changes;
        multiplications += o.multiplications;
        return *this;
    }
    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

// Two addition counts are kept.
//
// `additions` is the bookkeeping used for the adds-per-entry tables: every
// factor costs one addition per extra term in each of its columns (a wiring
// stage with 1 + s terms per column costs s*K), and the mailman codebook costs
// its recursion count c(N).
//
// `executed` is what apply() really performs when forming M * x row by row:
// nonzeros minus nonempty rows per factor. The two agree whenever every
// row of a factor is used; they differ e.g. for B1 of a self-designing
// codebook, whose nonzeros all sit in its first N rows.
struct CostReport {
    std::uint64_t additions = 0;
    std::uint64_t codebook_additions = 0;
    std::vector<std::uint64_t> stage_additions;
    std::vector<double> stage_sparsity; // realized mean extra terms per column
    std::uint64_t shifts = 0;
    std::uint64_t sign_changes = 0;
    OpCounts executed;
    double adds_per_entry = 0.0;
    double executed_adds_per_entry = 0.0;
    bool analytic_only = false; // gaussian codebook: needs multiplications
};

CostReport cost_of(const DecompositionPlan& plan);

struct DistortionReport {
    double relative = 0.0;               // |T - M|_F^2 / |T|_F^2
    std::vector<double> column_relative; // |t_k - m_k|^2 / |t_k|^2 (0 for zero columns)
    double mean_column_relative = 0.0;
    double db = 0.0;                     // 10 log10(relative)
    double achieved_bits = 0.0;
};

DistortionReport distortion(const DecompositionPlan& plan, const RealMatrix& target);
// Same report for an already reconstructed matrix.
DistortionReport distortion_of(const RealMatrix& approximation, const RealMatrix& target);

// FNV-1a over the row-major entries, as "fnv1a64:<hex>".
std::string target_hash(const RealMatrix& target);

std::string serialize(const DecompositionPlan& plan);
// Throws VersionError for an unknown version, FormatError for anything
// malformed.
DecompositionPlan deserialize(std::string_view text);

} // namespace lcc
