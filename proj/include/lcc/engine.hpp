#pragma once

// Shift-and-add evaluation of plans on exact dyadic inputs, plus the
// fixed-point and CSD baselines.

#include "lcc/dyadic.hpp"
#include "lcc/plan.hpp"
#include "lcc/pow2_matrix.hpp"

#include <span>

namespace lcc {

struct ApplyResult {
    DyadicVector y;
    OpCounts counts;
};

// Call as lcc::apply: with a std::vector argument, an unqualified call finds
// std::apply through argument-dependent lookup.
//
// y = B (W1 (... (WL x))). Counts are structural: additions of stored zeros
// are never performed, but data values that happen to be zero still count.
ApplyResult apply(const DecompositionPlan& plan, std::span<const Dyadic> x);

// M x for a sparse power-of-two matrix, accumulated row by row.
ApplyResult apply(const Pow2Matrix& m, std::span<const Dyadic> x);

struct BaselineResult {
    DyadicVector y;
    OpCounts counts;
    double adds_per_entry = 0.0;
    double mean_terms_per_entry = 0.0;
    double quantization_mse = 0.0; // mean (t - quantized t)^2 over entries
};

// Every entry quantized to q-bit sign-magnitude (q-1 fractional bits) and
// evaluated by per-entry shifts accumulated along each row: one addition
// per set bit, minus one per nonempty row.
BaselineResult baseline_apply(const RealMatrix& target, int bits, std::span<const Dyadic> x);

// Same with csd_encode and `terms_per_entry` signed digits per entry.
BaselineResult csd_baseline_apply(const RealMatrix& target, int terms_per_entry, std::span<const Dyadic> x);

} // namespace lcc
