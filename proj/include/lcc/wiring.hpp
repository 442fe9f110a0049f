#pragma once

// Greedy sparse recovery of wiring matrices.
//
// Each target column t is approximated by B * w with w in {0, +-2^e}^K. Starting
// from w = 0, every step tries, for each codebook column j, the refit value
//   v_j = quantize_pow2(<r + w_j b_j, b_j> / <b_j, b_j>),   r = t - B w,
// and applies the single replacement w_j <- v_j that lowers |r|^2 the most.
// The loop stops after the step budget, when no replacement strictly
// helps, or when |r|^2 has fallen to rounding noise (2^-90 |t|^2). Ties go to the smallest column index.

#include "lcc/codebook.hpp"
#include "lcc/plan.hpp"
#include "lcc/pow2_matrix.hpp"
#include "lcc/schedule.hpp"

#include <cstdint>
#include <vector>

namespace lcc {

struct ColumnFit {
    SparseColumn omega;
    // |r|^2 before the first step and after every applied step.
    std::vector<double> residual_norms;
    bool stopped_early = false; // no strictly improving replacement was left
};

// At most 1 + extra_terms greedy steps.
ColumnFit fit_column(const RealVector& target, const RealMatrix& codebook, int extra_terms,
                     ExponentRange range = {});

// Steps until |r|^2 <= relative_threshold * |t|^2, with at most
// 1 + max_extra_terms steps. `reached` tells whether the threshold was met.
struct AdaptiveColumnFit : ColumnFit {
    bool reached = false;
};
AdaptiveColumnFit fit_column_until(const RealVector& target, const RealMatrix& codebook,
                                   double relative_threshold, int max_extra_terms,
                                   ExponentRange range = {});

// fit_column on every target column; the result is K x K_t.
Pow2Matrix fit_stage(const RealMatrix& target, const RealMatrix& codebook, int extra_terms,
                     ExponentRange range = {});

// Runs the schedule against `codebook`. Stages are returned in design order
// (W1 first); evaluation applies them last-to-first. Throws
// AccuracyUnreachable when a bit target cannot be met within the budget.
DecompositionPlan decompose(const RealMatrix& target, CodebookDescriptor codebook,
                            const StageSchedule& schedule, std::uint64_t seed = 0);

} // namespace lcc
