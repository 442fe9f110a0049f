#include "lcc/wiring.hpp"

#include "lcc/errors.hpp"
#include "lcc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lcc {

namespace {

struct CodebookView {
    const RealMatrix& columns;
    RealVector norms; // <b_j, b_j>
};

CodebookView make_view(const RealMatrix& codebook) {
    return {codebook, codebook.colwise().squaredNorm().transpose()};
}

// Shared greedy loop. Stops after max_steps, when no replacement strictly
// lowers the residual, or once |r|^2 <= stop_below.
ColumnFit greedy_fit(const RealVector& target, const CodebookView& view, int max_steps, double stop_below,
                     ExponentRange range) {
    const RealMatrix& b = view.columns;
    const Eigen::Index k = b.cols();

    ColumnFit fit;
    RealVector residual = target;
    RealVector omega = RealVector::Zero(k);
    std::vector<SignedPow2> coef(static_cast<std::size_t>(k));
    double rsq = residual.squaredNorm();
    fit.residual_norms.push_back(rsq);

    // Below this the residual is rounding noise and further terms only fit
    // the noise.
    const double noise_floor = 0x1.0p-90 * rsq;
    const double stop = std::max(stop_below, noise_floor);

    RealVector corr(k);
    for (int step = 0; step < max_steps && rsq > stop; ++step) {
        corr.noalias() = b.transpose() * residual;

        Eigen::Index best = -1;
        double best_change = 0.0;
        SignedPow2 best_value;
        for (Eigen::Index j = 0; j < k; ++j) {
            const double norm = view.norms[j];
            if (norm == 0.0) continue;
            const double refit = omega[j] + corr[j] / norm;
            const SignedPow2 v = quantize_pow2(refit, range).value;
            const double delta = omega[j] - v.value();
            if (delta == 0.0) continue;
            // |r + delta b_j|^2 - |r|^2
            const double change = delta * (2.0 * corr[j] + delta * norm);
            if (change < best_change) {
                best_change = change;
                best = j;
                best_value = v;
            }
        }
        if (best < 0) {
            fit.stopped_early = true;
            break;
        }
        omega[best] = best_value.value();
        residual.noalias() = target - b * omega;
        coef[static_cast<std::size_t>(best)] = best_value;
        rsq = residual.squaredNorm();
        fit.residual_norms.push_back(rsq);
    }

    if (rsq <= noise_floor) fit.stopped_early = true;

    for (Eigen::Index j = 0; j < k; ++j)
        if (!coef[static_cast<std::size_t>(j)].is_zero())
            fit.omega.push_back({static_cast<std::size_t>(j), coef[static_cast<std::size_t>(j)]});
    return fit;
}

void check_shapes(const RealVector& target, const RealMatrix& codebook) {
    if (target.size() != codebook.rows())
        throw DimensionError("fit_column: target length " + std::to_string(target.size()) +
                             " does not match codebook rows " + std::to_string(codebook.rows()));
}

double relative_error(const RealMatrix& approx, const RealMatrix& target) {
    const double denom = target.squaredNorm();
    const double num = (target - approx).squaredNorm();
    return denom > 0.0 ? num / denom : (num > 0.0 ? INFINITY : 0.0);
}

} // namespace

ColumnFit fit_column(const RealVector& target, const RealMatrix& codebook, int extra_terms, ExponentRange range) {
    if (extra_terms < 0) throw DomainError("fit_column: extra_terms must be >= 0");
    check_shapes(target, codebook);
    return greedy_fit(target, make_view(codebook), extra_terms + 1, 0.0, range);
}

AdaptiveColumnFit fit_column_until(const RealVector& target, const RealMatrix& codebook, double relative_threshold,
                                   int max_extra_terms, ExponentRange range) {
    if (max_extra_terms < 0) throw DomainError("fit_column_until: max_extra_terms must be >= 0");
    check_shapes(target, codebook);
    const double stop_below = relative_threshold * target.squaredNorm();
    AdaptiveColumnFit fit;
    static_cast<ColumnFit&>(fit) = greedy_fit(target, make_view(codebook), max_extra_terms + 1, stop_below, range);
    fit.reached = fit.residual_norms.back() <= stop_below;
    return fit;
}

Pow2Matrix fit_stage(const RealMatrix& target, const RealMatrix& codebook, int extra_terms, ExponentRange range) {
    if (extra_terms < 0) throw DomainError("fit_stage: extra_terms must be >= 0");
    if (target.rows() != codebook.rows())
        throw DimensionError("fit_stage: target rows " + std::to_string(target.rows()) +
                             " do not match codebook rows " + std::to_string(codebook.rows()));
    const CodebookView view = make_view(codebook);
    std::vector<SparseColumn> columns(static_cast<std::size_t>(target.cols()));
    parallel_for(columns.size(), [&](std::size_t c) {
        const RealVector t = target.col(static_cast<Eigen::Index>(c));
        columns[c] = greedy_fit(t, view, extra_terms + 1, 0.0, range).omega;
    });
    return Pow2Matrix(static_cast<std::size_t>(codebook.cols()), std::move(columns));
}

DecompositionPlan decompose(const RealMatrix& target, CodebookDescriptor codebook, const StageSchedule& schedule,
                            std::uint64_t seed) {
    validate(schedule);
    validate(codebook);
    if (static_cast<std::size_t>(target.rows()) != codebook.rows ||
        static_cast<std::size_t>(target.cols()) != codebook.cols)
        throw DimensionError("decompose: target is " + std::to_string(target.rows()) + "x" +
                             std::to_string(target.cols()) + " but the codebook is " +
                             std::to_string(codebook.rows) + "x" + std::to_string(codebook.cols));

    DecompositionPlan plan;
    plan.rows = codebook.rows;
    plan.cols = codebook.cols;
    plan.metadata.target_hash = target_hash(target);
    plan.metadata.seed = seed;
    plan.metadata.schedule = schedule;

    RealMatrix effective = materialize(codebook);
    plan.codebook = std::move(codebook);
    plan.metadata.stage_distortion.push_back(relative_error(effective, target));

    auto add_stage = [&](Pow2Matrix w) {
        effective = right_multiply(effective, w);
        plan.stages.push_back(std::move(w));
        plan.metadata.stage_distortion.push_back(relative_error(effective, target));
    };

    if (schedule.mode == StageSchedule::Mode::adaptive_single_stage) {
        const double limit = threshold(*schedule.target_bits);
        const RealMatrix codebook_matrix = effective;
        const CodebookView view = make_view(codebook_matrix);
        std::vector<SparseColumn> columns(static_cast<std::size_t>(target.cols()));
        std::vector<char> reached(columns.size(), 0);
        parallel_for(columns.size(), [&](std::size_t c) {
            const RealVector t = target.col(static_cast<Eigen::Index>(c));
            const double stop_below = limit * t.squaredNorm();
            ColumnFit fit = greedy_fit(t, view, schedule.max_stages + 1, stop_below, {});
            reached[c] = fit.residual_norms.back() <= stop_below ? 1 : 0;
            columns[c] = std::move(fit.omega);
        });
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (!reached[c])
                throw AccuracyUnreachable("column " + std::to_string(c) + " cannot reach " +
                                          std::to_string(*schedule.target_bits) + "-bit accuracy within " +
                                          std::to_string(schedule.max_stages) + " extra terms");
        add_stage(Pow2Matrix(plan.cols, std::move(columns)));
        return plan;
    }

    const auto sparsity_at = [&](std::size_t stage) {
        const auto& s = schedule.stage_sparsity;
        return s[std::min(stage, s.size() - 1)];
    };

    if (!schedule.target_bits) {
        for (std::size_t l = 0; l < schedule.stage_sparsity.size(); ++l)
            add_stage(fit_stage(target, effective, sparsity_at(l)));
        return plan;
    }

    const double limit = threshold(*schedule.target_bits);
    for (std::size_t l = 0; plan.metadata.stage_distortion.back() > limit; ++l) {
        if (l >= static_cast<std::size_t>(schedule.max_stages))
            throw AccuracyUnreachable(std::to_string(*schedule.target_bits) + "-bit accuracy not reached after " +
                                      std::to_string(schedule.max_stages) + " stages (relative error " +
                                      std::to_string(plan.metadata.stage_distortion.back()) + ")");
        add_stage(fit_stage(target, effective, sparsity_at(l)));
    }
    return plan;
}

} // namespace lcc
