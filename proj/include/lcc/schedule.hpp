#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace lcc {

// How wiring stages are laid out by decompose().
//
// fixed-stages: stage l uses stage_sparsity[l] extra terms per column. Without
// target_bits exactly stage_sparsity.size() stages are fitted. With
// target_bits, stages are appended (repeating the last listed sparsity) until
// the relative error meets threshold(target_bits) or max_stages is reached.
//
// adaptive-single-stage: one wiring matrix; every column keeps adding terms
// until its own relative error meets threshold(target_bits). max_stages caps
// the extra terms per column, so the whole matrix never spends more than
// max_stages * K additions in the wiring.
struct StageSchedule {
    enum class Mode { fixed_stages, adaptive_single_stage };

    Mode mode = Mode::fixed_stages;
    std::vector<int> stage_sparsity{1};
    std::optional<int> target_bits;
    int max_stages = 64;

    static StageSchedule fixed(std::vector<int> sparsity) { return {Mode::fixed_stages, std::move(sparsity), {}, 64}; }
    static StageSchedule until_bits(int bits, int stage_sparsity = 1, int max_stages = 64) {
        return {Mode::fixed_stages, {stage_sparsity}, bits, max_stages};
    }
    static StageSchedule adaptive(int bits, int max_terms = 64) {
        return {Mode::adaptive_single_stage, {}, bits, max_terms};
    }

    friend bool operator==(const StageSchedule&, const StageSchedule&) = default;
};

// Throws DomainError when the mode's requirements are not met.
void validate(const StageSchedule& schedule);

std::string_view to_string(StageSchedule::Mode mode);
StageSchedule::Mode parse_schedule_mode(std::string_view text);

} // namespace lcc
