#include "lcc/experiments.hpp"

#include "lcc/codebook.hpp"
#include "lcc/engine.hpp"
#include "lcc/errors.hpp"
#include "lcc/random.hpp"
#include "lcc/wiring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lcc {

std::string_view to_string(TargetDistribution d) {
    switch (d) {
    case TargetDistribution::gaussian: return "gaussian";
    case TargetDistribution::uniform01: return "uniform01";
    case TargetDistribution::uniform_pm1: return "uniform-pm1";
    }
    return "?";
}

TargetDistribution parse_target_distribution(std::string_view text) {
    if (text == "gaussian") return TargetDistribution::gaussian;
    if (text == "uniform01" || text == "uniform") return TargetDistribution::uniform01;
    if (text == "uniform-pm1") return TargetDistribution::uniform_pm1;
    throw DomainError("unknown target distribution '" + std::string(text) + "'");
}

RealMatrix random_matrix(std::size_t rows, std::size_t cols, TargetDistribution dist, std::uint64_t seed) {
    Rng rng(seed);
    RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            switch (dist) {
            case TargetDistribution::gaussian: m(r, c) = rng.normal(); break;
            case TargetDistribution::uniform01: m(r, c) = rng.uniform01(); break;
            case TargetDistribution::uniform_pm1: m(r, c) = rng.uniform_pm1(); break;
            }
        }
    return m;
}

bool looks_gaussian(const RealMatrix& target) {
    if (target.size() < 2) return true;
    const double mean = target.mean();
    const double var = (target.array() - mean).square().sum() / static_cast<double>(target.size() - 1);
    // A zero-mean target has |mean| / std around 1/sqrt(NK); uniform [0, 1)
    // entries give about 1.7.
    return std::fabs(mean) <= 0.25 * std::sqrt(var);
}

namespace {

struct SampleCost {
    bool reached = false;
    double adds_per_entry = 0.0;
    double executed_adds_per_entry = 0.0;
    double wiring_terms = 0.0;
    double distortion = 0.0;
};

CodebookDescriptor bench_codebook(const RealMatrix& target, const BenchOptions& o, std::uint64_t seed,
                                  std::string& aux_source) {
    if (o.aux_from_target) {
        aux_source = "target";
        return self_design_build(target);
    }
    aux_source = "gaussian";
    return self_design_build(random_matrix(o.rows, o.cols, TargetDistribution::gaussian, seed));
}

// Stages with one extra term each are appended until the strictest requested
// accuracy is met; every smaller bit width is read off the same stage
// sequence.
std::vector<SampleCost> fixed_sample(const RealMatrix& target, const BenchOptions& o, std::uint64_t seed) {
    DecompositionPlan plan;
    plan.rows = o.rows;
    plan.cols = o.cols;
    plan.codebook = bench_codebook(target, o, derive_seed(seed, 1), plan.metadata.aux_source);

    const double strictest = threshold(*std::max_element(o.bits.begin(), o.bits.end()));
    RealMatrix effective = materialize(plan.codebook);
    const double total = target.squaredNorm();
    std::vector<double> dist{(target - effective).squaredNorm() / total};
    std::vector<Pow2Matrix> stages;
    while (dist.back() > strictest && static_cast<int>(stages.size()) < o.max_stages) {
        stages.push_back(fit_stage(target, effective, 1));
        effective = right_multiply(effective, stages.back());
        dist.push_back((target - effective).squaredNorm() / total);
    }

    std::vector<SampleCost> out(o.bits.size());
    for (std::size_t i = 0; i < o.bits.size(); ++i) {
        const double limit = threshold(o.bits[i]);
        const auto hit = std::find_if(dist.begin(), dist.end(), [limit](double d) { return d <= limit; });
        if (hit == dist.end()) continue;
        const auto stages_used = static_cast<std::size_t>(hit - dist.begin());
        plan.stages.assign(stages.begin(), stages.begin() + static_cast<std::ptrdiff_t>(stages_used));
        const CostReport cost = cost_of(plan);
        out[i] = {true, cost.adds_per_entry, cost.executed_adds_per_entry, static_cast<double>(stages_used), *hit};
    }
    return out;
}

std::vector<SampleCost> adaptive_sample(const RealMatrix& target, const BenchOptions& o, std::uint64_t seed) {
    std::string aux_source;
    const CodebookDescriptor codebook = bench_codebook(target, o, derive_seed(seed, 1), aux_source);
    std::vector<SampleCost> out(o.bits.size());
    for (std::size_t i = 0; i < o.bits.size(); ++i) {
        try {
            auto plan = decompose(target, codebook, StageSchedule::adaptive(o.bits[i], o.max_stages), seed);
            plan.metadata.aux_source = aux_source;
            const CostReport cost = cost_of(plan);
            out[i] = {true, cost.adds_per_entry, cost.executed_adds_per_entry,
                      static_cast<double>(cost.stage_additions.at(0)) / static_cast<double>(o.cols),
                      plan.metadata.stage_distortion.back()};
        } catch (const AccuracyUnreachable&) {
        }
    }
    return out;
}

} // namespace

std::vector<BenchCell> run_bench(const BenchOptions& o) {
    if (o.rows < 1 || o.cols < 1) throw DomainError("bench: N and K must be >= 1");
    if (o.bits.empty()) throw DomainError("bench: no bit widths given");
    if (o.samples < 1) throw DomainError("bench: samples must be >= 1");
    for (int q : o.bits)
        if (q < 1) throw DomainError("bench: bit widths must be >= 1");

    const std::uint64_t shape_seed = derive_seed(derive_seed(o.seed, o.rows), o.cols);
    std::vector<std::vector<SampleCost>> per_sample;
    for (int m = 0; m < o.samples; ++m) {
        const std::uint64_t seed = derive_seed(shape_seed, static_cast<std::uint64_t>(m));
        const RealMatrix target = random_matrix(o.rows, o.cols, o.distribution, derive_seed(seed, 0));
        per_sample.push_back(o.adaptive ? adaptive_sample(target, o, seed) : fixed_sample(target, o, seed));
    }

    std::vector<BenchCell> cells;
    for (std::size_t i = 0; i < o.bits.size(); ++i) {
        BenchCell cell;
        cell.rows = o.rows;
        cell.cols = o.cols;
        cell.bits = o.bits[i];
        std::vector<double> adds;
        double executed = 0.0;
        double terms = 0.0;
        for (const auto& sample : per_sample) {
            const SampleCost& c = sample[i];
            if (!c.reached) {
                ++cell.unreachable;
                continue;
            }
            adds.push_back(c.adds_per_entry);
            executed += c.executed_adds_per_entry;
            terms += c.wiring_terms;
            cell.worst_distortion = std::max(cell.worst_distortion, c.distortion);
        }
        cell.samples = static_cast<int>(adds.size());
        if (!adds.empty()) {
            const double n = static_cast<double>(adds.size());
            for (double a : adds) cell.mean_adds_per_entry += a / n;
            cell.mean_executed_adds_per_entry = executed / n;
            cell.mean_wiring_terms = terms / n;
            if (adds.size() > 1) {
                double sq = 0.0;
                for (double a : adds) sq += (a - cell.mean_adds_per_entry) * (a - cell.mean_adds_per_entry);
                cell.std_error = std::sqrt(sq / (n - 1.0) / n);
            }
        }
        cells.push_back(cell);
    }
    return cells;
}

BaselineReference baseline_reference(std::size_t rows, std::size_t cols, int bits, std::uint64_t seed) {
    if (bits < 2) throw DomainError("baseline: need at least 2 bits");
    const RealMatrix target = random_matrix(rows, cols, TargetDistribution::uniform_pm1, seed);
    const DyadicVector x(cols, Dyadic(1));
    BaselineReference ref;
    ref.bits = bits;
    const BaselineResult fixed = baseline_apply(target, bits, x);
    ref.fixed_point_adds_per_entry = fixed.adds_per_entry;
    ref.fixed_point_mse = fixed.quantization_mse;

    // 28^-C / 3 <= 4^-(q-1) / 3
    ref.csd_analytic_terms = (bits - 1) * std::log(4.0) / std::log(28.0);
    ref.csd_terms = static_cast<int>(std::ceil(ref.csd_analytic_terms - 1e-12));
    const BaselineResult csd = csd_baseline_apply(target, ref.csd_terms, x);
    ref.csd_adds_per_entry = csd.adds_per_entry;
    ref.csd_mse = csd.quantization_mse;
    return ref;
}

} // namespace lcc
