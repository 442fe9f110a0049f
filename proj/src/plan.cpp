#include "lcc/plan.hpp"

#include "lcc/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace lcc {

using nlohmann::json;

void validate(const StageSchedule& schedule) {
    if (schedule.max_stages < 0) throw DomainError("schedule: max_stages must be >= 0");
    if (schedule.target_bits && *schedule.target_bits < 1) throw DomainError("schedule: target bits must be >= 1");
    for (int s : schedule.stage_sparsity)
        if (s < 0) throw DomainError("schedule: stage sparsity must be >= 0");
    if (schedule.mode == StageSchedule::Mode::fixed_stages && schedule.target_bits && schedule.stage_sparsity.empty())
        throw DomainError("schedule: adding stages until a bit target needs a stage sparsity");
    if (schedule.mode == StageSchedule::Mode::adaptive_single_stage && !schedule.target_bits)
        throw DomainError("schedule: adaptive mode needs target bits");
}

std::string_view to_string(StageSchedule::Mode mode) {
    return mode == StageSchedule::Mode::fixed_stages ? "fixed-stages" : "adaptive-single-stage";
}

StageSchedule::Mode parse_schedule_mode(std::string_view text) {
    if (text == "fixed-stages") return StageSchedule::Mode::fixed_stages;
    if (text == "adaptive-single-stage") return StageSchedule::Mode::adaptive_single_stage;
    throw FormatError("unknown schedule mode '" + std::string(text) + "'");
}

void validate(const DecompositionPlan& plan) {
    validate(plan.codebook);
    if (plan.codebook.rows != plan.rows || plan.codebook.cols != plan.cols)
        throw DomainError("plan: codebook shape does not match plan shape");
    for (std::size_t l = 0; l < plan.stages.size(); ++l)
        if (plan.stages[l].rows() != plan.cols || plan.stages[l].cols() != plan.cols)
            throw DomainError("plan: stage " + std::to_string(l + 1) + " is not K x K");
}

DyadicMatrix reconstruct_exact(const DecompositionPlan& plan) {
    validate(plan);
    DyadicMatrix m = materialize_exact(plan.codebook);
    for (const auto& w : plan.stages) m = right_multiply(m, w);
    return m;
}

RealMatrix reconstruct(const DecompositionPlan& plan) { return to_real(reconstruct_exact(plan)); }

double threshold(int bits) {
    if (bits < 1) throw DomainError("threshold: bits must be >= 1");
    return std::ldexp(1.0, -2 * (bits - 1)) / 3.0;
}

double achieved_bits(double relative_distortion) {
    if (relative_distortion <= 0.0) return std::numeric_limits<double>::infinity();
    if (!(relative_distortion <= threshold(1))) return 0.0;
    int q = 1 + static_cast<int>(std::floor(std::log(1.0 / (3.0 * relative_distortion)) / std::log(4.0)));
    while (q > 1 && relative_distortion > threshold(q)) --q;
    while (q < 500 && relative_distortion <= threshold(q + 1)) ++q;
    return q;
}

CostReport cost_of(const DecompositionPlan& plan) {
    validate(plan);
    CostReport r;
    const auto& cb = plan.codebook;
    switch (cb.kind) {
    case CodebookKind::mailman:
        r.codebook_additions = mailman_additions(cb.rows);
        r.executed.additions = r.codebook_additions;
        break;
    case CodebookKind::two_sparse: {
        const Pow2Matrix b = two_sparse_build(cb.rows, cb.cols, cb.max_exponent);
        r.codebook_additions = b.column_view_additions();
        r.executed.additions = b.row_view_additions();
        r.executed.shifts = b.nonzeros();
        r.executed.sign_changes = b.negative_entries();
        break;
    }
    case CodebookKind::self_designing:
        for (const auto& f : cb.factors) {
            r.codebook_additions += f.column_view_additions();
            r.executed.additions += f.row_view_additions();
            r.executed.shifts += f.nonzeros();
            r.executed.sign_changes += f.negative_entries();
        }
        break;
    case CodebookKind::gaussian: {
        const RealMatrix b = materialize(cb);
        for (Eigen::Index row = 0; row < b.rows(); ++row) {
            const auto nnz = static_cast<std::uint64_t>((b.row(row).array() != 0.0).count());
            r.executed.multiplications += nnz;
            r.executed.additions += nnz > 0 ? nnz - 1 : 0;
        }
        r.codebook_additions = r.executed.additions;
        r.analytic_only = true;
        break;
    }
    }

    r.additions = r.codebook_additions;
    for (const auto& w : plan.stages) {
        const std::uint64_t adds = w.column_view_additions();
        r.stage_additions.push_back(adds);
        r.stage_sparsity.push_back(plan.cols ? static_cast<double>(adds) / static_cast<double>(plan.cols) : 0.0);
        r.additions += adds;
        r.executed.additions += w.row_view_additions();
        r.executed.shifts += w.nonzeros();
        r.executed.sign_changes += w.negative_entries();
    }
    r.shifts = r.executed.shifts;
    r.sign_changes = r.executed.sign_changes;
    const double entries = static_cast<double>(plan.rows) * static_cast<double>(plan.cols);
    if (entries > 0) {
        r.adds_per_entry = static_cast<double>(r.additions) / entries;
        r.executed_adds_per_entry = static_cast<double>(r.executed.additions) / entries;
    }
    return r;
}

DistortionReport distortion_of(const RealMatrix& approximation, const RealMatrix& target) {
    if (approximation.rows() != target.rows() || approximation.cols() != target.cols())
        throw DimensionError("distortion: shapes do not match");
    DistortionReport d;
    const double total = target.squaredNorm();
    const double err = (target - approximation).squaredNorm();
    d.relative = total > 0.0 ? err / total : (err > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    d.column_relative.resize(static_cast<std::size_t>(target.cols()));
    double sum = 0.0;
    for (Eigen::Index c = 0; c < target.cols(); ++c) {
        const double tn = target.col(c).squaredNorm();
        const double en = (target.col(c) - approximation.col(c)).squaredNorm();
        const double rel = tn > 0.0 ? en / tn : (en > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        d.column_relative[static_cast<std::size_t>(c)] = rel;
        sum += rel;
    }
    d.mean_column_relative = target.cols() > 0 ? sum / static_cast<double>(target.cols()) : 0.0;
    d.db = 10.0 * std::log10(d.relative);
    d.achieved_bits = achieved_bits(d.relative);
    return d;
}

DistortionReport distortion(const DecompositionPlan& plan, const RealMatrix& target) {
    if (static_cast<std::size_t>(target.rows()) != plan.rows || static_cast<std::size_t>(target.cols()) != plan.cols)
        throw DimensionError("distortion: target shape does not match the plan");
    return distortion_of(reconstruct(plan), target);
}

std::string target_hash(const RealMatrix& target) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&h](const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
    };
    const std::uint64_t dims[2] = {static_cast<std::uint64_t>(target.rows()), static_cast<std::uint64_t>(target.cols())};
    feed(dims, sizeof dims);
    for (Eigen::Index r = 0; r < target.rows(); ++r)
        for (Eigen::Index c = 0; c < target.cols(); ++c) {
            const double v = target(r, c);
            feed(&v, sizeof v);
        }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

// ---- plan file -------------------------------------------------------------

namespace {

json matrix_to_json(const Pow2Matrix& m) {
    json columns = json::array();
    for (const auto& column : m.columns()) {
        json entries = json::array();
        for (const auto& e : column) entries.push_back({{"row", e.row}, {"sign", e.coef.sign}, {"exp", e.coef.exponent}});
        columns.push_back(std::move(entries));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"columns", std::move(columns)}};
}

Pow2Matrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const json& columns = j.at("columns");
    if (!columns.is_array() || columns.size() != cols) throw FormatError("plan: column count does not match 'cols'");
    std::vector<SparseColumn> out(cols);
    for (std::size_t k = 0; k < cols; ++k) {
        for (const json& e : columns[k]) {
            const int sign = e.at("sign").get<int>();
            if (sign != 1 && sign != -1) throw FormatError("plan: coefficient sign must be +1 or -1");
            out[k].push_back({e.at("row").get<std::size_t>(), SignedPow2::make(sign, e.at("exp").get<int>())});
        }
    }
    try {
        return Pow2Matrix(rows, std::move(out));
    } catch (const DomainError& e) {
        throw FormatError(std::string("plan: ") + e.what());
    }
}

json schedule_to_json(const StageSchedule& s) {
    json j = {{"mode", to_string(s.mode)}, {"stage_sparsity", s.stage_sparsity}, {"max_stages", s.max_stages}};
    j["target_bits"] = s.target_bits ? json(*s.target_bits) : json(nullptr);
    return j;
}

StageSchedule schedule_from_json(const json& j) {
    StageSchedule s;
    s.mode = parse_schedule_mode(j.at("mode").get<std::string>());
    s.stage_sparsity = j.at("stage_sparsity").get<std::vector<int>>();
    s.max_stages = j.at("max_stages").get<int>();
    if (!j.at("target_bits").is_null()) s.target_bits = j.at("target_bits").get<int>();
    return s;
}

json codebook_to_json(const CodebookDescriptor& c) {
    json j = {{"kind", to_string(c.kind)}, {"N", c.rows}, {"K", c.cols}};
    if (c.kind == CodebookKind::gaussian) j["seed"] = c.seed;
    if (c.kind == CodebookKind::two_sparse) j["max_exponent"] = c.max_exponent;
    if (c.kind == CodebookKind::self_designing) {
        json factors = json::array();
        for (const auto& f : c.factors) factors.push_back(matrix_to_json(f));
        j["factors"] = std::move(factors);
    }
    return j;
}

CodebookDescriptor codebook_from_json(const json& j) {
    CodebookDescriptor c;
    try {
        c.kind = parse_codebook_kind(j.at("kind").get<std::string>());
    } catch (const DomainError& e) {
        throw FormatError(std::string("plan: ") + e.what());
    }
    c.rows = j.at("N").get<std::size_t>();
    c.cols = j.at("K").get<std::size_t>();
    if (c.kind == CodebookKind::gaussian) c.seed = j.at("seed").get<std::uint64_t>();
    if (c.kind == CodebookKind::two_sparse) c.max_exponent = j.at("max_exponent").get<int>();
    if (c.kind == CodebookKind::self_designing)
        for (const json& f : j.at("factors")) c.factors.push_back(matrix_from_json(f));
    return c;
}

} // namespace

std::string serialize(const DecompositionPlan& plan) {
    validate(plan);
    json stages = json::array();
    for (const auto& w : plan.stages) stages.push_back(matrix_to_json(w));
    json j = {
        {"format", "lcc-plan"},
        {"version", kPlanFormatVersion},
        {"N", plan.rows},
        {"K", plan.cols},
        {"evaluation_order", "last-stage-first"},
        {"codebook", codebook_to_json(plan.codebook)},
        {"schedule", schedule_to_json(plan.metadata.schedule)},
        {"seed", plan.metadata.seed},
        {"target_hash", plan.metadata.target_hash},
        {"aux_source", plan.metadata.aux_source},
        {"stage_distortion", plan.metadata.stage_distortion},
        {"stages", std::move(stages)},
    };
    return j.dump() + "\n";
}

DecompositionPlan deserialize(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed plan: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", std::string{}) != "lcc-plan")
            throw FormatError("malformed plan: missing 'format': \"lcc-plan\"");
        const int version = j.at("version").get<int>();
        if (version != kPlanFormatVersion)
            throw VersionError("unsupported plan version " + std::to_string(version) + " (expected " +
                               std::to_string(kPlanFormatVersion) + ")");
        DecompositionPlan plan;
        plan.rows = j.at("N").get<std::size_t>();
        plan.cols = j.at("K").get<std::size_t>();
        plan.codebook = codebook_from_json(j.at("codebook"));
        plan.metadata.schedule = schedule_from_json(j.at("schedule"));
        plan.metadata.seed = j.at("seed").get<std::uint64_t>();
        plan.metadata.target_hash = j.at("target_hash").get<std::string>();
        plan.metadata.aux_source = j.at("aux_source").get<std::string>();
        plan.metadata.stage_distortion = j.at("stage_distortion").get<std::vector<double>>();
        for (const json& w : j.at("stages")) plan.stages.push_back(matrix_from_json(w));
        validate(plan);
        return plan;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed plan: ") + e.what());
    } catch (const DomainError& e) {
        throw FormatError(std::string("malformed plan: ") + e.what());
    }
}

} // namespace lcc
