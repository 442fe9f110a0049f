#include "lcc/cli.hpp"

#include "lcc/analysis.hpp"
#include "lcc/codebook.hpp"
#include "lcc/engine.hpp"
#include "lcc/errors.hpp"
#include "lcc/experiments.hpp"
#include "lcc/matrix_io.hpp"
#include "lcc/plan.hpp"
#include "lcc/pot_arith.hpp"
#include "lcc/random.hpp"
#include "lcc/wiring.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lcc {

namespace {

using nlohmann::json;

// Rows of scalar JSON values rendered as CSV, a markdown table, or a JSON
// array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;

    void add(std::vector<json> row) { rows.push_back(std::move(row)); }

    static std::string cell(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_null()) return "";
        if (v.is_number_float()) {
            std::ostringstream s;
            s << std::setprecision(10) << v.get<double>();
            return s.str();
        }
        return v.dump();
    }

    void print(std::ostream& out, const std::string& format) const {
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : rows) {
                json obj = json::object();
                for (std::size_t i = 0; i < header.size(); ++i) {
                    const json& v = r[i];
                    obj[header[i]] = v.is_number_float() && !std::isfinite(v.get<double>()) ? json(cell(v)) : v;
                }
                arr.push_back(std::move(obj));
            }
            out << arr.dump(2) << '\n';
            return;
        }
        const bool md = format == "md";
        const std::string sep = md ? " | " : ",";
        auto line = [&](const std::vector<std::string>& cells) {
            if (md) out << "| ";
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? sep : "") << cells[i];
            out << (md ? " |\n" : "\n");
        };
        line(header);
        if (md) line(std::vector<std::string>(header.size(), "---"));
        for (const auto& r : rows) {
            std::vector<std::string> cells;
            for (const auto& v : r) cells.push_back(cell(v));
            line(cells);
        }
    }
};

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string bits_text(double bits) { return std::isinf(bits) ? "inf" : fixed(bits, 0); }

std::string db_text(double db) { return std::isinf(db) ? "-inf" : fixed(db, 2); }

const std::vector<std::string> kFormats{"csv", "md", "json"};

// ---- decompose -------------------------------------------------------------

struct DecomposeArgs {
    std::string input;
    std::string output;
    std::string codebook = "self";
    std::optional<int> stages;
    std::optional<int> bits;
    bool adaptive = false;
    int stage_sparsity = 1;
    int max_stages = 64;
    std::uint64_t seed = 1;
    std::string aux = "target";
    std::string format = "md";
};

CodebookDescriptor make_codebook(const RealMatrix& target, CodebookKind kind, const std::string& aux,
                                 std::uint64_t seed, std::string& aux_source) {
    const auto rows = static_cast<std::size_t>(target.rows());
    const auto cols = static_cast<std::size_t>(target.cols());
    switch (kind) {
    case CodebookKind::mailman:
        if (rows > kMailmanMaxRows || cols != (std::size_t{1} << rows))
            throw DimensionError("the mailman codebook needs K = 2^N, got " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
        return mailman_codebook(rows);
    case CodebookKind::two_sparse: return two_sparse_codebook(rows, cols);
    case CodebookKind::gaussian: return gaussian_codebook(rows, cols, derive_seed(seed, 1));
    case CodebookKind::self_designing: {
        const bool from_target = aux == "target" || (aux == "auto" && looks_gaussian(target));
        aux_source = from_target ? "target" : "gaussian";
        if (from_target) return self_design_build(target);
        return self_design_build(random_matrix(rows, cols, TargetDistribution::gaussian, derive_seed(seed, 2)));
    }
    }
    return {};
}

int cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
    const RealMatrix target = read_matrix(a.input);
    StageSchedule schedule;
    if (a.adaptive) {
        if (!a.bits) throw CLI::ValidationError("--adaptive", "needs --bits");
        schedule = StageSchedule::adaptive(*a.bits, a.max_stages);
    } else if (a.bits) {
        schedule = StageSchedule::until_bits(*a.bits, a.stage_sparsity, a.max_stages);
    } else {
        schedule = StageSchedule::fixed(std::vector<int>(static_cast<std::size_t>(a.stages.value_or(1)), a.stage_sparsity));
    }

    std::string aux_source;
    CodebookDescriptor codebook = make_codebook(target, parse_codebook_kind(a.codebook), a.aux, a.seed, aux_source);
    DecompositionPlan plan = decompose(target, std::move(codebook), schedule, a.seed);
    plan.metadata.aux_source = aux_source;

    {
        std::ofstream f(a.output);
        if (!f) throw IoError("cannot open '" + a.output + "' for writing");
        f << serialize(plan);
        if (!f) throw IoError("failed writing '" + a.output + "'");
    }

    const CostReport cost = cost_of(plan);
    const DistortionReport d = distortion(plan, target);
    Table t;
    t.header = {"N", "K", "R", "codebook", "stages", "additions", "adds_per_entry", "executed_additions",
                "executed_adds_per_entry", "shifts", "sign_changes", "achieved_bits", "D_rel_dB"};
    t.add({plan.rows, plan.cols, fixed(code_rate(plan.rows, plan.cols), 4), std::string(to_string(plan.codebook.kind)),
           plan.stages.size(), cost.additions, fixed(cost.adds_per_entry, 4), cost.executed.additions,
           fixed(cost.executed_adds_per_entry, 4), cost.shifts, cost.sign_changes, bits_text(d.achieved_bits),
           db_text(d.db)});
    t.print(out, a.format);
    return kExitOk;
}

// ---- apply -----------------------------------------------------------------

struct ApplyArgs {
    std::string plan;
    std::string input;
    std::string output;
    std::string format = "md";
};

int cmd_apply(const ApplyArgs& a, std::ostream& out) {
    std::ifstream f(a.plan);
    if (!f) throw IoError("cannot open '" + a.plan + "' for reading");
    std::stringstream buffer;
    buffer << f.rdbuf();
    const DecompositionPlan plan = deserialize(buffer.str());
    const DyadicVector x = read_vector(a.input);
    const ApplyResult r = lcc::apply(plan, x);

    if (a.output.empty()) {
        write_vector_exact(out, r.y);
    } else {
        std::ofstream o(a.output);
        if (!o) throw IoError("cannot open '" + a.output + "' for writing");
        write_vector_exact(o, r.y);
    }
    if (!a.output.empty()) {
        Table t;
        t.header = {"N", "K", "additions", "shifts", "sign_changes", "multiplications"};
        t.add({plan.rows, plan.cols, r.counts.additions, r.counts.shifts, r.counts.sign_changes,
               r.counts.multiplications});
        t.print(out, a.format);
    }
    return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::vector<std::string> shapes{"16x1024"};
    std::vector<int> bits{2, 4, 8, 16, 24};
    int samples = 20;
    std::uint64_t seed = 1;
    std::string distribution = "gaussian";
    bool adaptive = false;
    std::string aux = "auto";
    int max_stages = 64;
    bool baseline = true;
    std::string format = "md";
};

std::pair<std::size_t, std::size_t> parse_shape(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t used = 0;
        const auto rows = std::stoul(s.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(s);
        const auto cols = std::stoul(s.substr(x + 1), &used);
        if (used != s.size() - x - 1) throw std::invalid_argument(s);
        return {rows, cols};
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--shape", "expected NxK, got '" + s + "'");
    }
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    Table t;
    t.header = {"scheme", "N", "K", "bits", "adds_per_entry", "std_error", "executed_adds_per_entry", "wiring_terms",
                "samples", "unreachable"};
    const TargetDistribution dist = parse_target_distribution(a.distribution);
    for (const auto& shape : a.shapes) {
        const auto [rows, cols] = parse_shape(shape);
        BenchOptions o;
        o.rows = rows;
        o.cols = cols;
        o.bits = a.bits;
        o.distribution = dist;
        o.adaptive = a.adaptive;
        o.aux_from_target = a.aux == "target" || (a.aux == "auto" && dist == TargetDistribution::gaussian);
        o.samples = a.samples;
        o.seed = a.seed;
        o.max_stages = a.max_stages;
        const std::string scheme = a.adaptive ? "adaptive" : "multi-stage";
        for (const auto& c : run_bench(o))
            t.add({scheme, c.rows, c.cols, c.bits, c.samples ? json(fixed(c.mean_adds_per_entry, 4)) : json(nullptr),
                   c.samples > 1 ? json(fixed(c.std_error, 4)) : json(nullptr),
                   c.samples ? json(fixed(c.mean_executed_adds_per_entry, 4)) : json(nullptr),
                   c.samples ? json(fixed(c.mean_wiring_terms, 2)) : json(nullptr), c.samples, c.unreachable});
        if (a.baseline) {
            for (int q : a.bits) {
                if (q < 2) continue;
                const BaselineReference ref = baseline_reference(rows, cols, q, derive_seed(a.seed, 7));
                t.add({"fixed-point", rows, cols, q, fixed(ref.fixed_point_adds_per_entry, 4), nullptr, nullptr,
                       nullptr, 1, 0});
                t.add({"csd", rows, cols, q, fixed(ref.csd_adds_per_entry, 4), nullptr, nullptr, ref.csd_terms, 1, 0});
                t.add({"csd-analytic", rows, cols, q, fixed(ref.csd_analytic_terms + 1.0, 4), nullptr, nullptr,
                       fixed(ref.csd_analytic_terms, 2), nullptr, nullptr});
            }
        }
    }
    t.print(out, a.format);
    return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
    std::string fig;
    bool asymptote = false;
    std::vector<double> rates;
    std::vector<std::size_t> rows;
    std::vector<std::uint64_t> cols;
    int points = 100;
    int stages = 20;
    int samples = 20;
    std::string codebook = "gaussian";
    std::uint64_t seed = 1;
    std::string format = "csv";
};

std::size_t rows_for_rate(std::uint64_t cols, double rate) {
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(cols)) / rate - 1e-9)));
}

// (N, K) pairs from explicit N lists or from rates.
std::vector<std::pair<std::size_t, std::uint64_t>> model_shapes(const AnalyzeArgs& a) {
    if (a.cols.empty()) throw CLI::ValidationError("--K", "at least one K is required");
    std::vector<std::pair<std::size_t, std::uint64_t>> shapes;
    for (std::uint64_t k : a.cols) {
        if (!a.rows.empty())
            for (std::size_t n : a.rows) shapes.emplace_back(n, k);
        else if (!a.rates.empty())
            for (double r : a.rates) shapes.emplace_back(rows_for_rate(k, r), k);
        else
            throw CLI::ValidationError("--N", "give --N or --rate");
    }
    return shapes;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const std::string fig = a.asymptote ? "asymptote" : a.fig;
    Table t;
    if (fig == "asymptote") {
        if (a.rates.empty()) throw CLI::ValidationError("--rate", "at least one rate is required");
        t.header = {"R", "threshold"};
        for (double r : a.rates) t.add({r, asymptotic_threshold(r)});
    } else if (fig == "cdf") {
        t.header = {"N", "K", "R", "r", "cdf"};
        for (const auto& [n, k] : model_shapes(a))
            for (int i = 0; i <= a.points; ++i) {
                const double r = static_cast<double>(i) / a.points;
                t.add({n, k, code_rate(n, k), r, angle_error_cdf(n, k, r)});
            }
    } else if (fig == "total") {
        t.header = {"N", "K", "R", "mean_sq_angle", "mean_sq_distance", "total", "total_rate_root"};
        for (const auto& [n, k] : model_shapes(a)) {
            const AngleErrorModel m{n, k};
            const double total = m.total();
            t.add({n, k, m.rate(), m.mean_sq_angle(), m.mean_sq_distance(), total, std::pow(total, 1.0 / m.rate())});
        }
    } else if (fig == "lb") {
        t.header = {"N", "K", "s", "D_LB", "mean", "std_error"};
        const CodebookKind kind = parse_codebook_kind(a.codebook);
        for (const auto& [n, k] : model_shapes(a))
            for (const auto& p : simulate_decomposition(n, k, a.stages, kind, a.seed, a.samples))
                t.add({n, k, p.s, p.lower_bound, p.mean, p.std_error});
    } else {
        throw CLI::ValidationError("--fig", "expected cdf, total, lb or asymptote");
    }
    t.print(out, a.format);
    return kExitOk;
}

// ---- quantize --------------------------------------------------------------

struct QuantizeArgs {
    std::string value;
    std::string mode;
    int budget = 0;
};

int cmd_quantize(const QuantizeArgs& a, std::ostream& out) {
    Dyadic exact;
    try {
        exact = Dyadic::parse_decimal(a.value);
    } catch (const FormatError&) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(a.value, &used);
        } catch (const std::logic_error&) {
            throw FormatError("cannot parse '" + a.value + "' as a number");
        }
        if (used != a.value.size()) throw FormatError("cannot parse '" + a.value + "' as a number");
        exact = Dyadic::from_double(v);
    }
    const double t = exact.to_double();
    const CsdForm form = a.mode == "binary" ? binary_encode(t, a.budget) : csd_encode(t, a.budget);
    const Dyadic decoded = csd_decode(form);
    out << "form: " << form.to_string() << '\n';
    out << "value: " << decoded.to_decimal() << '\n';
    out << "error: " << (exact - decoded).to_decimal() << '\n';
    out << "terms: " << form.size() << '\n';
    return kExitOk;
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
    std::size_t rows = 16;
    std::size_t cols = 1024;
    std::string distribution = "gaussian";
    std::uint64_t seed = 1;
    std::string output;
};

int cmd_generate(const GenerateArgs& a) {
    write_matrix(a.output, random_matrix(a.rows, a.cols, parse_target_distribution(a.distribution), a.seed));
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shift-and-add matrix decomposition tool"};
    app.require_subcommand(1);

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "Decompose a matrix into codebook and wiring stages");
    d->add_option("-i,--input", dec.input, "Matrix file (CSV or binary)")->required();
    d->add_option("-o,--output", dec.output, "Plan file to write")->required();
    d->add_option("--codebook", dec.codebook, "Codebook kind")
        ->check(CLI::IsMember({"mailman", "two-sparse", "self", "self-designing", "gaussian"}));
    auto* stages_opt = d->add_option("--stages", dec.stages, "Number of wiring stages")->check(CLI::NonNegativeNumber);
    auto* bits_opt = d->add_option("--bits", dec.bits, "Add stages until q-bit accuracy")->check(CLI::Range(1, 62));
    stages_opt->excludes(bits_opt);
    d->add_flag("--adaptive", dec.adaptive, "Single wiring stage with per-column sparsity (needs --bits)")
        ->excludes(stages_opt);
    d->add_option("--stage-sparsity", dec.stage_sparsity, "Extra terms per column and stage")
        ->check(CLI::NonNegativeNumber);
    d->add_option("--max-stages", dec.max_stages, "Stage cap (adaptive: extra terms per column)")
        ->check(CLI::NonNegativeNumber);
    d->add_option("--seed", dec.seed, "Seed for generated codebooks");
    d->add_option("--aux", dec.aux, "Model for a self-designing codebook")
        ->check(CLI::IsMember({"target", "gaussian", "auto"}));
    d->add_option("--format", dec.format, "Summary format")->check(CLI::IsMember(kFormats));

    ApplyArgs ap;
    auto* p = app.add_subcommand("apply", "Evaluate a plan on an exact input vector");
    p->add_option("-p,--plan", ap.plan, "Plan file")->required();
    p->add_option("-i,--input", ap.input, "Vector file")->required();
    p->add_option("-o,--output", ap.output, "Output vector file (stdout if omitted)");
    p->add_option("--format", ap.format, "Summary format")->check(CLI::IsMember(kFormats));

    BenchArgs be;
    auto* b = app.add_subcommand("bench", "Additions per entry needed for q-bit accuracy");
    b->add_option("--shape", be.shapes, "NxK, repeatable")->delimiter(',');
    b->add_option("--bits", be.bits, "Bit widths")->delimiter(',')->check(CLI::Range(1, 62));
    b->add_option("--samples", be.samples, "Random matrices per cell")->check(CLI::PositiveNumber);
    b->add_option("--seed", be.seed, "Root seed");
    b->add_option("--distribution", be.distribution, "Target entries")
        ->check(CLI::IsMember({"gaussian", "uniform01", "uniform", "uniform-pm1"}));
    b->add_flag("--adaptive", be.adaptive, "Single adaptive wiring stage");
    b->add_option("--aux", be.aux, "Self-design model")->check(CLI::IsMember({"target", "gaussian", "auto"}));
    b->add_option("--max-stages", be.max_stages, "Stage cap")->check(CLI::NonNegativeNumber);
    b->add_flag("!--no-baseline", be.baseline, "Omit the scalar baseline rows");
    b->add_option("--format", be.format, "Table format")->check(CLI::IsMember(kFormats));

    AnalyzeArgs an;
    auto* z = app.add_subcommand("analyze", "Performance-model curves");
    z->add_option("--fig", an.fig, "cdf, total, lb or asymptote")
        ->check(CLI::IsMember({"cdf", "total", "lb", "asymptote"}));
    z->add_flag("--asymptote", an.asymptote, "Print 4^-R for each --rate");
    z->add_option("--rate", an.rates, "Code rates")->delimiter(',')->check(CLI::PositiveNumber);
    z->add_option("--N", an.rows, "Row counts")->delimiter(',')->check(CLI::Range(2, 1 << 20));
    z->add_option("--K", an.cols, "Codebook sizes")->delimiter(',')->check(CLI::PositiveNumber);
    z->add_option("--points", an.points, "Grid points for cdf")->check(CLI::Range(1, 1000000));
    z->add_option("--stages", an.stages, "Stages for lb")->check(CLI::NonNegativeNumber);
    z->add_option("--samples", an.samples, "Matrices for lb")->check(CLI::PositiveNumber);
    z->add_option("--codebook", an.codebook, "Codebook for lb")
        ->check(CLI::IsMember({"mailman", "two-sparse", "self", "self-designing", "gaussian"}));
    z->add_option("--seed", an.seed, "Root seed");
    z->add_option("--format", an.format, "Table format")->check(CLI::IsMember(kFormats));

    QuantizeArgs qa;
    auto* q = app.add_subcommand("quantize", "Binary or signed-digit expansion of a scalar");
    q->add_option("value", qa.value, "Decimal value")->required();
    q->add_option("mode", qa.mode, "binary or csd")->required()->check(CLI::IsMember({"binary", "csd"}));
    q->add_option("budget", qa.budget, "Fractional bits (binary) or terms (csd)")
        ->required()
        ->check(CLI::Range(0, 1000));

    GenerateArgs ge;
    auto* g = app.add_subcommand("generate", "Write a random matrix");
    g->add_option("--rows", ge.rows, "N")->check(CLI::PositiveNumber);
    g->add_option("--cols", ge.cols, "K")->check(CLI::PositiveNumber);
    g->add_option("--distribution", ge.distribution, "Entries")
        ->check(CLI::IsMember({"gaussian", "uniform01", "uniform", "uniform-pm1"}));
    g->add_option("--seed", ge.seed, "Seed");
    g->add_option("-o,--output", ge.output, "Output file (.bin for binary)")->required();

    try {
        app.parse(argc, argv);
        if (d->parsed()) return cmd_decompose(dec, out);
        if (p->parsed()) return cmd_apply(ap, out);
        if (b->parsed()) return cmd_bench(be, out);
        if (z->parsed()) return cmd_analyze(an, out);
        if (q->parsed()) {
            if (qa.mode == "binary" && qa.budget < 1) throw CLI::ValidationError("budget", "binary needs >= 1 bit");
            return cmd_quantize(qa, out);
        }
        if (g->parsed()) return cmd_generate(ge);
        return kExitUsage;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

} // namespace lcc
