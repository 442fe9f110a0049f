#include "lcc/engine.hpp"

#include "lcc/codebook.hpp"
#include "lcc/errors.hpp"
#include "lcc/pot_arith.hpp"

#include <functional>
#include <string>

namespace lcc {

namespace {

// Accumulates signed power-of-two terms into y row by row. The first term
// landing in a row is a plain write; every later one is an addition.
struct Accumulator {
    DyadicVector& y;
    std::vector<char> written;
    OpCounts& counts;

    Accumulator(DyadicVector& out, OpCounts& c) : y(out), written(out.size(), 0), counts(c) {}

    void add(std::size_t row, const Dyadic& term, bool negative) {
        ++counts.shifts;
        if (negative) ++counts.sign_changes;
        if (written[row]) {
            ++counts.additions;
            y[row] += term;
        } else {
            written[row] = 1;
            y[row] = term;
        }
    }
};

void check_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw DimensionError(std::string(what) + ": input length " + std::to_string(got) + " does not match " +
                             std::to_string(want));
}

DyadicVector apply_codebook(const CodebookDescriptor& cb, std::span<const Dyadic> h, OpCounts& counts) {
    switch (cb.kind) {
    case CodebookKind::mailman: {
        auto product = mailman_apply(cb.rows, h);
        counts.additions += product.additions;
        return std::move(product.values);
    }
    case CodebookKind::two_sparse: {
        auto r = lcc::apply(two_sparse_build(cb.rows, cb.cols, cb.max_exponent), h);
        counts += r.counts;
        return std::move(r.y);
    }
    case CodebookKind::self_designing: {
        auto z = lcc::apply(cb.factors[1], h);
        auto w = lcc::apply(cb.factors[0], z.y);
        counts += z.counts;
        counts += w.counts;
        w.y.resize(cb.rows); // B0 = [I 0] keeps the first N entries
        return std::move(w.y);
    }
    case CodebookKind::gaussian: {
        const RealMatrix b = materialize(cb);
        DyadicVector y(cb.rows);
        for (std::size_t n = 0; n < cb.rows; ++n) {
            bool first = true;
            for (std::size_t k = 0; k < cb.cols; ++k) {
                const double v = b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
                if (v == 0.0) continue;
                ++counts.multiplications;
                const Dyadic term = Dyadic::from_double(v) * h[k];
                if (first) {
                    y[n] = term;
                    first = false;
                } else {
                    y[n] += term;
                    ++counts.additions;
                }
            }
        }
        return y;
    }
    }
    return {};
}

BaselineResult scalar_baseline(const RealMatrix& target, std::span<const Dyadic> x,
                               const std::function<CsdForm(double)>& encode) {
    check_length(x.size(), static_cast<std::size_t>(target.cols()), "baseline");
    const auto rows = static_cast<std::size_t>(target.rows());
    BaselineResult result;
    result.y.assign(rows, Dyadic{});
    Accumulator acc(result.y, result.counts);
    double terms = 0.0;
    double sq_err = 0.0;
    for (Eigen::Index c = 0; c < target.cols(); ++c) {
        const Dyadic& xc = x[static_cast<std::size_t>(c)];
        for (Eigen::Index r = 0; r < target.rows(); ++r) {
            const double t = target(r, c);
            const CsdForm form = encode(t);
            const double err = t - form.value();
            sq_err += err * err;
            terms += static_cast<double>(form.size());
            for (const auto& term : form.terms())
                acc.add(static_cast<std::size_t>(r), SignedPow2::make(term.sign, term.exponent).scale(xc),
                        term.sign < 0);
        }
    }
    const double entries = static_cast<double>(target.size());
    if (entries > 0) {
        result.adds_per_entry = static_cast<double>(result.counts.additions) / entries;
        result.mean_terms_per_entry = terms / entries;
        result.quantization_mse = sq_err / entries;
    }
    return result;
}

} // namespace

ApplyResult apply(const Pow2Matrix& m, std::span<const Dyadic> x) {
    check_length(x.size(), m.cols(), "apply");
    ApplyResult result;
    result.y.assign(m.rows(), Dyadic{});
    Accumulator acc(result.y, result.counts);
    for (std::size_t k = 0; k < m.cols(); ++k)
        for (const auto& e : m.column(k)) acc.add(e.row, e.coef.scale(x[k]), e.coef.sign < 0);
    return result;
}

ApplyResult apply(const DecompositionPlan& plan, std::span<const Dyadic> x) {
    validate(plan);
    check_length(x.size(), plan.cols, "apply");
    ApplyResult result;
    DyadicVector h(x.begin(), x.end());
    for (auto it = plan.stages.rbegin(); it != plan.stages.rend(); ++it) {
        auto r = lcc::apply(*it, h);
        result.counts += r.counts;
        h = std::move(r.y);
    }
    result.y = apply_codebook(plan.codebook, h, result.counts);
    return result;
}

BaselineResult baseline_apply(const RealMatrix& target, int bits, std::span<const Dyadic> x) {
    if (bits < 2) throw DomainError("baseline_apply: need at least 2 bits (sign plus magnitude)");
    return scalar_baseline(target, x, [bits](double t) { return binary_encode(t, bits - 1); });
}

BaselineResult csd_baseline_apply(const RealMatrix& target, int terms_per_entry, std::span<const Dyadic> x) {
    if (terms_per_entry < 0) throw DomainError("csd_baseline_apply: term budget must be >= 0");
    return scalar_baseline(target, x, [terms_per_entry](double t) { return csd_encode(t, terms_per_entry); });
}

} // namespace lcc
