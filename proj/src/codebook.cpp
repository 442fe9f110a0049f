#include "lcc/codebook.hpp"

#include "lcc/errors.hpp"
#include "lcc/random.hpp"
#include "lcc/wiring.hpp"

#include <string>

namespace lcc {

std::string_view to_string(CodebookKind kind) {
    switch (kind) {
    case CodebookKind::mailman: return "mailman";
    case CodebookKind::two_sparse: return "two-sparse";
    case CodebookKind::self_designing: return "self-designing";
    case CodebookKind::gaussian: return "gaussian";
    }
    return "unknown";
}

CodebookKind parse_codebook_kind(std::string_view text) {
    if (text == "mailman") return CodebookKind::mailman;
    if (text == "two-sparse" || text == "two_sparse") return CodebookKind::two_sparse;
    if (text == "self-designing" || text == "self") return CodebookKind::self_designing;
    if (text == "gaussian") return CodebookKind::gaussian;
    throw DomainError("unknown codebook kind '" + std::string(text) + "'");
}

namespace {

void check_mailman_rows(std::size_t rows) {
    if (rows < 1 || rows > kMailmanMaxRows)
        throw DomainError("mailman codebook needs 1 <= N <= " + std::to_string(kMailmanMaxRows) + ", got " +
                          std::to_string(rows));
}

void mailman_recurse(std::size_t rows, std::span<const Dyadic> h, DyadicVector& out, std::uint64_t& adds) {
    if (rows == 1) {
        out[0] = h[1];
        return;
    }
    const std::size_t half = h.size() / 2;
    DyadicVector folded(half);
    for (std::size_t i = 0; i < half; ++i) folded[i] = h[i] + h[half + i];
    adds += half;
    mailman_recurse(rows - 1, folded, out, adds);

    Dyadic top = h[half];
    for (std::size_t i = half + 1; i < h.size(); ++i) top += h[i];
    adds += half - 1;
    out[rows - 1] = std::move(top);
}

} // namespace

Pow2Matrix mailman_build(std::size_t rows) {
    check_mailman_rows(rows);
    const std::size_t cols = std::size_t{1} << rows;
    std::vector<SparseColumn> columns(cols);
    for (std::size_t k = 0; k < cols; ++k)
        for (std::size_t n = 0; n < rows; ++n)
            if ((k >> n) & 1u) columns[k].push_back({n, SignedPow2::make(1, 0)});
    return Pow2Matrix(rows, std::move(columns));
}

std::uint64_t mailman_additions(std::size_t rows) {
    check_mailman_rows(rows);
    std::uint64_t c = 0;
    for (std::size_t n = 2; n <= rows; ++n) c += (std::uint64_t{1} << n) - 1;
    return c;
}

MailmanProduct mailman_apply(std::size_t rows, std::span<const Dyadic> h) {
    check_mailman_rows(rows);
    if (h.size() != (std::size_t{1} << rows))
        throw DimensionError("mailman_apply: vector length " + std::to_string(h.size()) + " is not 2^" +
                             std::to_string(rows));
    MailmanProduct result;
    result.values.resize(rows);
    mailman_recurse(rows, h, result.values, result.additions);
    return result;
}

std::size_t two_sparse_capacity(std::size_t rows, int max_exponent) {
    if (max_exponent < 0) return rows;
    const std::size_t pairs = rows * (rows - (rows > 0 ? 1 : 0)) / 2;
    return rows + pairs * (2 + 4 * static_cast<std::size_t>(max_exponent));
}

Pow2Matrix two_sparse_build(std::size_t rows, std::size_t cols, int max_exponent) {
    if (rows < 1) throw DomainError("two_sparse_build: N must be >= 1");
    if (max_exponent < 0 || max_exponent > ExponentRange{}.max)
        throw DomainError("two_sparse_build: magnitude cap out of range");
    const std::size_t capacity = two_sparse_capacity(rows, max_exponent);
    if (cols > capacity)
        throw DomainError("two_sparse_build: K = " + std::to_string(cols) + " exceeds the " +
                          std::to_string(capacity) + " non-collinear columns available for N = " +
                          std::to_string(rows) + " with magnitudes up to 2^" + std::to_string(max_exponent));

    std::vector<SparseColumn> columns;
    columns.reserve(cols);
    auto push = [&](SparseColumn c) {
        if (columns.size() < cols) columns.push_back(std::move(c));
    };
    const auto one = SignedPow2::make(1, 0);
    for (std::size_t n = 0; n < rows; ++n) push({{n, one}});
    for (int level = 0; level <= max_exponent && columns.size() < cols; ++level) {
        const auto big = SignedPow2::make(1, level);
        const auto big_neg = SignedPow2::make(-1, level);
        for (std::size_t i = 0; i < rows && columns.size() < cols; ++i) {
            for (std::size_t j = i + 1; j < rows && columns.size() < cols; ++j) {
                push({{i, one}, {j, big}});
                push({{i, one}, {j, big_neg}});
                if (level > 0) {
                    push({{i, big}, {j, one}});
                    push({{i, big}, {j, SignedPow2::make(-1, 0)}});
                }
            }
        }
    }
    return Pow2Matrix(rows, std::move(columns));
}

Pow2Matrix selection_matrix(std::size_t rows, std::size_t cols) {
    if (cols < rows) throw DomainError("selection_matrix: K must be >= N");
    std::vector<SparseColumn> columns(cols);
    for (std::size_t n = 0; n < rows; ++n) columns[n] = {{n, SignedPow2::make(1, 0)}};
    return Pow2Matrix(rows, std::move(columns));
}

CodebookDescriptor self_design_build(const RealMatrix& aux_target, int stage_sparsity) {
    const auto rows = static_cast<std::size_t>(aux_target.rows());
    const auto cols = static_cast<std::size_t>(aux_target.cols());
    if (rows < 1 || cols < rows) throw DomainError("self_design_build: auxiliary target must have K >= N >= 1");
    if (stage_sparsity < 0) throw DomainError("self_design_build: stage sparsity must be >= 0");

    const RealMatrix b0 = selection_matrix(rows, cols).to_dense();
    Pow2Matrix b1 = fit_stage(aux_target, b0, stage_sparsity);
    const RealMatrix b01 = right_multiply(b0, b1);
    Pow2Matrix b2 = fit_stage(aux_target, b01, stage_sparsity);

    CodebookDescriptor d;
    d.kind = CodebookKind::self_designing;
    d.rows = rows;
    d.cols = cols;
    d.factors = {std::move(b1), std::move(b2)};
    return d;
}

RealMatrix gaussian_build(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    RealMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.normal();
    return m;
}

CodebookDescriptor mailman_codebook(std::size_t rows) {
    check_mailman_rows(rows);
    CodebookDescriptor d;
    d.kind = CodebookKind::mailman;
    d.rows = rows;
    d.cols = std::size_t{1} << rows;
    return d;
}

CodebookDescriptor two_sparse_codebook(std::size_t rows, std::size_t cols, int max_exponent) {
    two_sparse_build(rows, cols, max_exponent); // validates feasibility
    CodebookDescriptor d;
    d.kind = CodebookKind::two_sparse;
    d.rows = rows;
    d.cols = cols;
    d.max_exponent = max_exponent;
    return d;
}

CodebookDescriptor gaussian_codebook(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    CodebookDescriptor d;
    d.kind = CodebookKind::gaussian;
    d.rows = rows;
    d.cols = cols;
    d.seed = seed;
    return d;
}

void validate(const CodebookDescriptor& codebook) {
    if (codebook.rows < 1 || codebook.cols < 1) throw DomainError("codebook: empty shape");
    switch (codebook.kind) {
    case CodebookKind::mailman:
        check_mailman_rows(codebook.rows);
        if (codebook.cols != (std::size_t{1} << codebook.rows)) throw DomainError("mailman codebook needs K = 2^N");
        break;
    case CodebookKind::two_sparse:
        if (codebook.cols > two_sparse_capacity(codebook.rows, codebook.max_exponent))
            throw DomainError("two-sparse codebook: K exceeds the available non-collinear columns");
        break;
    case CodebookKind::self_designing:
        if (codebook.factors.size() != 2) throw DomainError("self-designing codebook needs two factors");
        for (const auto& f : codebook.factors)
            if (f.rows() != codebook.cols || f.cols() != codebook.cols)
                throw DomainError("self-designing codebook factors must be K x K");
        for (const auto& column : codebook.factors[0].columns())
            for (const auto& e : column)
                if (e.row >= codebook.rows)
                    throw DomainError("self-designing codebook: B1 uses a row that B0 discards");
        break;
    case CodebookKind::gaussian:
        break;
    }
}

RealMatrix materialize(const CodebookDescriptor& codebook) {
    validate(codebook);
    switch (codebook.kind) {
    case CodebookKind::mailman: return mailman_build(codebook.rows).to_dense();
    case CodebookKind::two_sparse:
        return two_sparse_build(codebook.rows, codebook.cols, codebook.max_exponent).to_dense();
    case CodebookKind::self_designing: {
        const RealMatrix b0 = selection_matrix(codebook.rows, codebook.cols).to_dense();
        return right_multiply(right_multiply(b0, codebook.factors[0]), codebook.factors[1]);
    }
    case CodebookKind::gaussian: return gaussian_build(codebook.rows, codebook.cols, codebook.seed);
    }
    return {};
}

DyadicMatrix materialize_exact(const CodebookDescriptor& codebook) {
    validate(codebook);
    switch (codebook.kind) {
    case CodebookKind::mailman: return mailman_build(codebook.rows).to_exact();
    case CodebookKind::two_sparse:
        return two_sparse_build(codebook.rows, codebook.cols, codebook.max_exponent).to_exact();
    case CodebookKind::self_designing: {
        const DyadicMatrix b0 = selection_matrix(codebook.rows, codebook.cols).to_exact();
        return right_multiply(right_multiply(b0, codebook.factors[0]), codebook.factors[1]);
    }
    case CodebookKind::gaussian: return to_exact(gaussian_build(codebook.rows, codebook.cols, codebook.seed));
    }
    return {};
}

} // namespace lcc
