#include "lcc/pow2_matrix.hpp"

#include "lcc/errors.hpp"

#include <algorithm>
#include <string>

namespace lcc {

Pow2Matrix::Pow2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

Pow2Matrix::Pow2Matrix(std::size_t rows, std::vector<SparseColumn> columns)
    : rows_(rows), columns_(std::move(columns)) {
    for (const auto& c : columns_) check_column(c);
}

Pow2Matrix Pow2Matrix::identity(std::size_t n) {
    Pow2Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.columns_[k] = {{k, SignedPow2::make(1, 0)}};
    return m;
}

void Pow2Matrix::check_column(const SparseColumn& column) const {
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (column[i].row >= rows_)
            throw DomainError("Pow2Matrix: row index " + std::to_string(column[i].row) + " out of range");
        if (column[i].coef.is_zero()) throw DomainError("Pow2Matrix: stored coefficient is zero");
        if (column[i].coef.sign != 1 && column[i].coef.sign != -1)
            throw DomainError("Pow2Matrix: coefficient sign must be +1 or -1");
        if (i > 0 && column[i].row <= column[i - 1].row)
            throw DomainError("Pow2Matrix: row indices must be strictly increasing");
    }
}

void Pow2Matrix::set_column(std::size_t k, SparseColumn column) {
    check_column(column);
    columns_.at(k) = std::move(column);
}

std::size_t Pow2Matrix::nonzeros() const noexcept {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
}

std::size_t Pow2Matrix::negative_entries() const noexcept {
    std::size_t n = 0;
    for (const auto& c : columns_)
        for (const auto& e : c) n += e.coef.sign < 0 ? 1 : 0;
    return n;
}

std::size_t Pow2Matrix::nonempty_rows() const {
    std::vector<char> used(rows_, 0);
    for (const auto& c : columns_)
        for (const auto& e : c) used[e.row] = 1;
    return static_cast<std::size_t>(std::count(used.begin(), used.end(), 1));
}

std::size_t Pow2Matrix::max_column_nonzeros() const noexcept {
    std::size_t m = 0;
    for (const auto& c : columns_) m = std::max(m, c.size());
    return m;
}

std::uint64_t Pow2Matrix::column_view_additions() const noexcept {
    std::uint64_t n = 0;
    for (const auto& c : columns_) n += c.empty() ? 0 : c.size() - 1;
    return n;
}

std::uint64_t Pow2Matrix::row_view_additions() const { return nonzeros() - nonempty_rows(); }

RealMatrix Pow2Matrix::to_dense() const {
    RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols()));
    for (std::size_t k = 0; k < cols(); ++k)
        for (const auto& e : columns_[k])
            m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(k)) = e.coef.value();
    return m;
}

DyadicMatrix Pow2Matrix::to_exact() const {
    DyadicMatrix m(rows_, cols());
    for (std::size_t k = 0; k < cols(); ++k)
        for (const auto& e : columns_[k]) m(e.row, k) = e.coef.to_dyadic();
    return m;
}

RealMatrix right_multiply(const RealMatrix& a, const Pow2Matrix& w) {
    if (static_cast<std::size_t>(a.cols()) != w.rows())
        throw DimensionError("right_multiply: inner dimensions do not match");
    RealMatrix out = RealMatrix::Zero(a.rows(), static_cast<Eigen::Index>(w.cols()));
    for (std::size_t k = 0; k < w.cols(); ++k) {
        auto dst = out.col(static_cast<Eigen::Index>(k));
        for (const auto& e : w.column(k)) dst += e.coef.value() * a.col(static_cast<Eigen::Index>(e.row));
    }
    return out;
}

DyadicMatrix right_multiply(const DyadicMatrix& a, const Pow2Matrix& w) {
    if (a.cols != w.rows()) throw DimensionError("right_multiply: inner dimensions do not match");
    DyadicMatrix out(a.rows, w.cols());
    for (std::size_t k = 0; k < w.cols(); ++k) {
        for (const auto& e : w.column(k)) {
            for (std::size_t r = 0; r < a.rows; ++r) {
                const Dyadic& v = a(r, e.row);
                if (!v.is_zero()) out(r, k) += e.coef.scale(v);
            }
        }
    }
    return out;
}

RealMatrix to_real(const DyadicMatrix& m) {
    RealMatrix out(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
    for (std::size_t c = 0; c < m.cols; ++c)
        for (std::size_t r = 0; r < m.rows; ++r)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c).to_double();
    return out;
}

DyadicMatrix to_exact(const RealMatrix& m) {
    DyadicMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = Dyadic::from_double(m(r, c));
    return out;
}

} // namespace lcc
