#pragma once

#include "lcc/dyadic.hpp"
#include "lcc/pot_arith.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lcc {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

struct Pow2Entry {
    std::size_t row = 0;
    SignedPow2 coef;
    friend bool operator==(const Pow2Entry&, const Pow2Entry&) = default;
};

// Nonzeros of one column, sorted by strictly increasing row.
using SparseColumn = std::vector<Pow2Entry>;

// Sparse matrix with entries in {0, +-2^e}, stored by column.
class Pow2Matrix {
public:
    Pow2Matrix() = default;
    Pow2Matrix(std::size_t rows, std::size_t cols);
    // Throws DomainError if a column breaks the invariants (rows out of
    // range or not strictly increasing, stored zero coefficients).
    Pow2Matrix(std::size_t rows, std::vector<SparseColumn> columns);

    static Pow2Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return columns_.size(); }
    const SparseColumn& column(std::size_t k) const { return columns_.at(k); }
    const std::vector<SparseColumn>& columns() const noexcept { return columns_; }
    void set_column(std::size_t k, SparseColumn column);

    std::size_t nonzeros() const noexcept;
    std::size_t negative_entries() const noexcept;
    std::size_t nonempty_rows() const;
    std::size_t max_column_nonzeros() const noexcept;

    // Additions needed when every column is summed on its own:
    // sum over columns of max(0, nnz - 1).
    std::uint64_t column_view_additions() const noexcept;
    // Additions needed to form M * x: nnz minus the number of nonempty rows.
    std::uint64_t row_view_additions() const;

    RealMatrix to_dense() const;
    DyadicMatrix to_exact() const;

    friend bool operator==(const Pow2Matrix&, const Pow2Matrix&) = default;

private:
    void check_column(const SparseColumn& column) const;

    std::size_t rows_ = 0;
    std::vector<SparseColumn> columns_;
};

// a * w for a dense left operand.
RealMatrix right_multiply(const RealMatrix& a, const Pow2Matrix& w);
DyadicMatrix right_multiply(const DyadicMatrix& a, const Pow2Matrix& w);

RealMatrix to_real(const DyadicMatrix& m);
DyadicMatrix to_exact(const RealMatrix& m);

} // namespace lcc
