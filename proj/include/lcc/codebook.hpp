#pragma once

// Codebook matrices: cheap N x K matrices whose columns the wiring stages
// combine. Four kinds are supported:
//
//   mailman          every binary column exactly once (K = 2^N), applied by a
//                    recursion that needs fewer than 2K additions
//   two-sparse       pairwise non-collinear columns with one or two signed
//                    power-of-two entries
//   self-designing   B0 * B1 * B2 where B0 = [I 0] and B1, B2 are wiring
//                    matrices fitted to an auxiliary target
//   gaussian         i.i.d. standard normal entries; a reference for analysis,
//                    not implementable with shifts and additions

#include "lcc/dyadic.hpp"
#include "lcc/pow2_matrix.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lcc {

enum class CodebookKind { mailman, two_sparse, self_designing, gaussian };

std::string_view to_string(CodebookKind kind);
// Accepts "mailman", "two-sparse", "self-designing" (or "self"), "gaussian".
CodebookKind parse_codebook_kind(std::string_view text);

inline constexpr std::size_t kMailmanMaxRows = 24;
inline constexpr int kTwoSparseDefaultMaxExponent = 16;

struct CodebookDescriptor {
    CodebookKind kind = CodebookKind::gaussian;
    std::size_t rows = 0; // N
    std::size_t cols = 0; // K
    std::uint64_t seed = 0;                            // gaussian
    int max_exponent = kTwoSparseDefaultMaxExponent;   // two-sparse magnitude cap
    std::vector<Pow2Matrix> factors;                   // self-designing: {B1, B2}

    friend bool operator==(const CodebookDescriptor&, const CodebookDescriptor&) = default;
};

// N x 2^N binary matrix; entry (n, k) is bit n of k (row 0 = least
// significant bit), so the last row splits the columns into an all-zero and
// an all-one half.
Pow2Matrix mailman_build(std::size_t rows);

// c(1) = 0, c(N) = c(N-1) + 2^N - 1.
std::uint64_t mailman_additions(std::size_t rows);

struct MailmanProduct {
    DyadicVector values;
    std::uint64_t additions = 0;
};

// B h by the half-split recursion:
//   B_N h = [ B_{N-1} (h1 + h2) ; sum(h2) ].
MailmanProduct mailman_apply(std::size_t rows, std::span<const Dyadic> h);

// Number of pairwise non-collinear 1- and 2-sparse columns available with
// magnitudes up to 2^max_exponent.
std::size_t two_sparse_capacity(std::size_t rows, int max_exponent);

// First K columns of the enumeration: unit columns, then for each magnitude
// level m = 0, 1, ... and each row pair i < j the patterns
// (1, 2^m), (1, -2^m), (2^m, 1), (2^m, -1) (level 0 has only the first two).
Pow2Matrix two_sparse_build(std::size_t rows, std::size_t cols,
                            int max_exponent = kTwoSparseDefaultMaxExponent);

// B0 = [I_N 0_{N x (K-N)}], a pure selection.
Pow2Matrix selection_matrix(std::size_t rows, std::size_t cols);

// Fits B1 and B2 as wiring matrices for the auxiliary target, with
// `stage_sparsity` extra terms per column.
CodebookDescriptor self_design_build(const RealMatrix& aux_target, int stage_sparsity = 1);

RealMatrix gaussian_build(std::size_t rows, std::size_t cols, std::uint64_t seed);

CodebookDescriptor mailman_codebook(std::size_t rows);
CodebookDescriptor two_sparse_codebook(std::size_t rows, std::size_t cols,
                                       int max_exponent = kTwoSparseDefaultMaxExponent);
CodebookDescriptor gaussian_codebook(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Throws DomainError if the descriptor is inconsistent.
void validate(const CodebookDescriptor& codebook);

RealMatrix materialize(const CodebookDescriptor& codebook);
DyadicMatrix materialize_exact(const CodebookDescriptor& codebook);

} // namespace lcc
