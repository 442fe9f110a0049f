#pragma once

// Matrix and vector files.
//
// Matrices are either CSV (one row per line, decimal floats) or raw binary:
// a 16-byte header "LCCMAT01" + rows (u32 LE) + cols (u32 LE), followed by
// rows*cols little-endian float64 values in row-major order.
//
// Vectors are read from the same binary format (one row or one column), or
// from text with one entry per line: a decimal with a power-of-two
// denominator ("0.375") or an integer pair "mantissa,exponent".

#include "lcc/dyadic.hpp"
#include "lcc/pow2_matrix.hpp"

#include <iosfwd>
#include <string>

namespace lcc {

RealMatrix parse_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const RealMatrix& m);

RealMatrix parse_matrix_binary(std::istream& in);
void write_matrix_binary(std::ostream& out, const RealMatrix& m);

// Picks the format from the file header. Throws FormatError / Error.
RealMatrix read_matrix(const std::string& path);
// ".bin" selects the binary format, anything else CSV.
void write_matrix(const std::string& path, const RealMatrix& m);

DyadicVector parse_vector_text(std::istream& in);
DyadicVector read_vector(const std::string& path);

// One line per entry: "mantissa,exponent,decimal".
void write_vector_exact(std::ostream& out, const DyadicVector& v);

} // namespace lcc
