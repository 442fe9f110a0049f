#include "lcc/matrix_io.hpp"

#include "lcc/errors.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace lcc {

namespace {

constexpr std::array<char, 8> kMagic{'L', 'C', 'C', 'M', 'A', 'T', '0', '1'};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool skip_line(std::string_view s) { return s.empty() || s.front() == '#'; }

double parse_double(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(v))
        throw FormatError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "' as a number");
    return v;
}

std::int64_t parse_int(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size())
        throw FormatError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "' as an integer");
    return v;
}

std::uint32_t read_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

void write_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

bool has_magic(std::istream& in) {
    std::array<char, 8> head{};
    in.read(head.data(), head.size());
    const bool match = in.gcount() == static_cast<std::streamsize>(head.size()) && head == kMagic;
    in.clear();
    in.seekg(0);
    return match;
}

} // namespace

RealMatrix parse_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view s = trim(line);
        if (skip_line(s)) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = s.find(',', start);
            row.push_back(parse_double(s.substr(start, comma - start), number));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("line " + std::to_string(number) + ": expected " + std::to_string(rows.front().size()) +
                              " values, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("matrix file contains no rows");
    RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

void write_matrix_csv(std::ostream& out, const RealMatrix& m) {
    char buf[32];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            const auto res = std::to_chars(buf, buf + sizeof buf, m(r, c)); // shortest round-trip form
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

RealMatrix parse_matrix_binary(std::istream& in) {
    unsigned char header[16];
    in.read(reinterpret_cast<char*>(header), sizeof header);
    if (in.gcount() != sizeof header || std::memcmp(header, kMagic.data(), kMagic.size()) != 0)
        throw FormatError("binary matrix: bad or missing header");
    const std::uint32_t rows = read_u32(header + 8);
    const std::uint32_t cols = read_u32(header + 12);
    if (rows == 0 || cols == 0) throw FormatError("binary matrix: empty shape");
    RealMatrix m(rows, cols);
    unsigned char raw[8];
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) {
            in.read(reinterpret_cast<char*>(raw), 8);
            if (in.gcount() != 8) throw FormatError("binary matrix: truncated data");
            std::uint64_t bits = 0;
            for (int i = 7; i >= 0; --i) bits = bits << 8 | raw[i];
            m(r, c) = std::bit_cast<double>(bits);
        }
    return m;
}

void write_matrix_binary(std::ostream& out, const RealMatrix& m) {
    if (m.rows() > std::numeric_limits<std::uint32_t>::max() || m.cols() > std::numeric_limits<std::uint32_t>::max())
        throw DimensionError("binary matrix: shape does not fit the header");
    out.write(kMagic.data(), kMagic.size());
    write_u32(out, static_cast<std::uint32_t>(m.rows()));
    write_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
            unsigned char raw[8];
            for (int i = 0; i < 8; ++i) raw[i] = static_cast<unsigned char>(bits >> (8 * i));
            out.write(reinterpret_cast<const char*>(raw), 8);
        }
}

RealMatrix read_matrix(const std::string& path) {
    auto in = open_in(path);
    return has_magic(in) ? parse_matrix_binary(in) : parse_matrix_csv(in);
}

void write_matrix(const std::string& path, const RealMatrix& m) {
    const bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (binary)
        write_matrix_binary(out, m);
    else
        write_matrix_csv(out, m);
    if (!out) throw IoError("failed writing '" + path + "'");
}

DyadicVector parse_vector_text(std::istream& in) {
    DyadicVector v;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view s = trim(line);
        if (skip_line(s)) continue;
        const std::size_t comma = s.find(',');
        if (comma == std::string_view::npos) {
            try {
                v.push_back(Dyadic::parse_decimal(s));
            } catch (const FormatError& e) {
                throw FormatError("line " + std::to_string(number) + ": " + e.what());
            }
        } else {
            if (s.find(',', comma + 1) != std::string_view::npos)
                throw FormatError("line " + std::to_string(number) + ": expected 'mantissa,exponent'");
            v.emplace_back(Dyadic::Int(parse_int(s.substr(0, comma), number)), parse_int(s.substr(comma + 1), number));
        }
    }
    return v;
}

DyadicVector read_vector(const std::string& path) {
    auto in = open_in(path);
    if (has_magic(in)) {
        const RealMatrix m = parse_matrix_binary(in);
        if (m.rows() != 1 && m.cols() != 1) throw FormatError("vector file holds a matrix, not a vector");
        DyadicVector v;
        v.reserve(static_cast<std::size_t>(m.size()));
        for (Eigen::Index i = 0; i < m.size(); ++i) v.push_back(Dyadic::from_double(m.data()[i]));
        return v;
    }
    return parse_vector_text(in);
}

void write_vector_exact(std::ostream& out, const DyadicVector& v) {
    for (const auto& d : v) out << d.to_pair_string() << ',' << d.to_decimal() << '\n';
}

} // namespace lcc
