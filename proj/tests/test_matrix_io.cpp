#include "lcc/errors.hpp"
#include "lcc/matrix_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lcc;

TEST_CASE("CSV round trip keeps every bit") {
    RealMatrix m(2, 3);
    m << 0.1, -2.5e-300, 3, 1.0 / 3, 0, -7.25;
    std::stringstream s;
    write_matrix_csv(s, m);
    const RealMatrix back = parse_matrix_csv(s);
    CHECK(back.rows() == 2);
    CHECK(back.cols() == 3);
    CHECK((back.array() == m.array()).all());
}

TEST_CASE("CSV parsing skips comments and reports bad lines") {
    std::stringstream ok("# header\n1, 2\n\n 3 ,4\r\n");
    const RealMatrix m = parse_matrix_csv(ok);
    CHECK(m(1, 0) == 3);
    CHECK(m(1, 1) == 4);
    std::stringstream bad("1,2\n3,x\n");
    try {
        parse_matrix_csv(bad);
        FAIL("expected a parse error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::stringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(parse_matrix_csv(ragged), FormatError);
    std::stringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_matrix_csv(empty), FormatError);
    std::stringstream trailing("1,\n");
    CHECK_THROWS_AS(parse_matrix_csv(trailing), FormatError);
}

TEST_CASE("binary round trip and header checks") {
    RealMatrix m(3, 2);
    m << 1, 2, 3, 4, 5, -6.125;
    std::stringstream s;
    write_matrix_binary(s, m);
    CHECK(s.str().size() == 16 + 6 * 8);
    CHECK(s.str().substr(0, 8) == "LCCMAT01");
    const RealMatrix back = parse_matrix_binary(s);
    CHECK((back.array() == m.array()).all());
    std::stringstream truncated(s.str().substr(0, 30));
    CHECK_THROWS_AS(parse_matrix_binary(truncated), FormatError);
    std::stringstream junk("NOTMAGIC........");
    CHECK_THROWS_AS(parse_matrix_binary(junk), FormatError);
}

TEST_CASE("file helpers pick the format") {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string bin = (dir / "lcc_io_test.bin").string();
    const std::string csv = (dir / "lcc_io_test.csv").string();
    RealMatrix m(2, 2);
    m << 1, 2, 3, 4.5;
    write_matrix(bin, m);
    write_matrix(csv, m);
    CHECK((read_matrix(bin).array() == m.array()).all());
    CHECK((read_matrix(csv).array() == m.array()).all());
    CHECK_THROWS_AS(read_matrix((dir / "does_not_exist_lcc.csv").string()), IoError);
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}

TEST_CASE("vector text accepts decimals and mantissa,exponent pairs") {
    std::stringstream s("0.375\n# skip\n-3,2\n0\n");
    const DyadicVector v = parse_vector_text(s);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == Dyadic(Dyadic::Int(3), -3));
    CHECK(v[1] == Dyadic(Dyadic::Int(-12), 0));
    CHECK(v[2].is_zero());
    std::stringstream bad("0.1\n");
    CHECK_THROWS_AS(parse_vector_text(bad), FormatError);
    std::stringstream bad_pair("1,2,3\n");
    CHECK_THROWS_AS(parse_vector_text(bad_pair), FormatError);
}

TEST_CASE("exact vector output") {
    std::stringstream s;
    write_vector_exact(s, {Dyadic(Dyadic::Int(-3), -2), Dyadic()});
    CHECK(s.str() == "-3,-2,-0.75\n0,0,0\n");
}
