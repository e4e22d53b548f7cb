#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <poleswap/generators.hpp>
#include <poleswap/matrix_market.hpp>

using namespace poleswap;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("mm_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("matrix market round trip is value exact") {
    TempFile f("roundtrip.mtx");
    auto P = gen_random_palindromic(8, 123);
    // exercise extreme magnitudes too
    P.A(7, 7) = Complex(1.2345678901234567e-300, -9.87654321e250);
    P.A(7, 0) = Complex(-0.0, 3.0000000000000004);
    write_matrix(f.path, P.A);
    const Matrix R = read_matrix(f.path);
    REQUIRE(R.rows() == 8);
    for (Index i = 0; i < 8; ++i)
        for (Index j = 0; j < 8; ++j) {
            REQUIRE(R(i, j).real() == P.A(i, j).real());
            REQUIRE(R(i, j).imag() == P.A(i, j).imag());
        }
}

TEST_CASE("header mismatch is a parse error naming the expected header") {
    TempFile f("badheader.mtx");
    {
        std::ofstream out(f.path);
        out << "%%MatrixMarket matrix coordinate real general\n1 1\n0 0\n";
    }
    try {
        read_matrix(f.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(std::string(e.what()).find("array complex general") != std::string::npos);
    }
}

TEST_CASE("non-square arrays are rejected") {
    TempFile f("nonsquare.mtx");
    {
        std::ofstream out(f.path);
        out << "%%MatrixMarket matrix array complex general\n2 3\n";
        for (int i = 0; i < 6; ++i) out << "1 0\n";
    }
    REQUIRE_THROWS_AS(read_matrix(f.path), ShapeError);
}

TEST_CASE("truncated and malformed files carry diagnostics") {
    TempFile f("short.mtx");
    {
        std::ofstream out(f.path);
        out << "%%MatrixMarket matrix array complex general\n% a comment\n2 2\n1 0\n2 0\n";
    }
    REQUIRE_THROWS_AS(read_matrix(f.path), ParseError);

    TempFile g("junk.mtx");
    {
        std::ofstream out(g.path);
        out << "%%MatrixMarket matrix array complex general\n2 2\n1 0\nnot_a_number 0\n3 0\n4 0\n";
    }
    REQUIRE_THROWS_AS(read_matrix(g.path), ParseError);

    REQUIRE_THROWS_AS(read_matrix("does_not_exist_anywhere.mtx"), ParseError);
}
