#include <catch2/catch_amalgamated.hpp>

#include <poleswap/generators.hpp>
#include <poleswap/pencil.hpp>
#include <poleswap/verify.hpp>

using namespace poleswap;
using Catch::Approx;

namespace {
const Complex I(0.0, 1.0);
}

TEST_CASE("palindromic construction materializes B = A^* exactly") {
    Matrix A(2, 2);
    A << Complex(0, 0), Complex(1, 1), Complex(2, 0), Complex(3, 0);
    const auto P = new_structured(A, StructureKind::Palindromic);
    Matrix Bexp(2, 2);
    Bexp << Complex(0, 0), Complex(2, 0), Complex(1, -1), Complex(3, 0);
    REQUIRE((P.B - Bexp).norm() == 0.0);
    REQUIRE(P.kind == StructureKind::Palindromic);
}

TEST_CASE("shape violations are rejected") {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 0) = Complex(1, 0); // above the super-anti-diagonal for n = 3
    A(1, 0) = A(0, 1) = A(2, 0) = A(1, 1) = A(0, 2) = Complex(1, 0);
    A(2, 1) = A(1, 2) = A(2, 2) = Complex(1, 0);
    REQUIRE_THROWS_AS(new_structured(A, StructureKind::Palindromic), ShapeError);
}

TEST_CASE("alternating pair construction checks both relations") {
    Matrix A(2, 2), B(2, 2);
    A << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
    B << Complex(0, 0), I, I, Complex(0, 0);
    const auto P = new_structured_pair(A, B); // B^* = -B holds
    REQUIRE(P.kind == StructureKind::Alternating);
    REQUIRE(validate(P).max_structure_violation == 0.0);

    Matrix Bad = B;
    Bad(0, 1) = Complex(1, 1); // neither skew-Hermitian nor tiny
    REQUIRE_THROWS_AS(new_structured_pair(A, Bad), StructureError);
    REQUIRE_THROWS_AS(new_structured(A, StructureKind::Alternating), StructureError);
}

TEST_CASE("pole positions and symmetry") {
    // n = 3 with a_{2,1} = 2 (paper numbering): pole 1 reads (2, 1) == 2
    Matrix A = Matrix::Zero(3, 3);
    A(1, 0) = Complex(2, 0); // pole sigma_1 entry
    A(0, 1) = Complex(1, 0); // pole sigma_2 entry
    A(2, 0) = A(1, 1) = A(0, 2) = Complex(1, 0);
    A(2, 1) = A(1, 2) = Complex(1, 0);
    A(2, 2) = Complex(5, 0);
    const auto P = new_structured(A, StructureKind::Palindromic);
    REQUIRE(chordal_distance(pole_at(P, 1), HomogeneousValue::from_value(Complex(2, 0))) == 0.0);
    // sigma_2 = 1/conj(sigma_1) = 0.5
    REQUIRE(chordal_distance(pole_at(P, 2), HomogeneousValue::from_value(Complex(0.5, 0))) <= 1e-16);
    REQUIRE(chordal_distance(pole_at(P, 2), companion(pole_at(P, 1), P.kind)) == 0.0);

    REQUIRE_THROWS_AS(pole_at(P, 0), IndexError);
    REQUIRE_THROWS_AS(pole_at(P, 3), IndexError);
}

TEST_CASE("zero denominator gives the infinite pole") {
    Matrix A = Matrix::Zero(3, 3);
    A(1, 0) = Complex(2, 0);
    A(0, 1) = Complex(0, 0); // mirror entry: B(1,0) = 0 -> pole 1 = (2, 0) = infinity
    A(2, 0) = A(1, 1) = A(0, 2) = A(2, 1) = A(1, 2) = A(2, 2) = Complex(1, 0);
    const auto P = new_structured(A, StructureKind::Palindromic);
    REQUIRE(pole_at(P, 1).is_infinite());
    // and the singular-slot refusal: both entries ~ 0
    Matrix A2 = A;
    A2(1, 0) = Complex(0, 0);
    const auto P2 = new_structured(A2, StructureKind::Palindromic);
    REQUIRE_THROWS_AS(pole_at(P2, 1), SingularPoleError);
}

TEST_CASE("cayley transform maps structure and spectrum") {
    const auto P = gen_random_palindromic(6, 11);
    const auto C = cayley(P);
    REQUIRE(C.kind == StructureKind::Alternating);
    // shape preserved exactly, alternating relations hold
    const auto rep = validate(C);
    REQUIRE(rep.max_shape_violation == 0.0);
    REQUIRE(rep.max_structure_violation <= structural_tolerance(C));
    REQUIRE_THROWS_AS(cayley(C), StructureError);

    // eigenvalue map mu -> (mu+1)/(mu-1), homogeneously (a+b, a-b)
    const auto ev_p = oracle_eigenvalues(P.A, P.B);
    const auto ev_c = oracle_eigenvalues(C.A, C.B);
    std::vector<HomogeneousValue> mapped;
    for (const auto& mu : ev_p) mapped.emplace_back(mu.alpha + mu.beta, mu.alpha - mu.beta);
    REQUIRE(match_eigensets(mapped, ev_c).max_chordal_mismatch <= 1e-8);

    // spot values from the algebraic identity
    REQUIRE(chordal_distance(HomogeneousValue(Complex(3, 0) + Complex(1, 0), Complex(3, 0) - Complex(1, 0)),
                             HomogeneousValue::from_value(Complex(2, 0))) == 0.0);
    REQUIRE(chordal_distance(HomogeneousValue(I + 1.0, I - 1.0),
                             HomogeneousValue::from_value(-I)) <= 1e-16);
    REQUIRE(chordal_distance(HomogeneousValue(Complex(1, 0), Complex(1, 0)),
                             HomogeneousValue::from_value(Complex(1, 0))) == 0.0);
}

TEST_CASE("validate reports planted defects and clean generators") {
    const auto P = gen_random_palindromic(12, 5);
    const auto rep = validate(P);
    const double tol = structural_tolerance(P);
    REQUIRE(rep.max_shape_violation == 0.0);
    REQUIRE(rep.max_structure_violation == 0.0); // constructed as exact conjugate transpose
    REQUIRE(rep.pole_symmetry_violation <= 1e-12);
    REQUIRE(rep.middle_pole_violation <= tol);

    auto Q = gen_random_palindromic(4, 7);
    Q.A(0, 0) = Complex(1, 0);
    REQUIRE(validate(Q).max_shape_violation == 1.0);
}

TEST_CASE("random generator: determinism and moments") {
    const auto P1 = gen_random_palindromic(100, 1);
    const auto P2 = gen_random_palindromic(100, 1);
    REQUIRE((P1.A - P2.A).norm() == 0.0);
    REQUIRE((P1.B - P2.B).norm() == 0.0);
    REQUIRE_THROWS_AS(gen_random_palindromic(1, 3), DimensionError);

    // every pole well defined
    for (Index k = 1; k <= 99; ++k) REQUIRE_NOTHROW(pole_at(P1, k));

    // mean |Re entry| over ~1700 structural entries: half-normal mean of
    // |N(0, 2^2)| is 2*sqrt(2/pi) ~ 1.5958; ask for 5%
    const auto S = gen_random_palindromic(57, 2);
    double acc = 0.0;
    long cnt = 0;
    for (Index i = 0; i < S.n; ++i)
        for (Index j = 0; j < S.n; ++j)
            if (!in_zero_region(i, j, S.n)) {
                acc += std::abs(S.A(i, j).real());
                ++cnt;
            }
    REQUIRE(cnt >= 1600);
    const double expected = 2.0 * std::sqrt(2.0 / M_PI);
    REQUIRE(std::abs(acc / cnt - expected) <= 0.05 * expected);
}

TEST_CASE("stress generators") {
    REQUIRE_THROWS_AS(gen_stress_2x2(0.0, 1), DomainError);
    REQUIRE_THROWS_AS(gen_stress_3x3(-1.0, 1), DomainError);

    const auto S1 = gen_stress_2x2(1e-3, 42);
    const auto S2 = gen_stress_2x2(1e-3, 42);
    REQUIRE((S1.A - S2.A).norm() == 0.0);

    // the 2x2 block pattern [[0, a], [a(1+g), c]] with B = A^*
    REQUIRE(S1.A(0, 0) == Complex(0.0, 0.0));
    REQUIRE((S1.B - S1.A.adjoint()).norm() == 0.0);

    // the exchanged values are companion-linked with modulus ratio (1+g)^2
    const auto mp = middle_poles_iio(S1);
    REQUIRE(chordal_distance(mp[1], companion(mp[0], S1.kind)) <= 1e-15);

    // maximal separation at g = 1e15
    const auto Sg = gen_stress_2x2(1e15, 3);
    const auto mg = middle_poles_iio(Sg);
    REQUIRE(chordal_distance(mg[0], mg[1]) > 0.999999);

    // 3x3: center block value is unimodular by construction (b / conj(b))
    const auto T = gen_stress_3x3(0.5, 9);
    REQUIRE(T.A(0, 0) == Complex(0.0, 0.0));
    REQUIRE(T.A(0, 1) == Complex(0.0, 0.0));
    REQUIRE(T.A(1, 0) == Complex(0.0, 0.0));
    const auto tp = middle_poles_iie(T);
    REQUIRE(std::abs(tp[1].alpha) == std::abs(tp[1].beta));
    REQUIRE(chordal_distance(tp[2], companion(tp[0], T.kind)) <= 1e-15);
}

TEST_CASE("pinned stress entries reproduce the worked pole values") {
    // 2x2 with a = 1, c = 0, g = 1: values 2 and 0.5
    Matrix A(2, 2);
    A << Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(0, 0);
    const auto P = new_structured(A, StructureKind::Palindromic);
    const auto mp = middle_poles_iio(P);
    REQUIRE(chordal_distance(mp[0], HomogeneousValue::from_value(Complex(2, 0))) == 0.0);
    REQUIRE(chordal_distance(mp[1], HomogeneousValue::from_value(Complex(0.5, 0))) == 0.0);

    // 3x3 with a = 1, b = 1, c = d = e = 0, g = 1: outer values 2 and 0.5
    Matrix T = Matrix::Zero(3, 3);
    T(0, 2) = Complex(1, 0);
    T(1, 1) = Complex(1, 0);
    T(2, 0) = Complex(2, 0);
    const auto Q = new_structured(T, StructureKind::Palindromic);
    const auto tp = middle_poles_iie(Q);
    REQUIRE(chordal_distance(tp[0], HomogeneousValue::from_value(Complex(2, 0))) == 0.0);
    REQUIRE(chordal_distance(tp[2], HomogeneousValue::from_value(Complex(0.5, 0))) == 0.0);
}
