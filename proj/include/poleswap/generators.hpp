#ifndef POLESWAP_GENERATORS_HPP
#define POLESWAP_GENERATORS_HPP

#include <cstdint>

#include <poleswap/pencil.hpp>
#include <poleswap/rng.hpp>

namespace poleswap {

/// Random palindromic anti-Hessenberg pencil: every structural entry of A is
/// 2a + bi with a, b standard normal, B = A^*. Entries are drawn in row-major
/// order over the nonzero region; the same seed reproduces the pencil bit for
/// bit.
inline StructuredPencil gen_random_palindromic(Index n, std::uint64_t seed) {
    if (n < 2)
        throw DimensionError("gen_random_palindromic: n must be at least 2");
    Rng rng(seed);
    Matrix A = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = (n - 2 - i > 0 ? n - 2 - i : 0); j < n; ++j)
            A(i, j) = rng.normal_entry();
    return new_structured(A, StructureKind::Palindromic);
}

/// 2x2 middle-swap stress block [[0, a], [a(1+g), c]] with B = A^*.
/// Entries span magnitudes 1e-15..1; g > 0 sets the relative gap between the
/// two values exchanged by a move of type IIo (block anti-diagonal ratios).
inline StructuredPencil gen_stress_2x2(double g, std::uint64_t seed) {
    if (!(g > 0.0))
        throw DomainError("gen_stress_2x2: g must be positive");
    Rng rng(seed);
    const Complex a = rng.stress_entry();
    const Complex c = rng.stress_entry();
    Matrix A(2, 2);
    A << Complex(0.0, 0.0), a,
         a * (1.0 + g), c;
    return new_structured(A, StructureKind::Palindromic);
}

/// 3x3 middle-swap stress block [[0,0,a],[0,b,c],[a(1+g),d,e]] with B = A^*;
/// feeds a move of type IIe. The center value b/conj(b) is unimodular by
/// construction. Entry draw order: a, b, c, d, e.
inline StructuredPencil gen_stress_3x3(double g, std::uint64_t seed) {
    if (!(g > 0.0))
        throw DomainError("gen_stress_3x3: g must be positive");
    Rng rng(seed);
    const Complex a = rng.stress_entry();
    const Complex b = rng.stress_entry();
    const Complex c = rng.stress_entry();
    const Complex d = rng.stress_entry();
    const Complex e = rng.stress_entry();
    Matrix A(3, 3);
    A << Complex(0.0, 0.0), Complex(0.0, 0.0), a,
         Complex(0.0, 0.0), b, c,
         a * (1.0 + g), d, e;
    return new_structured(A, StructureKind::Palindromic);
}

} // namespace poleswap

#endif // POLESWAP_GENERATORS_HPP
