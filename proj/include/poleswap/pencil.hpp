#ifndef POLESWAP_PENCIL_HPP
#define POLESWAP_PENCIL_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/Core>

#include <poleswap/errors.hpp>
#include <poleswap/homogeneous.hpp>

namespace poleswap {

using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// A regular pencil A - lambda*B in anti-Hessenberg form with its structure
/// tag. Anti-Hessenberg means A(i,j) = B(i,j) = 0 whenever i + j < n - 2
/// (0-based): flipping the rows gives an upper Hessenberg matrix. Pole k,
/// for k = 1..n-1, is the ratio of the (n-k-1, k-1) entries, sitting on the
/// first super-anti-diagonal; the main anti-diagonal carries the eigenvalue
/// corners (n-1, 0) and (0, n-1).
///
/// Both matrices are stored concretely and every congruence updates both,
/// so the two structures share one code path; validate() measures how far
/// roundoff has pulled them apart.
struct StructuredPencil {
    Index n = 0;
    Matrix A;
    Matrix B;
    StructureKind kind = StructureKind::Palindromic;
};

/// Violation magnitudes of the four pencil invariants; a valid pencil keeps
/// all of them at or below structural_tolerance().
struct PencilReport {
    double max_shape_violation = 0.0;
    double max_structure_violation = 0.0;
    double pole_symmetry_violation = 0.0;
    double middle_pole_violation = 0.0;
};

inline bool in_zero_region(Index i, Index j, Index n) { return i + j < n - 2; }

/// 10*eps*max(|A|_F, |B|_F), the scale at which structure is considered exact.
inline double structural_tolerance(const StructuredPencil& P) {
    return 10.0 * kEps * std::max(P.A.norm(), P.B.norm());
}

inline double shape_violation(const Matrix& M) {
    const Index n = M.rows();
    double worst = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n - 2 - i; ++j)
            worst = std::max(worst, std::abs(M(i, j)));
    return worst;
}

namespace detail {

inline void require_square(const Matrix& M, const char* who) {
    if (M.rows() != M.cols())
        throw ShapeError(std::string(who) + ": matrix is not square");
}

inline void require_anti_hessenberg(const Matrix& M, const char* who) {
    const double v = shape_violation(M);
    if (v > 0.0) {
        char mag[32];
        std::snprintf(mag, sizeof mag, "%.3g", v);
        throw ShapeError(std::string(who) + ": nonzero above the super-anti-diagonal (magnitude " +
                         mag + ")");
    }
}

} // namespace detail

/// Wrap an anti-Hessenberg matrix as the palindromic pencil A - lambda*A^*.
/// B is materialized as the exact conjugate transpose.
inline StructuredPencil new_structured(const Matrix& A, StructureKind kind) {
    if (kind != StructureKind::Palindromic)
        throw StructureError("new_structured: alternating pairs need both matrices; use new_structured_pair");
    detail::require_square(A, "new_structured");
    detail::require_anti_hessenberg(A, "new_structured");
    StructuredPencil P;
    P.n = A.rows();
    P.A = A;
    P.B = A.adjoint();
    P.kind = StructureKind::Palindromic;
    return P;
}

/// Wrap a Hermitian/skew-Hermitian pair as an alternating pencil.
inline StructuredPencil new_structured_pair(const Matrix& A, const Matrix& B) {
    detail::require_square(A, "new_structured_pair");
    if (A.rows() != B.rows() || B.rows() != B.cols())
        throw ShapeError("new_structured_pair: dimension mismatch");
    detail::require_anti_hessenberg(A, "new_structured_pair");
    detail::require_anti_hessenberg(B, "new_structured_pair");
    const double tol = 10.0 * kEps * std::max(A.norm(), B.norm());
    const double herm = (A - A.adjoint()).cwiseAbs().maxCoeff();
    const double skew = (B + B.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol)
        throw StructureError("new_structured_pair: A is not Hermitian (defect " + std::to_string(herm) + ")");
    if (skew > tol)
        throw StructureError("new_structured_pair: B is not skew-Hermitian (defect " + std::to_string(skew) + ")");
    StructuredPencil P;
    P.n = A.rows();
    P.A = A;
    P.B = B;
    P.kind = StructureKind::Alternating;
    return P;
}

/// Pole k, k = 1..n-1, as a homogeneous value read straight off the entries.
inline HomogeneousValue pole_at(const StructuredPencil& P, Index k) {
    if (k < 1 || k > P.n - 1)
        throw IndexError("pole_at: k = " + std::to_string(k) + " outside 1.." + std::to_string(P.n - 1));
    const Complex a = P.A(P.n - k - 1, k - 1);
    const Complex b = P.B(P.n - k - 1, k - 1);
    if (std::abs(a) + std::abs(b) <= structural_tolerance(P))
        throw SingularPoleError("pole_at: pole " + std::to_string(k) + " has |a| + |b| ~ 0");
    return HomogeneousValue(a, b);
}

/// Generalized Cayley transform (A, B) -> (A + B, A - B); maps a palindromic
/// pair to an alternating one and each eigenvalue mu to (mu+1)/(mu-1).
inline StructuredPencil cayley(const StructuredPencil& P) {
    if (P.kind != StructureKind::Palindromic)
        throw StructureError("cayley: input pencil is not palindromic");
    StructuredPencil Q;
    Q.n = P.n;
    Q.A = P.A + P.B;
    Q.B = P.A - P.B;
    Q.kind = StructureKind::Alternating;
    return Q;
}

/// Measure all four invariant violations without mutating the pencil.
/// Pole slots with |a| + |b| below the structural tolerance cannot form a
/// projective value (deflated or block-pattern pencils) and are skipped in
/// the symmetry scan.
inline PencilReport validate(const StructuredPencil& P) {
    PencilReport r;
    const Index n = P.n;
    r.max_shape_violation = std::max(shape_violation(P.A), shape_violation(P.B));

    double sviol = 0.0;
    if (P.kind == StructureKind::Palindromic) {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                sviol = std::max(sviol, std::abs(P.A(i, j) - std::conj(P.B(j, i))));
    } else {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                sviol = std::max(sviol, std::abs(P.A(i, j) - std::conj(P.A(j, i))));
                sviol = std::max(sviol, std::abs(P.B(i, j) + std::conj(P.B(j, i))));
            }
    }
    r.max_structure_violation = sviol;

    const double tol = structural_tolerance(P);
    double pviol = 0.0;
    for (Index k = 1; k <= n - 1; ++k) {
        const Complex a1 = P.A(n - k - 1, k - 1), b1 = P.B(n - k - 1, k - 1);
        const Index m = n - k;
        const Complex a2 = P.A(n - m - 1, m - 1), b2 = P.B(n - m - 1, m - 1);
        if (std::abs(a1) + std::abs(b1) <= tol || std::abs(a2) + std::abs(b2) <= tol)
            continue;
        const HomogeneousValue pk(a1, b1);
        const HomogeneousValue pm(a2, b2);
        pviol = std::max(pviol, chordal_distance(pk, companion(pm, P.kind)));
    }
    r.pole_symmetry_violation = pviol;

    if (n % 2 == 0 && n >= 2) {
        const Index m = n / 2 - 1; // middle pole entry (m, m), 0-based
        const Complex a = P.A(m, m), b = P.B(m, m);
        const double scale = std::sqrt(std::norm(a) + std::norm(b));
        if (scale > tol) {
            if (P.kind == StructureKind::Palindromic)
                r.middle_pole_violation = std::abs(std::abs(a) - std::abs(b)) / scale;
            else
                r.middle_pole_violation = 2.0 * std::abs(std::real(a * std::conj(b))) / (scale * scale);
        }
    }
    return r;
}

} // namespace poleswap

#endif // POLESWAP_PENCIL_HPP
