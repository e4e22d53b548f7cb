#ifndef POLESWAP_VERIFY_HPP
#define POLESWAP_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include <poleswap/homogeneous.hpp>
#include <poleswap/pencil.hpp>
#include <poleswap/solver.hpp>

namespace poleswap {

/// |Q^* A Q - S|_F / |A|_F.
inline double backward_error(const Matrix& A_in, const Matrix& Q, const Matrix& S) {
    if (A_in.rows() != A_in.cols() || Q.rows() != A_in.rows() || Q.cols() != A_in.cols() ||
        S.rows() != A_in.rows() || S.cols() != A_in.cols())
        throw SizeMismatch("backward_error: dimension mismatch");
    const double na = A_in.norm();
    if (na == 0.0) return 0.0;
    return (Q.adjoint() * A_in * Q - S).norm() / na;
}

// The oracle below shares nothing with the moves machinery: its own
// rotations, its own reduction, its own shifts. Agreement with the solver is
// evidence, not tautology.
namespace oracle_detail {

struct Rot {
    Complex c{1.0, 0.0};
    Complex s{0.0, 0.0};
};

// First column of the 2x2 proportional to (v1, v2); applying the adjoint
// from the left maps (v1, v2) to (r, 0).
inline Rot annihilating(Complex v1, Complex v2) {
    const double m = std::max(std::abs(v1), std::abs(v2));
    if (m == 0.0) return Rot{};
    v1 /= m;
    v2 /= m;
    const double r = std::sqrt(std::norm(v1) + std::norm(v2));
    return Rot{v1 / r, v2 / r};
}

// (c, s) with p*c + q*s = 0, for column rotations that zero a chosen entry.
inline Rot column_zeroing(Complex p, Complex q) {
    const double m = std::max(std::abs(p), std::abs(q));
    if (m == 0.0) return Rot{};
    p /= m;
    q /= m;
    const double r = std::sqrt(std::norm(p) + std::norm(q));
    return Rot{q / r, -p / r};
}

inline void rotate_rows(Matrix& M, const Rot& g, Index i) {
    const Index n = M.cols();
    for (Index t = 0; t < n; ++t) {
        const Complex x = M(i, t), y = M(i + 1, t);
        M(i, t) = std::conj(g.c) * x + std::conj(g.s) * y;
        M(i + 1, t) = -g.s * x + g.c * y;
    }
}

inline void rotate_cols(Matrix& M, const Rot& g, Index j) {
    const Index n = M.rows();
    for (Index t = 0; t < n; ++t) {
        const Complex x = M(t, j), y = M(t, j + 1);
        M(t, j) = g.c * x + g.s * y;
        M(t, j + 1) = -std::conj(g.s) * x + std::conj(g.c) * y;
    }
}

// Eigenvalue of the trailing 2x2 subpencil closer to the trailing corner
// ratio; falls back to the corner ratio itself if the 2x2 is degenerate.
inline std::pair<Complex, Complex> trailing_shift(const Matrix& A, const Matrix& B, Index m) {
    Complex det_a = A(m - 1, m - 1) * A(m, m) - A(m - 1, m) * A(m, m - 1);
    Complex det_b = B(m - 1, m - 1) * B(m, m) - B(m - 1, m) * B(m, m - 1);
    Complex mid = A(m - 1, m - 1) * B(m, m) + A(m, m) * B(m - 1, m - 1) -
                  A(m - 1, m) * B(m, m - 1) - A(m, m - 1) * B(m - 1, m);
    const double scale = std::max({std::abs(det_a), std::abs(det_b), std::abs(mid)});
    if (scale == 0.0) return {A(m, m), B(m, m)};
    det_a /= scale;
    det_b /= scale;
    mid /= scale;
    const Complex disc = std::sqrt(mid * mid - 4.0 * det_a * det_b);
    const Complex q = (std::abs(mid + disc) >= std::abs(mid - disc)) ? mid + disc : mid - disc;
    if (q == Complex(0.0, 0.0)) return {A(m, m), B(m, m)};
    // roots (q, 2 det_b) and (2 det_a, q); pick by chordal closeness to the corner
    const HomogeneousValue corner = (A(m, m) == Complex(0.0, 0.0) && B(m, m) == Complex(0.0, 0.0))
                                        ? HomogeneousValue(1.0, 1.0)
                                        : HomogeneousValue(A(m, m), B(m, m));
    const HomogeneousValue r1(q, 2.0 * det_b), r2(2.0 * det_a, q);
    return chordal_distance(r1, corner) <= chordal_distance(r2, corner)
               ? std::make_pair(r1.alpha, r1.beta)
               : std::make_pair(r2.alpha, r2.beta);
}

} // namespace oracle_detail

/// Unstructured single-shift QZ: Hessenberg-triangular reduction, then
/// implicit shifted sweeps with the standard subdiagonal deflation. Desk
/// scale only; throws OracleFailure past 100 n sweeps.
inline std::vector<HomogeneousValue> oracle_eigenvalues_qz(Matrix A, Matrix B) {
    const Index n = A.rows();
    if (n != A.cols() || B.rows() != n || B.cols() != n)
        throw SizeMismatch("oracle_eigenvalues_qz: dimension mismatch");
    if (n == 0) return {};
    using oracle_detail::annihilating;
    using oracle_detail::column_zeroing;
    using oracle_detail::rotate_cols;
    using oracle_detail::rotate_rows;

    // B -> upper triangular
    Eigen::HouseholderQR<Matrix> qr(B);
    A = qr.householderQ().adjoint() * A;
    B = Matrix(qr.matrixQR().triangularView<Eigen::Upper>());

    // A -> upper Hessenberg, keeping B triangular
    for (Index j = 0; j + 2 < n; ++j)
        for (Index i = n - 1; i > j + 1; --i) {
            const auto g = annihilating(A(i - 1, j), A(i, j));
            rotate_rows(A, g, i - 1);
            rotate_rows(B, g, i - 1);
            A(i, j) = Complex(0.0, 0.0);
            const auto z = column_zeroing(B(i, i - 1), B(i, i));
            rotate_cols(A, z, i - 1);
            rotate_cols(B, z, i - 1);
            B(i, i - 1) = Complex(0.0, 0.0);
        }

    long sweeps = 0;
    Index m = n - 1;
    while (m > 0) {
        for (Index i = m; i >= 1; --i)
            if (std::abs(A(i, i - 1)) <= kEps * (std::abs(A(i - 1, i - 1)) + std::abs(A(i, i))))
                A(i, i - 1) = Complex(0.0, 0.0);
        if (A(m, m - 1) == Complex(0.0, 0.0)) {
            --m;
            continue;
        }
        Index l = m;
        while (l > 0 && A(l, l - 1) != Complex(0.0, 0.0)) --l;

        if (++sweeps > 100 * n)
            throw OracleFailure("oracle_eigenvalues_qz: more than 100 n sweeps");
        auto [sa, sb] = oracle_detail::trailing_shift(A, B, m);
        if (sweeps % 16 == 0) { // rare stall breaker
            sa = A(m, m - 1) + A(m, m);
            sb = B(m, m);
        }
        const auto g0 = annihilating(sb * A(l, l) - sa * B(l, l), sb * A(l + 1, l));
        rotate_rows(A, g0, l);
        rotate_rows(B, g0, l);
        for (Index i = l; i < m; ++i) {
            const auto z = column_zeroing(B(i + 1, i), B(i + 1, i + 1));
            rotate_cols(A, z, i);
            rotate_cols(B, z, i);
            B(i + 1, i) = Complex(0.0, 0.0);
            if (i + 2 <= m) {
                const auto g = annihilating(A(i + 1, i), A(i + 2, i));
                rotate_rows(A, g, i + 1);
                rotate_rows(B, g, i + 1);
                A(i + 2, i) = Complex(0.0, 0.0);
            }
        }
    }

    std::vector<HomogeneousValue> out;
    out.reserve(n);
    for (Index i = 0; i < n; ++i) {
        if (A(i, i) == Complex(0.0, 0.0) && B(i, i) == Complex(0.0, 0.0))
            throw OracleFailure("oracle_eigenvalues_qz: singular pencil");
        out.emplace_back(A(i, i), B(i, i));
    }
    return out;
}

/// Characteristic-polynomial oracle for n <= 8: sample det(A - tB) on a
/// circle, recover the coefficients by an inverse DFT, peel infinite roots
/// off the leading end, and run Aberth-Ehrlich on what is left.
inline std::vector<HomogeneousValue> oracle_eigenvalues_charpoly(const Matrix& A, const Matrix& B) {
    const Index n = A.rows();
    if (n != A.cols() || B.rows() != n || B.cols() != n)
        throw SizeMismatch("oracle_eigenvalues_charpoly: dimension mismatch");
    if (n > 8)
        throw DomainError("oracle_eigenvalues_charpoly: n must be at most 8");
    if (n == 0) return {};

    const double nb = B.norm();
    double radius = nb > 0.0 ? A.norm() / nb : 1.0;
    radius = std::clamp(radius, 1e-6, 1e6);
    if (!(radius > 0.0)) radius = 1.0;

    const int mpts = static_cast<int>(n) + 1;
    std::vector<Complex> samples(mpts);
    for (int j = 0; j < mpts; ++j) {
        const double th = 2.0 * M_PI * j / mpts;
        const Complex t = radius * Complex(std::cos(th), std::sin(th));
        samples[j] = Matrix(A - t * B).determinant();
    }
    std::vector<Complex> coeff(mpts);
    for (int k = 0; k < mpts; ++k) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < mpts; ++j) {
            const double th = -2.0 * M_PI * j * k / mpts;
            acc += samples[j] * Complex(std::cos(th), std::sin(th));
        }
        coeff[k] = acc / (static_cast<double>(mpts) * std::pow(radius, k));
    }

    double cmax = 0.0;
    for (const auto& c : coeff) cmax = std::max(cmax, std::abs(c));
    if (cmax == 0.0)
        throw OracleFailure("oracle_eigenvalues_charpoly: pencil is singular");

    std::vector<HomogeneousValue> out;
    int deg = static_cast<int>(n);
    while (deg > 0 && std::abs(coeff[deg]) <= 1e-10 * cmax) {
        out.push_back(HomogeneousValue::infinity());
        --deg;
    }
    if (deg == 0) return out;

    // Aberth-Ehrlich with a Cauchy-bound start circle
    double bound = 0.0;
    for (int k = 0; k < deg; ++k) bound = std::max(bound, std::abs(coeff[k] / coeff[deg]));
    const double r0 = 1.0 + bound;
    std::vector<Complex> z(deg);
    for (int i = 0; i < deg; ++i) {
        const double th = 2.0 * M_PI * (i + 0.25) / deg + 0.4;
        z[i] = 0.5 * r0 * Complex(std::cos(th), std::sin(th));
    }
    for (int iter = 0; iter < 300; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < deg; ++i) {
            Complex p(0.0, 0.0), dp(0.0, 0.0);
            for (int k = deg; k >= 0; --k) {
                dp = dp * z[i] + p;
                p = p * z[i] + coeff[k];
            }
            if (p == Complex(0.0, 0.0)) continue;
            const Complex ratio = (dp == Complex(0.0, 0.0)) ? Complex(1e-30, 0.0) : p / dp;
            Complex sum(0.0, 0.0);
            for (int k = 0; k < deg; ++k)
                if (k != i) sum += 1.0 / (z[i] - z[k]);
            const Complex denom = 1.0 - ratio * sum;
            const Complex step = (denom == Complex(0.0, 0.0)) ? ratio : ratio / denom;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (worst <= 1e-15 && iter > 2) break;
    }
    for (int i = 0; i < deg; ++i) out.push_back(HomogeneousValue(z[i], Complex(1.0, 0.0)));
    return out;
}

/// Reference eigenvalues by a path independent of the pole-swapping code:
/// characteristic polynomial for n <= 8, unstructured QZ up to n = 64.
inline std::vector<HomogeneousValue> oracle_eigenvalues(const Matrix& A, const Matrix& B) {
    const Index n = A.rows();
    if (n > 64)
        throw DomainError("oracle_eigenvalues: desk-scale oracle is limited to n <= 64");
    if (n <= 8) return oracle_eigenvalues_charpoly(A, B);
    return oracle_eigenvalues_qz(A, B);
}

struct MatchReport {
    double max_chordal_mismatch = 0.0;
    std::vector<int> matching; // matching[i] = index in v assigned to u[i]
    int unmatched_count = 0;
};

/// Bipartite matching of two equally sized eigenvalue lists minimizing the
/// maximum chordal distance: greedy global-minimum assignment followed by
/// pairwise improvement passes.
inline MatchReport match_eigensets(const std::vector<HomogeneousValue>& u,
                                   const std::vector<HomogeneousValue>& v) {
    if (u.size() != v.size())
        throw SizeMismatch("match_eigensets: lists differ in size");
    const int n = static_cast<int>(u.size());
    MatchReport rep;
    rep.matching.assign(n, -1);
    if (n == 0) return rep;

    Eigen::MatrixXd D(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D(i, j) = chordal_distance(u[i], v[j]);

    std::vector<bool> used_u(n, false), used_v(n, false);
    for (int step = 0; step < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (int i = 0; i < n; ++i) {
            if (used_u[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (used_v[j]) continue;
                if (D(i, j) < best) {
                    best = D(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        rep.matching[bi] = bj;
        used_u[bi] = true;
        used_v[bj] = true;
    }
    for (int pass = 0; pass < 100; ++pass) {
        bool improved = false;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const int mi = rep.matching[i], mj = rep.matching[j];
                const double cur = std::max(D(i, mi), D(j, mj));
                const double alt = std::max(D(i, mj), D(j, mi));
                if (alt < cur) {
                    std::swap(rep.matching[i], rep.matching[j]);
                    improved = true;
                }
            }
        if (!improved) break;
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, D(i, rep.matching[i]));
    rep.max_chordal_mismatch = worst;
    return rep;
}

/// Largest principal angle, over k = 1..n-1, between span(Q[:, 1..k]) and
/// (A - rho_tilde B)^{-1} (A - rho B) E_k. Bases come from modified
/// Gram-Schmidt with one reorthogonalization pass; angles use the sine
/// formulation sin(theta_max) = |(I - U U^*) Q_k|_2, which keeps full
/// precision for the tiny angles the convergence theorem predicts.
inline double subspace_check(const Matrix& A, const Matrix& B, const ShiftPair& pair,
                             const Matrix& Q) {
    const Index n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != n || Q.rows() != n || Q.cols() != n)
        throw SizeMismatch("subspace_check: dimension mismatch");
    const HomogeneousValue r = pair.rho.normalized();
    const HomogeneousValue rt = pair.rho_tilde.normalized();
    const Matrix K = rt.beta * A - rt.alpha * B;
    Eigen::PartialPivLU<Matrix> lu(K);
    if (lu.rcond() < 1e3 * kEps)
        throw SingularShiftError("subspace_check: A - rho_tilde B is numerically singular");
    const Matrix M = lu.solve(r.beta * A - r.alpha * B);

    Matrix U(n, n - 1);
    double worst = 0.0;
    for (Index k = 1; k <= n - 1; ++k) {
        Eigen::VectorXcd col = M.col(k - 1);
        for (int pass = 0; pass < 2; ++pass)
            for (Index j = 0; j + 1 < k; ++j) col -= (U.col(j).adjoint() * col)(0) * U.col(j);
        const double nz = col.norm();
        if (nz <= 1e3 * kEps * M.col(k - 1).norm())
            throw SingularShiftError("subspace_check: shifted column is rank deficient");
        U.col(k - 1) = col / nz;

        const Matrix R = Q.leftCols(k) - U.leftCols(k) * (U.leftCols(k).adjoint() * Q.leftCols(k));
        Eigen::JacobiSVD<Matrix> svd(R);
        const double smax = std::clamp(svd.singularValues().maxCoeff(), 0.0, 1.0);
        worst = std::max(worst, std::asin(smax));
    }
    return worst;
}

} // namespace poleswap

#endif // POLESWAP_VERIFY_HPP
