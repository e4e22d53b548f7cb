#ifndef POLESWAP_MOVES_HPP
#define POLESWAP_MOVES_HPP

#include <array>
#include <utility>

#include <poleswap/core_transformation.hpp>
#include <poleswap/pencil.hpp>

namespace poleswap {

/// Entries of a middle-swap block that should be zero after the swap,
/// together with the local block norms that scale the acceptance test.
struct SwapResidual {
    std::array<Complex, 3> eps{}; // from A; one entry for IIo, three for IIe
    std::array<Complex, 3> eta{}; // from B
    int entry_count = 1;
    double block_norm_a = 0.0;
    double block_norm_b = 0.0;

    double eps_abs() const {
        double m = 0.0;
        for (int i = 0; i < entry_count; ++i) m = std::max(m, std::abs(eps[i]));
        return m;
    }
    double eta_abs() const {
        double m = 0.0;
        for (int i = 0; i < entry_count; ++i) m = std::max(m, std::abs(eta[i]));
        return m;
    }
    /// Largest residual relative to its own block norm.
    double relative() const {
        const double ra = block_norm_a > 0.0 ? eps_abs() / block_norm_a : 0.0;
        const double rb = block_norm_b > 0.0 ? eta_abs() / block_norm_b : 0.0;
        return std::max(ra, rb);
    }
    /// The swap tolerance: |eps| <= f*eps_mach*|M_A|_F and likewise for B.
    bool acceptable(double tol_factor = 10.0) const {
        return eps_abs() <= tol_factor * kEps * block_norm_a &&
               eta_abs() <= tol_factor * kEps * block_norm_b;
    }
};

/// Per-solve move accounting; feeds the move-count and refinement tables.
struct MoveStats {
    long type_i = 0;
    long type_ii = 0;
    long type_iio = 0;
    long type_iie = 0;
    long refinements = 0;
    double max_residual = 0.0; // largest relative swap residual seen

    long total_moves() const { return type_i + type_ii + type_iio + type_iie; }
    void merge(const MoveStats& o) {
        type_i += o.type_i;
        type_ii += o.type_ii;
        type_iio += o.type_iio;
        type_iie += o.type_iie;
        refinements += o.refinements;
        max_residual = std::max(max_residual, o.max_residual);
    }
};

struct CrossSolution {
    Complex y;
    Complex x;
};

namespace detail {

// Scaled Cramer solve of [[m11, m12], [m21, m22]] (u, v)^T = (r1, r2)^T.
// Rows are scaled to unit inf-norm first; entries of the stress problems
// span 1e-15..1e0 and unscaled Cramer loses everything.
inline std::pair<Complex, Complex> solve_2x2_scaled(Complex m11, Complex m12, Complex m21, Complex m22,
                                                    Complex r1, Complex r2) {
    const double s1 = std::max(std::abs(m11), std::abs(m12));
    const double s2 = std::max(std::abs(m21), std::abs(m22));
    if (s1 == 0.0 || s2 == 0.0)
        throw CoincidentPolesError("2x2 cross system has a zero row");
    m11 /= s1; m12 /= s1; r1 /= s1;
    m21 /= s2; m22 /= s2; r2 /= s2;
    const Complex d = m11 * m22 - m21 * m12;
    if (std::abs(d) <= 1e-14)
        throw CoincidentPolesError("2x2 cross system is singular: poles coincide");
    return {(r1 * m22 - r2 * m12) / d, (m11 * r2 - m21 * r1) / d};
}

// Determinant a1*b2 - b1*a2 of the swap system, with the coincident-pole
// refusal threshold applied to the row-scaled value.
inline Complex swap_determinant(Complex a1, Complex a2, Complex b1, Complex b2) {
    const double s1 = std::max(std::abs(a1), std::abs(a2));
    const double s2 = std::max(std::abs(b1), std::abs(b2));
    const Complex d = a1 * b2 - b1 * a2;
    if (s1 == 0.0 || s2 == 0.0 || std::abs(d) <= 1e-14 * s1 * s2)
        throw CoincidentPolesError("swap determinant below threshold: poles coincide");
    return d;
}

inline CoreTransformation rotation_or_identity(Complex v1, Complex v2, Index j) {
    if (v1 == Complex(0.0, 0.0) && v2 == Complex(0.0, 0.0))
        return CoreTransformation{j, Complex(1.0, 0.0), Complex(0.0, 0.0)};
    return rotation_from_vector(v1, v2, j);
}

// Project the k x k principal block at (j, j) onto the exact structure
// relation. The anti-structured component of the block is roundoff drift of
// the concrete A/B storage; the middle-swap kernels and their refinements
// rely on the structure identities (y = conj(x), d real) and cannot reach
// the 10*eps*|M| tolerance against drifted entries.
inline void project_block_structure(StructuredPencil& P, Index j, Index k) {
    if (P.kind == StructureKind::Palindromic) {
        const Eigen::MatrixXcd T =
            0.5 * (P.A.block(j, j, k, k) + P.B.block(j, j, k, k).adjoint());
        P.A.block(j, j, k, k) = T;
        P.B.block(j, j, k, k) = T.adjoint();
    } else {
        const Eigen::MatrixXcd H =
            0.5 * (P.A.block(j, j, k, k) + P.A.block(j, j, k, k).adjoint());
        const Eigen::MatrixXcd S =
            0.5 * (P.B.block(j, j, k, k) - P.B.block(j, j, k, k).adjoint());
        P.A.block(j, j, k, k) = H;
        P.B.block(j, j, k, k) = S;
    }
}

// The refinement equations are real-linear in the corrections: each complex
// equation  sum_k (p_k x_k + q_k conj(x_k)) = r  contributes two real rows
// in the unknowns (Re x_k, Im x_k). Solving them jointly for the A and B
// sides in least squares takes the structure symmetry into account the way
// the paper prescribes: in exact structure the stack is consistent and the
// solve is exact. Rank loss signals coincident poles.
template <int NEQ, int NU>
struct ConjugateLinearSystem {
    Eigen::Matrix<double, 2 * NEQ, 2 * NU> M = Eigen::Matrix<double, 2 * NEQ, 2 * NU>::Zero();
    Eigen::Matrix<double, 2 * NEQ, 1> rhs = Eigen::Matrix<double, 2 * NEQ, 1>::Zero();

    // add p*x_u + q*conj(x_u) to equation eq
    void add(int eq, int u, Complex p, Complex q) {
        M(2 * eq, 2 * u) += p.real() + q.real();
        M(2 * eq, 2 * u + 1) += -p.imag() + q.imag();
        M(2 * eq + 1, 2 * u) += p.imag() + q.imag();
        M(2 * eq + 1, 2 * u + 1) += p.real() - q.real();
    }
    void set_rhs(int eq, Complex r) {
        rhs(2 * eq) = r.real();
        rhs(2 * eq + 1) = r.imag();
    }

    std::array<Complex, NU> solve() const {
        Eigen::Matrix<double, 2 * NEQ, 2 * NU> Ms = M;
        Eigen::Matrix<double, 2 * NEQ, 1> rs = rhs;
        for (int i = 0; i < 2 * NEQ; i += 2) {
            const double s = std::max(Ms.row(i).template lpNorm<Eigen::Infinity>(),
                                      Ms.row(i + 1).template lpNorm<Eigen::Infinity>());
            if (s > 0.0) {
                Ms.row(i) /= s;
                Ms.row(i + 1) /= s;
                rs(i) /= s;
                rs(i + 1) /= s;
            }
        }
        Eigen::JacobiSVD<Eigen::Matrix<double, 2 * NEQ, 2 * NU>> svd(
            Ms, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(0) == 0.0 || sv(2 * NU - 1) <= 1e-14 * sv(0))
            throw CoincidentPolesError("refinement system is singular: poles coincide");
        const Eigen::Matrix<double, 2 * NU, 1> x = svd.solve(rs);
        std::array<Complex, NU> out;
        for (int u = 0; u < NU; ++u) out[u] = Complex(x(2 * u), x(2 * u + 1));
        return out;
    }
};

// Left rotation of rows (i, i+1) of a small local matrix.
inline void local_rotate_rows(Eigen::Matrix3cd& M, const CoreTransformation& g, int i) {
    for (int t = 0; t < 3; ++t) {
        const Complex x = M(i, t), y = M(i + 1, t);
        M(i, t) = std::conj(g.c) * x + std::conj(g.s) * y;
        M(i + 1, t) = -g.s * x + g.c * y;
    }
}

// Givens QR of a 3x3: eliminate (2,0) with rows (1,2), then (1,0) with rows
// (0,1), then (2,1) with rows (1,2). Q = C1*C2*C3; congruences are applied
// in exactly that order so the transformation is deterministic.
inline std::array<CoreTransformation, 3> qr_cores_3x3(Eigen::Matrix3cd M, Index base) {
    std::array<CoreTransformation, 3> cs;
    cs[0] = rotation_or_identity(M(1, 0), M(2, 0), base + 1);
    local_rotate_rows(M, cs[0], 1);
    cs[1] = rotation_or_identity(M(0, 0), M(1, 0), base);
    local_rotate_rows(M, cs[1], 0);
    cs[2] = rotation_or_identity(M(1, 1), M(2, 1), base + 1);
    local_rotate_rows(M, cs[2], 1);
    return cs;
}

// 0-based index j of the 2x2 middle block rows/cols (j, j+1) for a type IIo
// swap. A window of size 2 is itself such a block (the stress problems).
inline Index iio_block_index(ActiveWindow w) {
    const Index nw = w.hi - w.lo;
    if (nw == 2) return w.lo;
    if (nw >= 3 && nw % 2 == 1) return w.lo + (nw - 3) / 2;
    throw RangeError("type IIo swap needs an odd window (or a 2x2 block)");
}

// 0-based index c of the 3x3 middle block rows/cols (c, c+1, c+2) for IIe.
inline Index iie_block_index(ActiveWindow w) {
    const Index nw = w.hi - w.lo;
    if (nw == 3) return w.lo;
    if (nw >= 4 && nw % 2 == 0) return w.lo + nw / 2 - 2;
    throw RangeError("type IIe swap needs an even window (or a 3x3 block)");
}

} // namespace detail

/// Solve [[a1, a2], [b1, b2]] (y, -x)^T = rhs. Unique exactly when the poles
/// a1/b1 and a2/b2 are distinct; refuses (CoincidentPolesError) below the
/// scaled determinant threshold.
inline CrossSolution cross_solve_2x2(Complex a1, Complex a2, Complex b1, Complex b2,
                                     Complex rhs1, Complex rhs2) {
    auto [y, negx] = detail::solve_2x2_scaled(a1, a2, b1, b2, rhs1, rhs2);
    return CrossSolution{y, -negx};
}

/// Residual of the last type IIo swap: the (j, j) block entry of A and B.
inline SwapResidual measure_residual_iio(const StructuredPencil& P, ActiveWindow w = {}) {
    w = resolve(w, P.n);
    const Index j = detail::iio_block_index(w);
    SwapResidual r;
    r.entry_count = 1;
    r.eps[0] = P.A(j, j);
    r.eta[0] = P.B(j, j);
    r.block_norm_a = P.A.block(j, j, 2, 2).norm();
    r.block_norm_b = P.B.block(j, j, 2, 2).norm();
    return r;
}

/// Residual of the last type IIe swap: block entries (0,0), (0,1), (1,0).
inline SwapResidual measure_residual_iie(const StructuredPencil& P, ActiveWindow w = {}) {
    w = resolve(w, P.n);
    const Index c = detail::iie_block_index(w);
    SwapResidual r;
    r.entry_count = 3;
    r.eps = {P.A(c, c), P.A(c, c + 1), P.A(c + 1, c)};
    r.eta = {P.B(c, c), P.B(c, c + 1), P.B(c + 1, c)};
    r.block_norm_a = P.A.block(c, c, 3, 3).norm();
    r.block_norm_b = P.B.block(c, c, 3, 3).norm();
    return r;
}

/// The two values a type IIo swap exchanges: the block anti-diagonal ratios,
/// ordered (lower-left, upper-right).
inline std::array<HomogeneousValue, 2> middle_poles_iio(const StructuredPencil& P, ActiveWindow w = {}) {
    w = resolve(w, P.n);
    const Index j = detail::iio_block_index(w);
    return {HomogeneousValue(P.A(j + 1, j), P.B(j + 1, j)),
            HomogeneousValue(P.A(j, j + 1), P.B(j, j + 1))};
}

/// The three values a type IIe swap sees, ordered (lower-left, center,
/// upper-right); the outer two trade places, the center stays.
inline std::array<HomogeneousValue, 3> middle_poles_iie(const StructuredPencil& P, ActiveWindow w = {}) {
    w = resolve(w, P.n);
    const Index c = detail::iie_block_index(w);
    return {HomogeneousValue(P.A(c + 2, c), P.B(c + 2, c)),
            HomogeneousValue(P.A(c + 1, c + 1), P.B(c + 1, c + 1)),
            HomogeneousValue(P.A(c, c + 2), P.B(c, c + 2))};
}

/// Move of type I: replace pole sigma_1 of the window by rho. The congruence
/// simultaneously turns the mirror pole sigma_{nw-1} into the structure
/// companion of rho. Works on the first window column, where beta*A*e1 -
/// alpha*B*e1 is zero except in the last two entries; the core annihilates
/// the pole entry.
inline CoreTransformation move_I(StructuredPencil& P, const HomogeneousValue& rho,
                                 ActiveWindow w = {}, Matrix* q_accum = nullptr) {
    w = resolve(w, P.n);
    if (w.hi - w.lo < 3)
        throw RangeError("move_I: window size must be at least 3");
    // power-of-two scaling: reinserting the current pole annihilates exactly
    const HomogeneousValue r = rho.normalized_pow2();
    const Complex w1 = r.beta * P.A(w.hi - 2, w.lo) - r.alpha * P.B(w.hi - 2, w.lo);
    const Complex w2 = r.beta * P.A(w.hi - 1, w.lo) - r.alpha * P.B(w.hi - 1, w.lo);
    if (w1 == Complex(0.0, 0.0) && w2 == Complex(0.0, 0.0))
        throw DegenerateShiftError("move_I: shift is an eigenvalue with eigenvector e1");
    // Q^* (w1, w2)^T = (0, gamma)^T: first column of Q orthogonal to w
    const CoreTransformation q = rotation_from_vector(-std::conj(w2), std::conj(w1), w.hi - 2);
    apply_congruence(P, q, w, q_accum);
    return q;
}

/// Move of type II: swap the adjacent window poles sigma_{k-1} and sigma_k
/// (2 <= k <= nw-1, away from the middle: k < nw/2 or k > nw/2 + 1). One
/// congruence built from two non-interfering cores also swaps the mirror
/// pair sigma_{nw-k}, sigma_{nw-k+1}. The bulge entry and its mirror are
/// measured into *residual_out (relative to the local block norms) and then
/// set to zero; this variant of the swap never needs refinement.
inline std::pair<CoreTransformation, CoreTransformation>
move_II(StructuredPencil& P, Index k, ActiveWindow w = {}, Matrix* q_accum = nullptr,
        double* residual_out = nullptr) {
    w = resolve(w, P.n);
    const Index nw = w.hi - w.lo;
    if (k < 2 || k > nw - 1)
        throw RangeError("move_II: k must lie in 2..n-1");
    if (2 * k >= nw && 2 * k <= nw + 2)
        throw RangeError("move_II: cores would interfere; the middle swap is a move of type IIo/IIe");
    const Index r = w.hi - k - 1; // rows (r, r+1)
    const Index c = w.lo + k - 1; // cols (c-1, c)
    const Complex a1 = P.A(r, c), b1 = P.B(r, c);         // sigma_k
    const Complex a2 = P.A(r + 1, c - 1), b2 = P.B(r + 1, c - 1); // sigma_{k-1}
    const Complex a21 = P.A(r + 1, c), b21 = P.B(r + 1, c);
    const Complex d = detail::swap_determinant(a1, a2, b1, b2);
    // right core: first column ~ (x, 1); left core: first column ~ (-conj(y), 1)
    const CoreTransformation right = rotation_from_vector(b1 * a21 - a1 * b21, d, c - 1);
    const CoreTransformation left =
        rotation_from_vector(-std::conj(a21 * b2 - b21 * a2), std::conj(d), r);
    apply_congruence(P, right, w, q_accum);
    apply_congruence(P, left, w, q_accum);

    double rel = 0.0;
    const double na = P.A.block(r, c - 1, 2, 2).norm();
    const double nb = P.B.block(r, c - 1, 2, 2).norm();
    const double ma = P.A.block(c - 1, r, 2, 2).norm();
    const double mb = P.B.block(c - 1, r, 2, 2).norm();
    if (na > 0.0) rel = std::max(rel, std::abs(P.A(r, c - 1)) / na);
    if (nb > 0.0) rel = std::max(rel, std::abs(P.B(r, c - 1)) / nb);
    if (ma > 0.0) rel = std::max(rel, std::abs(P.A(c - 1, r)) / ma);
    if (mb > 0.0) rel = std::max(rel, std::abs(P.B(c - 1, r)) / mb);
    P.A(r, c - 1) = Complex(0.0, 0.0);
    P.B(r, c - 1) = Complex(0.0, 0.0);
    P.A(c - 1, r) = Complex(0.0, 0.0);
    P.B(c - 1, r) = Complex(0.0, 0.0);
    if (residual_out) *residual_out = rel;
    return {right, left};
}

/// One Newton correction after a type IIo swap. Solves the linearized
/// congruence equations for the tiny x (y = conj(x) by structure), applies
/// the near-identity core with first column ~ (1, x) and re-measures.
inline SwapResidual refine_IIo(StructuredPencil& P, ActiveWindow w = {}, Matrix* q_accum = nullptr) {
    w = resolve(w, P.n);
    const Index j = detail::iio_block_index(w);
    detail::project_block_structure(P, j, 2);
    // post-swap block [[eps, a2], [a1, a12]]; the correction x solves
    // a2*x + a1*conj(x) = -eps jointly with the B-side equation
    const Complex eps = P.A(j, j), eta = P.B(j, j);
    const Complex a2 = P.A(j, j + 1), b2 = P.B(j, j + 1);
    const Complex a1 = P.A(j + 1, j), b1 = P.B(j + 1, j);
    detail::ConjugateLinearSystem<2, 1> sys;
    sys.add(0, 0, a2, a1);
    sys.set_rhs(0, -eps);
    sys.add(1, 0, b2, b1);
    sys.set_rhs(1, -eta);
    const Complex x = sys.solve()[0];
    const CoreTransformation q = detail::rotation_or_identity(Complex(1.0, 0.0), x, j);
    apply_congruence(P, q, w, q_accum);
    return measure_residual_iio(P, w);
}

/// Move of type IIo: swap the two middle poles of an odd window (or the two
/// values of a 2x2 block). A single core built from the unscaled solution of
/// the 2x2 Sylvester system does the swap; the entry that should be zero is
/// then refined until it sits below tol_factor*eps*|M|_F and finally set to
/// zero. Throws RefinementLimitError when max_refines corrections are not
/// enough, CoincidentPolesError when the middle poles coincide (shift on the
/// unit circle / imaginary axis).
inline MoveStats move_IIo(StructuredPencil& P, int max_refines = 10, ActiveWindow w = {},
                          Matrix* q_accum = nullptr, double tol_factor = 10.0) {
    w = resolve(w, P.n);
    const Index j = detail::iio_block_index(w);
    detail::project_block_structure(P, j, 2);
    // block [[., a1], [a2, a21]]; the poles a2/b2 and a1/b1 trade places
    const Complex a1 = P.A(j, j + 1), b1 = P.B(j, j + 1);
    const Complex a2 = P.A(j + 1, j), b2 = P.B(j + 1, j);
    const Complex a21 = P.A(j + 1, j + 1), b21 = P.B(j + 1, j + 1);
    const Complex d = detail::swap_determinant(a1, a2, b1, b2);
    // first column of Q ~ (x, 1), unscaled; in both structures d is real,
    // making s real
    const CoreTransformation q = rotation_from_vector(b1 * a21 - a1 * b21, d, j);
    apply_congruence(P, q, w, q_accum);

    MoveStats st;
    st.type_iio = 1;
    SwapResidual res = measure_residual_iio(P, w);
    st.max_residual = res.relative();
    int refines = 0;
    while (!res.acceptable(tol_factor) && refines < max_refines) {
        res = refine_IIo(P, w, q_accum);
        ++refines;
        st.max_residual = std::max(st.max_residual, res.relative());
    }
    st.refinements = refines;
    if (!res.acceptable(tol_factor))
        throw RefinementLimitError("move_IIo: residual above tolerance after refinement cap",
                                   refines, res.relative());
    P.A(j, j) = Complex(0.0, 0.0);
    P.B(j, j) = Complex(0.0, 0.0);
    return st;
}

/// One Newton correction after a type IIe swap: solve the three linearized
/// 2x2 systems (the (3,1) pair first, its solution feeding the other two),
/// then a congruence with Q from the QR of the near-identity X.
inline SwapResidual refine_IIe(StructuredPencil& P, ActiveWindow w = {}, Matrix* q_accum = nullptr) {
    w = resolve(w, P.n);
    const Index c = detail::iie_block_index(w);
    detail::project_block_structure(P, c, 3);
    const Complex e11 = P.A(c, c), e12 = P.A(c, c + 1), e21 = P.A(c + 1, c);
    const Complex g11 = P.B(c, c), g12 = P.B(c, c + 1), g21 = P.B(c + 1, c);
    const Complex a13 = P.A(c, c + 2), a22 = P.A(c + 1, c + 1), a23 = P.A(c + 1, c + 2);
    const Complex a31 = P.A(c + 2, c), a32 = P.A(c + 2, c + 1);
    const Complex b13 = P.B(c, c + 2), b22 = P.B(c + 1, c + 1), b23 = P.B(c + 1, c + 2);
    const Complex b31 = P.B(c + 2, c), b32 = P.B(c + 2, c + 1);

    // (3,1) pair first: a13*x31 + a31*conj(x31) = -e11, same from B
    detail::ConjugateLinearSystem<2, 1> corner;
    corner.add(0, 0, a13, a31);
    corner.set_rhs(0, -e11);
    corner.add(1, 0, b13, b31);
    corner.set_rhs(1, -g11);
    const Complex x31 = corner.solve()[0];

    // x31 feeds the remaining equations, which couple (x32, x21) through
    // y12 = conj(x21) and y23 = conj(x32)
    detail::ConjugateLinearSystem<4, 2> coupled; // unknowns: 0 -> x32, 1 -> x21
    coupled.add(0, 0, a13, Complex(0.0, 0.0));
    coupled.add(0, 1, Complex(0.0, 0.0), a22);
    coupled.set_rhs(0, -e12 - std::conj(x31) * a32);
    coupled.add(1, 1, a22, Complex(0.0, 0.0));
    coupled.add(1, 0, Complex(0.0, 0.0), a31);
    coupled.set_rhs(1, -e21 - a23 * x31);
    coupled.add(2, 0, b13, Complex(0.0, 0.0));
    coupled.add(2, 1, Complex(0.0, 0.0), b22);
    coupled.set_rhs(2, -g12 - std::conj(x31) * b32);
    coupled.add(3, 1, b22, Complex(0.0, 0.0));
    coupled.add(3, 0, Complex(0.0, 0.0), b31);
    coupled.set_rhs(3, -g21 - b23 * x31);
    const auto xs = coupled.solve();
    const Complex x32 = xs[0], x21 = xs[1];

    Eigen::Matrix3cd X;
    X << Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
         x21, Complex(1.0, 0.0), Complex(0.0, 0.0),
         x31, x32, Complex(1.0, 0.0);
    const auto cores = detail::qr_cores_3x3(X, c);
    for (const auto& g : cores) apply_congruence(P, g, w, q_accum);
    return measure_residual_iie(P, w);
}

/// Move of type IIe: swap the outer two of the three middle poles of an even
/// window (or of a 3x3 block), leaving the unpaired center pole in place.
/// Three nearly independent 2x2 cross systems give the unit lower triangular
/// X; the congruence uses Q from the QR of the flipped X, built as three
/// cores. Residual handling matches move_IIo.
inline MoveStats move_IIe(StructuredPencil& P, int max_refines = 10, ActiveWindow w = {},
                          Matrix* q_accum = nullptr, double tol_factor = 10.0) {
    w = resolve(w, P.n);
    const Index c = detail::iie_block_index(w);
    detail::project_block_structure(P, c, 3);
    // block [[., ., a1], [., a2, a21], [a3, a32, a31]]
    const Complex a1 = P.A(c, c + 2), a2 = P.A(c + 1, c + 1), a3 = P.A(c + 2, c);
    const Complex a21 = P.A(c + 1, c + 2), a32 = P.A(c + 2, c + 1), a31 = P.A(c + 2, c + 2);
    const Complex b1 = P.B(c, c + 2), b2 = P.B(c + 1, c + 1), b3 = P.B(c + 2, c);
    const Complex b21 = P.B(c + 1, c + 2), b32 = P.B(c + 2, c + 1), b31 = P.B(c + 2, c + 2);

    const CrossSolution s1 = cross_solve_2x2(a1, a2, b1, b2, a21, b21);
    const CrossSolution s2 = cross_solve_2x2(a2, a3, b2, b3, a32, b32);
    const CrossSolution s3 = cross_solve_2x2(a1, a3, b1, b3,
                                             a31 + a32 * s1.x, b31 + b32 * s1.x);
    Eigen::Matrix3cd FX;
    FX << s3.x, s2.x, Complex(1.0, 0.0),
          s1.x, Complex(1.0, 0.0), Complex(0.0, 0.0),
          Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0);
    const auto cores = detail::qr_cores_3x3(FX, c);
    for (const auto& g : cores) apply_congruence(P, g, w, q_accum);

    MoveStats st;
    st.type_iie = 1;
    SwapResidual res = measure_residual_iie(P, w);
    st.max_residual = res.relative();
    int refines = 0;
    while (!res.acceptable(tol_factor) && refines < max_refines) {
        res = refine_IIe(P, w, q_accum);
        ++refines;
        st.max_residual = std::max(st.max_residual, res.relative());
    }
    st.refinements = refines;
    if (!res.acceptable(tol_factor))
        throw RefinementLimitError("move_IIe: residual above tolerance after refinement cap",
                                   refines, res.relative());
    P.A(c, c) = P.A(c, c + 1) = P.A(c + 1, c) = Complex(0.0, 0.0);
    P.B(c, c) = P.B(c, c + 1) = P.B(c + 1, c) = Complex(0.0, 0.0);
    return st;
}

} // namespace poleswap

#endif // POLESWAP_MOVES_HPP
