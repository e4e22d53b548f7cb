#ifndef POLESWAP_CORE_TRANSFORMATION_HPP
#define POLESWAP_CORE_TRANSFORMATION_HPP

#include <algorithm>
#include <cmath>

#include <poleswap/pencil.hpp>

namespace poleswap {

/// Unitary acting on rows/columns j and j+1 (0-based), stored as the pair
/// (c, s) of its 2x2 block [[c, -conj(s)], [s, conj(c)]].
struct CoreTransformation {
    Index j = 0;
    Complex c{1.0, 0.0};
    Complex s{0.0, 0.0};
};

inline double unitarity_defect(const CoreTransformation& q) {
    return std::abs(std::norm(q.c) + std::norm(q.s) - 1.0);
}

/// Core whose 2x2 block has first column proportional to (v1, v2):
/// r = |v|, c = v1/r, s = v2/r. Scaled before normalizing so that stress
/// magnitudes around 1e-15 survive.
inline CoreTransformation rotation_from_vector(Complex v1, Complex v2, Index j) {
    const double m = std::max(std::abs(v1), std::abs(v2));
    if (m == 0.0)
        throw ZeroVectorError("rotation_from_vector: zero vector");
    v1 /= m;
    v2 /= m;
    const double r = std::sqrt(std::norm(v1) + std::norm(v2));
    return CoreTransformation{j, v1 / r, v2 / r};
}

/// Rows/columns [lo, hi) that the solver is still working on; {0, -1} means
/// the whole pencil.
struct ActiveWindow {
    Index lo = 0;
    Index hi = -1;
};

inline ActiveWindow resolve(ActiveWindow w, Index n) {
    if (w.hi < 0) w.hi = n;
    return w;
}

namespace detail {

// Left action Q^* on rows (j, j+1) over columns [c0, n).
inline void rotate_rows(Matrix& M, const CoreTransformation& q, Index c0) {
    const Index n = M.cols();
    if (c0 >= n) return;
    const Index len = n - c0;
    auto r0 = M.row(q.j).segment(c0, len);
    auto r1 = M.row(q.j + 1).segment(c0, len);
    const Eigen::RowVectorXcd t0 = std::conj(q.c) * r0 + std::conj(q.s) * r1;
    const Eigen::RowVectorXcd t1 = -q.s * r0 + q.c * r1;
    r0 = t0;
    r1 = t1;
}

// Right action Q on columns (j, j+1) over rows [r0, n).
inline void rotate_cols(Matrix& M, const CoreTransformation& q, Index r0) {
    const Index n = M.rows();
    if (r0 >= n) return;
    const Index len = n - r0;
    auto c0 = M.col(q.j).segment(r0, len);
    auto c1 = M.col(q.j + 1).segment(r0, len);
    const Eigen::VectorXcd t0 = q.c * c0 + q.s * c1;
    const Eigen::VectorXcd t1 = -std::conj(q.s) * c0 + std::conj(q.c) * c1;
    c0 = t0;
    c1 = t1;
}

} // namespace detail

/// Congruence A <- Q^* A Q, B <- Q^* B Q. Row and column updates skip the
/// region that stays exactly zero: entries with i + j < n - 4 never receive
/// mass from a move (the fill of a middle swap reaches two diagonals above
/// the pole line, no further), and everything left of / above the window is
/// exactly zero for the rows and columns a windowed move touches. If q_accum
/// is given it collects Q <- Q * core over full columns.
inline void apply_congruence(StructuredPencil& P, const CoreTransformation& q,
                             ActiveWindow w = {}, Matrix* q_accum = nullptr) {
    const Index n = P.n;
    if (q.j < 0 || q.j > n - 2)
        throw IndexError("apply_congruence: core index out of range");
    w = resolve(w, n);
    const Index start = std::max<Index>({0, w.lo, n - 4 - q.j});
    detail::rotate_rows(P.A, q, start);
    detail::rotate_rows(P.B, q, start);
    detail::rotate_cols(P.A, q, start);
    detail::rotate_cols(P.B, q, start);
    if (q_accum) detail::rotate_cols(*q_accum, q, 0);
}

} // namespace poleswap

#endif // POLESWAP_CORE_TRANSFORMATION_HPP
