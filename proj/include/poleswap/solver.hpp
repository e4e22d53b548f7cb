#ifndef POLESWAP_SOLVER_HPP
#define POLESWAP_SOLVER_HPP

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include <poleswap/moves.hpp>
#include <poleswap/pencil.hpp>
#include <poleswap/rng.hpp>

namespace poleswap {

/// A shift together with its structure-determined companion; the iteration
/// inserts both at once and needs them distinct to make progress.
struct ShiftPair {
    HomogeneousValue rho;
    HomogeneousValue rho_tilde;
    StructureKind kind = StructureKind::Palindromic;
};

inline ShiftPair make_shift_pair(const HomogeneousValue& rho, StructureKind kind) {
    return ShiftPair{rho, companion(rho, kind), kind};
}

struct SolverOptions {
    double deflation_tolerance_factor = 10.0;
    int max_iterations_per_deflation = 30;
    double shift_guard_gap = 1e-3;
    bool accumulate_q = false;
    int max_refines = 10;
    double move_tolerance_factor = 10.0;
};

/// Result of a full solve: eigenvalues with their pair links, the final
/// anti-triangular matrices, the accumulated unitary when requested, and
/// the counters behind the experiment tables.
struct SolveReport {
    std::vector<HomogeneousValue> eigenvalues;
    std::vector<int> companion_index; // partner position; self-paired values point at themselves
    Matrix S_A, S_B;
    std::optional<Matrix> Q;
    MoveStats stats;
    int iterations = 0;
    double backward_error = std::numeric_limits<double>::quiet_NaN(); // filled by callers via verify
    // Rows/columns of S left unreduced by the cluster endgame (equal when S
    // is fully anti-triangular). Pole swapping orders and deflates the
    // off-circle/off-axis pairs; eigenvalues on the unit circle (imaginary
    // axis) see the same |(z - rho)/(z - rho_tilde)| for every shift and
    // collect in a middle block that no shift can split further.
    Index unreduced_lo = 0;
    Index unreduced_hi = 0;
};

/// Rayleigh quotient shift: the (1, n) corner ratio of the active window.
inline HomogeneousValue rayleigh_shift(const StructuredPencil& P, ActiveWindow w = {}) {
    w = resolve(w, P.n);
    if (w.hi - w.lo < 2)
        throw RangeError("rayleigh_shift: window size must be at least 2");
    return HomogeneousValue(P.A(w.lo, w.hi - 1), P.B(w.lo, w.hi - 1));
}

/// Homogeneous eigenvalues of a 2x2 pencil: roots of
/// det(beta*A - alpha*B) = beta^2 det A - alpha beta m + alpha^2 det B,
/// taken with the cancellation-avoiding branch of the quadratic formula.
inline std::pair<HomogeneousValue, HomogeneousValue>
eigenvalues_2x2(const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B) {
    Complex det_a = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    Complex det_b = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
    Complex m = A(0, 0) * B(1, 1) + A(1, 1) * B(0, 0) - A(0, 1) * B(1, 0) - A(1, 0) * B(0, 1);
    const double scale = std::max({std::abs(det_a), std::abs(det_b), std::abs(m)});
    if (scale == 0.0)
        throw DegeneratePencilError("eigenvalues_2x2: pencil determinant is identically zero");
    det_a /= scale;
    det_b /= scale;
    m /= scale;
    const Complex disc = std::sqrt(m * m - 4.0 * det_a * det_b);
    const Complex q = (std::abs(m + disc) >= std::abs(m - disc)) ? m + disc : m - disc;
    if (q == Complex(0.0, 0.0)) {
        // m = 0 and det A * det B = 0: a double root at 0 or at infinity
        if (std::abs(det_b) >= std::abs(det_a))
            return {HomogeneousValue(0.0, 1.0), HomogeneousValue(0.0, 1.0)};
        return {HomogeneousValue(1.0, 0.0), HomogeneousValue(1.0, 0.0)};
    }
    return {HomogeneousValue(q, 2.0 * det_b), HomogeneousValue(2.0 * det_a, q)};
}

/// Wilkinson shift: the eigenvalue of the top-right 2x2 corner subpencil
/// (window rows {1,2} x columns {nw-1, nw}) chordally closer to the Rayleigh
/// shift. Exact ties break lexicographically on (Re, Im) of alpha*conj(beta)
/// of the unit-norm representative.
inline HomogeneousValue wilkinson_shift(const StructuredPencil& P, ActiveWindow w = {}) {
    w = resolve(w, P.n);
    if (w.hi - w.lo < 3)
        throw RangeError("wilkinson_shift: window size must be at least 3");
    const Eigen::Matrix2cd As = P.A.block<2, 2>(w.lo, w.hi - 2);
    const Eigen::Matrix2cd Bs = P.B.block<2, 2>(w.lo, w.hi - 2);
    const auto [r1, r2] = eigenvalues_2x2(As, Bs);
    const HomogeneousValue ray = rayleigh_shift(P, w);
    const double d1 = chordal_distance(r1, ray);
    const double d2 = chordal_distance(r2, ray);
    if (d1 < d2) return r1;
    if (d2 < d1) return r2;
    const Complex z1 = [&] { auto u = r1.normalized(); return u.alpha * std::conj(u.beta); }();
    const Complex z2 = [&] { auto u = r2.normalized(); return u.alpha * std::conj(u.beta); }();
    if (z1.real() != z2.real()) return z1.real() < z2.real() ? r1 : r2;
    return z1.imag() <= z2.imag() ? r1 : r2;
}

/// Keep the shift away from its companion: palindromic shifts are pushed
/// radially off the unit circle (outward on an exact tie), alternating ones
/// get their real part pushed to +-gap*|rho| (positive on a tie). The fixed
/// points with no push direction (alternating 0 and infinity) raise
/// GuardError.
inline ShiftPair guard_shift(const ShiftPair& pair, double gap = 1e-3) {
    const HomogeneousValue rho = pair.rho.normalized();
    if (pair.kind == StructureKind::Palindromic) {
        const double ma = std::abs(rho.alpha);
        const double mb = std::abs(rho.beta);
        if (ma == 0.0 || mb == 0.0) return pair; // 0 and infinity are far from the circle
        const double mod = ma / mb;
        if (std::abs(mod - 1.0) >= gap) return pair;
        const double target = (mod >= 1.0) ? 1.0 + gap : 1.0 - gap;
        const HomogeneousValue guarded(rho.alpha * (target / mod), rho.beta);
        return make_shift_pair(guarded, pair.kind);
    }
    if (rho.beta == Complex(0.0, 0.0) || rho.alpha == Complex(0.0, 0.0))
        throw GuardError("guard_shift: alternating shift at 0 or infinity is its own companion");
    const Complex v = rho.alpha / rho.beta;
    const double m = std::abs(v);
    if (std::abs(v.real()) >= gap * m) return pair;
    const double pushed = (v.real() >= 0.0 ? 1.0 : -1.0) * gap * m;
    return make_shift_pair(HomogeneousValue(Complex(pushed, v.imag()), Complex(1.0, 0.0)), pair.kind);
}

/// One full sweep on the window: insert rho by a move of type I (its
/// companion appears at the other end), chase the pair toward the middle
/// with moves of type II, exchange them there (IIo for odd windows, IIe for
/// even ones, the unpaired pole staying put), chase outward, and remove the
/// shifts with a final move of type I that reinserts the original edge
/// poles. The accumulated Q of one sweep spans the nested subspace
/// iteration (A - rho_tilde B)^{-1} (A - rho B) E_k for every k.
inline MoveStats iterate_once(StructuredPencil& P, const ShiftPair& pair, const SolverOptions& opts,
                              ActiveWindow w = {}, Matrix* q_accum = nullptr) {
    w = resolve(w, P.n);
    const Index nw = w.hi - w.lo;
    if (nw < 3)
        throw RangeError("iterate_once: window size must be at least 3");
    MoveStats st;
    const HomogeneousValue sigma1(P.A(w.hi - 2, w.lo), P.B(w.hi - 2, w.lo));
    move_I(P, pair.rho, w, q_accum);
    st.type_i += 1;
    double rel = 0.0;
    if (nw % 2 == 1) {
        const Index m = (nw - 1) / 2;
        for (Index k = 2; k <= m; ++k) {
            move_II(P, k, w, q_accum, &rel);
            st.type_ii += 1;
            st.max_residual = std::max(st.max_residual, rel);
        }
        st.merge(move_IIo(P, opts.max_refines, w, q_accum, opts.move_tolerance_factor));
        for (Index k = m + 2; k <= nw - 1; ++k) {
            move_II(P, k, w, q_accum, &rel);
            st.type_ii += 1;
            st.max_residual = std::max(st.max_residual, rel);
        }
    } else {
        const Index h = nw / 2;
        for (Index k = 2; k <= h - 1; ++k) {
            move_II(P, k, w, q_accum, &rel);
            st.type_ii += 1;
            st.max_residual = std::max(st.max_residual, rel);
        }
        st.merge(move_IIe(P, opts.max_refines, w, q_accum, opts.move_tolerance_factor));
        for (Index k = h + 2; k <= nw - 1; ++k) {
            move_II(P, k, w, q_accum, &rel);
            st.type_ii += 1;
            st.max_residual = std::max(st.max_residual, rel);
        }
    }
    move_I(P, sigma1, w, q_accum);
    st.type_i += 1;
    return st;
}

/// A deflated eigenvalue pair; lambda_tilde is constructed from lambda via
/// the exact companion relation rather than read back from the matrix.
struct Deflation {
    HomogeneousValue lambda;
    HomogeneousValue lambda_tilde;
};

/// Deflate the window edge when the sigma_1 coupling entries of both A and B
/// are below f*eps*|.|_F of the initial matrices. Zeroes the four entries,
/// shrinks the window by one row/column on each side and returns the exposed
/// pair; returns nothing when the criterion is not met.
inline std::optional<Deflation> try_deflate(StructuredPencil& P, const SolverOptions& opts,
                                            ActiveWindow& w, double norm_a, double norm_b) {
    const ActiveWindow ww = resolve(w, P.n);
    if (ww.hi - ww.lo < 3) return std::nullopt;
    const double f = opts.deflation_tolerance_factor;
    if (std::abs(P.A(ww.hi - 2, ww.lo)) > f * kEps * norm_a ||
        std::abs(P.B(ww.hi - 2, ww.lo)) > f * kEps * norm_b)
        return std::nullopt;
    P.A(ww.hi - 2, ww.lo) = Complex(0.0, 0.0);
    P.B(ww.hi - 2, ww.lo) = Complex(0.0, 0.0);
    P.A(ww.lo, ww.hi - 2) = Complex(0.0, 0.0);
    P.B(ww.lo, ww.hi - 2) = Complex(0.0, 0.0);
    Deflation d{HomogeneousValue(P.A(ww.hi - 1, ww.lo), P.B(ww.hi - 1, ww.lo)),
                HomogeneousValue()};
    d.lambda_tilde = companion(d.lambda, P.kind);
    w = ActiveWindow{ww.lo + 1, ww.hi - 1};
    return d;
}

inline std::optional<Deflation> try_deflate(StructuredPencil& P, const SolverOptions& opts,
                                            ActiveWindow& w) {
    return try_deflate(P, opts, w, P.A.norm(), P.B.norm());
}

namespace detail {

// Radially project a (near) self-companion value onto the unit circle /
// imaginary axis; 0 and infinity stay put.
inline HomogeneousValue project_self_paired(const HomogeneousValue& v, StructureKind kind) {
    const HomogeneousValue u = v.normalized();
    const double ma = std::abs(u.alpha), mb = std::abs(u.beta);
    if (ma == 0.0 || mb == 0.0) return u;
    if (kind == StructureKind::Palindromic)
        return HomogeneousValue(u.alpha * mb, u.beta * ma);
    const Complex z = u.alpha * std::conj(u.beta);
    if (z.imag() == 0.0 && std::norm(u.beta) == 0.0) return u;
    return HomogeneousValue(Complex(0.0, z.imag()), Complex(std::norm(u.beta), 0.0));
}

// Eigenvalues of the active-window subpencil by a dense library solve; the
// terminal path for the unimodular middle cluster, which is outside what
// pole swapping can reach (every on-circle/on-axis point has the same
// subspace-iteration ratio, so no shift separates the cluster).
inline std::vector<HomogeneousValue> dense_window_eigenvalues(const StructuredPencil& P,
                                                              ActiveWindow w) {
    const Index u = w.hi - w.lo;
    const Matrix Aw = P.A.block(w.lo, w.lo, u, u);
    const Matrix Bw = P.B.block(w.lo, w.lo, u, u);
    std::vector<HomogeneousValue> out;
    out.reserve(u);
    Eigen::PartialPivLU<Matrix> lub(Bw);
    if (lub.rcond() > 1e-10) {
        Eigen::ComplexEigenSolver<Matrix> es(lub.solve(Aw));
        if (es.info() == Eigen::Success) {
            for (Index i = 0; i < u; ++i) out.emplace_back(es.eigenvalues()(i), Complex(1.0, 0.0));
            return out;
        }
    }
    Eigen::PartialPivLU<Matrix> lua(Aw);
    if (lua.rcond() > 1e-10) {
        Eigen::ComplexEigenSolver<Matrix> es(lua.solve(Bw));
        if (es.info() == Eigen::Success) {
            for (Index i = 0; i < u; ++i) out.emplace_back(Complex(1.0, 0.0), es.eigenvalues()(i));
            return out;
        }
    }
    throw ConvergenceError("solve: stalled window subpencil is numerically singular");
}

// Deterministic fallback shift for stalled windows, seeded by the sweep
// counter; kept away from the circle / axis by construction.
inline HomogeneousValue exceptional_shift(long counter, StructureKind kind) {
    SplitMix64 g(0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(counter * 2654435761ll + 17));
    const double u1 = static_cast<double>(g.next() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(g.next() >> 11) * 0x1.0p-53;
    if (kind == StructureKind::Palindromic) {
        const double angle = 2.0 * M_PI * u1;
        return HomogeneousValue(Complex(1.5 * std::cos(angle), 1.5 * std::sin(angle)),
                                Complex(1.0, 0.0));
    }
    const double angle = (2.0 * u1 - 1.0); // |angle| < 1 keeps Re bounded away from 0
    const double mod = 0.7 + 0.6 * u2;
    return HomogeneousValue(Complex(mod * std::cos(angle), mod * std::sin(angle)),
                            Complex(1.0, 0.0));
}

} // namespace detail

/// Full eigensolver: repeat {shift, guard, sweep, deflate} on a shrinking
/// window until only a 2x2 or 1x1 block remains, then read the terminal
/// eigenvalues directly. Every reported off-circle/off-axis pair carries a
/// companion constructed exactly in homogeneous arithmetic; values on the
/// circle/axis are reported self-paired. Stalled windows get one
/// exceptional-shift retry before ConvergenceError.
inline SolveReport solve(const StructuredPencil& input, const SolverOptions& opts = {}) {
    StructuredPencil P = input;
    const Index n = P.n;
    if (n < 1)
        throw DimensionError("solve: empty pencil");
    SolveReport rep;
    Matrix q_mat;
    Matrix* qp = nullptr;
    if (opts.accumulate_q) {
        q_mat = Matrix::Identity(n, n);
        qp = &q_mat;
    }
    const double norm_a = P.A.norm();
    const double norm_b = P.B.norm();
    ActiveWindow w{0, n};

    std::vector<HomogeneousValue> eigs;
    std::vector<int> comp;
    eigs.reserve(n);
    comp.reserve(n);
    const auto push_pair = [&](const HomogeneousValue& l, const HomogeneousValue& lt) {
        const int i = static_cast<int>(eigs.size());
        eigs.push_back(l);
        eigs.push_back(lt);
        comp.push_back(i + 1);
        comp.push_back(i);
    };
    const auto push_self = [&](const HomogeneousValue& l) {
        comp.push_back(static_cast<int>(eigs.size()));
        eigs.push_back(l);
    };

    // Shift policy: of the corner-block roots, prefer one that predicts an
    // extractable off-circle/off-axis pair (Wilkinson's corner-closeness
    // breaking ties). A root sitting on the circle/axis predicts a
    // self-companion eigenvalue, and inserting it makes the sweep a no-op.
    const auto choose_shift = [&]() -> HomogeneousValue {
        std::vector<HomogeneousValue> cands;
        if (w.hi - w.lo >= 3) {
            try {
                const Eigen::Matrix2cd As = P.A.block<2, 2>(w.lo, w.hi - 2);
                const Eigen::Matrix2cd Bs = P.B.block<2, 2>(w.lo, w.hi - 2);
                const auto [r1, r2] = eigenvalues_2x2(As, Bs);
                cands.push_back(r1);
                cands.push_back(r2);
            } catch (const Error&) {
            }
        }
        std::optional<HomogeneousValue> ray;
        try {
            ray = rayleigh_shift(P, w);
            cands.push_back(*ray);
        } catch (const Error&) {
        }
        constexpr double kOffCircle = 0.05;
        const HomogeneousValue* best = nullptr;
        double best_ray_dist = std::numeric_limits<double>::infinity();
        for (const auto& c : cands) {
            if (chordal_distance(c, companion(c, P.kind)) < kOffCircle) continue;
            const double dr = ray ? chordal_distance(c, *ray) : 0.0;
            if (dr < best_ray_dist) {
                best_ray_dist = dr;
                best = &c;
            }
        }
        if (best) return *best;
        // every estimate hugs the circle/axis: take the least bad one if it
        // clears the guard, otherwise probe with a detuned shift
        const HomogeneousValue* far = nullptr;
        double far_dist = 0.0;
        for (const auto& c : cands) {
            const double d = chordal_distance(c, companion(c, P.kind));
            if (d > far_dist) {
                far_dist = d;
                far = &c;
            }
        }
        if (far && far_dist >= 10.0 * opts.shift_guard_gap) return *far;
        return detail::exceptional_shift(rep.iterations, P.kind);
    };

    int window_iters = 0;
    bool retried = false;
    bool force_exceptional = false;
    while (w.hi - w.lo > 2) {
        if (auto d = try_deflate(P, opts, w, norm_a, norm_b)) {
            push_pair(d->lambda, d->lambda_tilde);
            window_iters = 0;
            retried = false;
            continue;
        }
        HomogeneousValue rho;
        if (window_iters >= opts.max_iterations_per_deflation) {
            if (retried) {
                // The remaining window resists every off-circle shift: its
                // spectrum is (numerically) all on the circle/axis, which
                // this iteration cannot split. Read the cluster off with a
                // dense solve and stop reducing this block.
                const auto vals = detail::dense_window_eigenvalues(P, w);
                const Index u = w.hi - w.lo;
                std::vector<bool> used(vals.size(), false);
                for (Index i = 0; i < u; ++i) {
                    if (used[i]) continue;
                    used[i] = true;
                    const HomogeneousValue comp_i = companion(vals[i], P.kind);
                    if (chordal_distance(vals[i], comp_i) < 1e-6) {
                        push_self(detail::project_self_paired(vals[i], P.kind));
                        continue;
                    }
                    Index jbest = -1;
                    double dbest = std::numeric_limits<double>::infinity();
                    for (Index j = 0; j < u; ++j) {
                        if (used[j]) continue;
                        const double d = chordal_distance(vals[j], comp_i);
                        if (d < dbest) {
                            dbest = d;
                            jbest = j;
                        }
                    }
                    if (jbest >= 0) {
                        used[jbest] = true;
                        push_pair(vals[i], comp_i);
                    } else {
                        push_self(vals[i]);
                    }
                }
                rep.unreduced_lo = w.lo;
                rep.unreduced_hi = w.hi;
                w.lo = w.hi;
                break;
            }
            retried = true;
            window_iters = 0;
            rho = detail::exceptional_shift(rep.iterations, P.kind);
        } else if (force_exceptional) {
            force_exceptional = false;
            rho = detail::exceptional_shift(rep.iterations, P.kind);
        } else {
            rho = choose_shift();
        }
        const ShiftPair pair = guard_shift(make_shift_pair(rho, P.kind), opts.shift_guard_gap);
        try {
            rep.stats.merge(iterate_once(P, pair, opts, w, qp));
        } catch (const CoincidentPolesError&) {
            // the chased shift ran into a (numerically) equal pole; the
            // pencil is still a valid congruence image, so try another shift
            force_exceptional = true;
        } catch (const DegenerateShiftError&) {
            force_exceptional = true;
        } catch (const RefinementLimitError&) {
            force_exceptional = true;
        }
        rep.iterations += 1;
        window_iters += 1;
    }

    if (w.hi - w.lo == 2) {
        const Index lo = w.lo;
        const Eigen::Matrix2cd Ab = P.A.block<2, 2>(lo, lo);
        const Eigen::Matrix2cd Bb = P.B.block<2, 2>(lo, lo);
        const auto [r1, r2] = eigenvalues_2x2(Ab, Bb);
        if (chordal_distance(r1, companion(r1, P.kind)) > 1e-6) {
            // a proper pair: the congruence whose first column is the
            // r1-eigenvector anti-triangularizes the block (x^* A x = 0 off
            // the circle/axis)
            const HomogeneousValue rn = r1.normalized();
            const Eigen::Matrix2cd M = rn.beta * Ab - rn.alpha * Bb;
            Complex v1, v2;
            if (M.row(0).norm() >= M.row(1).norm()) {
                v1 = M(0, 1);
                v2 = -M(0, 0);
            } else {
                v1 = M(1, 1);
                v2 = -M(1, 0);
            }
            if (std::max(std::abs(v1), std::abs(v2)) > 0.0) {
                const CoreTransformation fin = rotation_from_vector(v1, v2, lo);
                apply_congruence(P, fin, ActiveWindow{w.lo, w.hi}, qp);
                P.A(lo, lo) = Complex(0.0, 0.0);
                P.B(lo, lo) = Complex(0.0, 0.0);
                const HomogeneousValue bottom(P.A(lo + 1, lo), P.B(lo + 1, lo));
                push_pair(bottom, companion(bottom, P.kind));
            } else {
                push_pair(r1, companion(r1, P.kind));
            }
        } else {
            push_self(detail::project_self_paired(r1, P.kind));
            push_self(detail::project_self_paired(r2, P.kind));
        }
    } else if (w.hi - w.lo == 1) {
        const HomogeneousValue center(P.A(w.lo, w.lo), P.B(w.lo, w.lo));
        push_self(detail::project_self_paired(center, P.kind));
    }

    rep.eigenvalues = std::move(eigs);
    rep.companion_index = std::move(comp);
    rep.S_A = std::move(P.A);
    rep.S_B = std::move(P.B);
    if (qp) rep.Q = std::move(q_mat);
    return rep;
}

} // namespace poleswap

#endif // POLESWAP_SOLVER_HPP
