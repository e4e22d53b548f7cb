#ifndef POLESWAP_HOMOGENEOUS_HPP
#define POLESWAP_HOMOGENEOUS_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include <poleswap/errors.hpp>

namespace poleswap {

using Complex = std::complex<double>;

/// Which of the two pencil structures a pair carries.
enum class StructureKind { Palindromic, Alternating };

/// A point of the Riemann sphere stored as a projective pair (alpha, beta),
/// representing alpha/beta. Poles, shifts and eigenvalues all live here so
/// that infinity is an ordinary value and no eager division ever happens.
struct HomogeneousValue {
    Complex alpha{0.0, 0.0};
    Complex beta{1.0, 0.0};

    HomogeneousValue() = default;

    HomogeneousValue(Complex a, Complex b) : alpha(a), beta(b) {
        if (alpha == Complex(0.0, 0.0) && beta == Complex(0.0, 0.0))
            throw DomainError("HomogeneousValue: alpha and beta are both zero");
    }

    static HomogeneousValue infinity() { return HomogeneousValue(Complex(1.0, 0.0), Complex(0.0, 0.0)); }

    static HomogeneousValue from_value(Complex v) { return HomogeneousValue(v, Complex(1.0, 0.0)); }

    bool is_infinite() const { return beta == Complex(0.0, 0.0); }

    /// alpha/beta; divides, so only for display and finite-value consumers.
    Complex value() const { return alpha / beta; }

    /// Same point with the pair scaled to unit 2-norm.
    HomogeneousValue normalized() const {
        const double m = std::max(std::abs(alpha), std::abs(beta));
        const Complex a = alpha / m;
        const Complex b = beta / m;
        const double r = std::sqrt(std::norm(a) + std::norm(b));
        return HomogeneousValue(a / r, b / r);
    }

    /// Same point scaled by a power of two into [1/2, 1) magnitude; exact in
    /// IEEE arithmetic, so cancellation tests against the original entries
    /// stay exact.
    HomogeneousValue normalized_pow2() const {
        const double m = std::max({std::abs(alpha.real()), std::abs(alpha.imag()),
                                   std::abs(beta.real()), std::abs(beta.imag())});
        int e = 0;
        std::frexp(m, &e);
        const double s = std::ldexp(1.0, -e);
        return HomogeneousValue(alpha * s, beta * s);
    }
};

/// alpha_x * beta_y - alpha_y * beta_x; zero iff the two points coincide.
inline Complex cross(const HomogeneousValue& x, const HomogeneousValue& y) {
    return x.alpha * y.beta - y.alpha * x.beta;
}

/// Projective equality, exact. (alpha, beta) ~ (c alpha, c beta) for any
/// nonzero c gives a cross product of exactly zero in IEEE arithmetic.
inline bool projectively_equal(const HomogeneousValue& x, const HomogeneousValue& y) {
    return cross(x, y) == Complex(0.0, 0.0);
}

/// Distance on the Riemann sphere, in [0, 1]; zero iff projectively equal,
/// one for antipodal points such as 0 and infinity.
inline double chordal_distance(const HomogeneousValue& x, const HomogeneousValue& y) {
    const HomogeneousValue xn = x.normalized();
    const HomogeneousValue yn = y.normalized();
    const double d = std::abs(cross(xn, yn));
    return std::min(d, 1.0);
}

/// The structure-mated value: 1/conj(v) for palindromic pairs, -conj(v) for
/// alternating ones, computed without division so infinity round-trips.
inline HomogeneousValue companion(const HomogeneousValue& v, StructureKind kind) {
    if (kind == StructureKind::Palindromic)
        return HomogeneousValue(std::conj(v.beta), std::conj(v.alpha));
    return HomogeneousValue(-std::conj(v.alpha), std::conj(v.beta));
}

} // namespace poleswap

#endif // POLESWAP_HOMOGENEOUS_HPP
