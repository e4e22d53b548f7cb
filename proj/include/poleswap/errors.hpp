#ifndef POLESWAP_ERRORS_HPP
#define POLESWAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace poleswap {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define POLESWAP_DEFINE_ERROR(Name)                                 \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(what) {}     \
    }

POLESWAP_DEFINE_ERROR(ShapeError);          // nonzeros above the super-anti-diagonal
POLESWAP_DEFINE_ERROR(StructureError);      // palindromic/alternating relation broken
POLESWAP_DEFINE_ERROR(IndexError);
POLESWAP_DEFINE_ERROR(DimensionError);
POLESWAP_DEFINE_ERROR(DomainError);
POLESWAP_DEFINE_ERROR(SingularPoleError);   // |a| + |b| ~ 0 at a pole position
POLESWAP_DEFINE_ERROR(ZeroVectorError);
POLESWAP_DEFINE_ERROR(CoincidentPolesError); // swap kernel determinant ~ 0
POLESWAP_DEFINE_ERROR(DegenerateShiftError); // shift annihilates the edge column
POLESWAP_DEFINE_ERROR(RangeError);
POLESWAP_DEFINE_ERROR(GuardError);
POLESWAP_DEFINE_ERROR(DegeneratePencilError);
POLESWAP_DEFINE_ERROR(ConvergenceError);
POLESWAP_DEFINE_ERROR(OracleFailure);
POLESWAP_DEFINE_ERROR(SingularShiftError);
POLESWAP_DEFINE_ERROR(SizeMismatch);
POLESWAP_DEFINE_ERROR(ParseError);

#undef POLESWAP_DEFINE_ERROR

/// Thrown when a middle swap still exceeds tolerance after the refinement cap.
class RefinementLimitError : public Error {
public:
    RefinementLimitError(const std::string& what, int refinements, double residual)
        : Error(what), refinements(refinements), residual(residual) {}
    int refinements;     // steps actually performed
    double residual;     // relative residual left behind
};

} // namespace poleswap

#endif // POLESWAP_ERRORS_HPP
