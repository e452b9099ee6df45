#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

// Exit-code classes of the CLI: 2 rejected input, 3 infeasible schedule,
// 4 a numeric certificate could not be established.
enum class ErrorClass { precondition = 2, infeasible = 3, numeric = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }

private:
    ErrorClass cls_;
};

#define HOROLAB_ERROR(Name, Cls)                                                        \
    class Name : public Error {                                                         \
    public:                                                                             \
        explicit Name(const std::string& what) : Error(ErrorClass::Cls, #Name ": " + what) {} \
    };

HOROLAB_ERROR(PreconditionViolated, precondition)
HOROLAB_ERROR(NotReduced, precondition)
HOROLAB_ERROR(FactorizationTooLarge, precondition)
HOROLAB_ERROR(RangeUnsupported, precondition)
HOROLAB_ERROR(NoApproximantFound, precondition)
HOROLAB_ERROR(ScheduleInfeasible, infeasible)
HOROLAB_ERROR(ReductionStall, numeric)
HOROLAB_ERROR(EnumerationOverflow, numeric)
HOROLAB_ERROR(PrecisionExhausted, numeric)
HOROLAB_ERROR(DivisionNearZero, numeric)
HOROLAB_ERROR(ResonanceDetected, numeric)
HOROLAB_ERROR(QuadratureUnderResolved, numeric)
HOROLAB_ERROR(DivisorExplosion, numeric)

#undef HOROLAB_ERROR

inline void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionViolated(what);
}

} // namespace horolab
