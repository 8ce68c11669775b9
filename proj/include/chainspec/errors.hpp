// errors.hpp — exception types for precondition and evaluation failures.
#pragma once
#include <stdexcept>
#include <string>

namespace chainspec {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CHAINSPEC_ERROR(NAME)                                   \
    struct NAME : Error {                                       \
        explicit NAME(const std::string& what = #NAME)          \
            : Error(std::string(#NAME) + ": " + what) {}        \
    }

CHAINSPEC_ERROR(InvalidSpec);
CHAINSPEC_ERROR(IndexBeyondTable);
CHAINSPEC_ERROR(DivergentDegree);
CHAINSPEC_ERROR(MissingValue);
CHAINSPEC_ERROR(NotTransient);
CHAINSPEC_ERROR(NotRecurrent);
CHAINSPEC_ERROR(EndNotTransient);
CHAINSPEC_ERROR(MeasureTailInfinite);
CHAINSPEC_ERROR(SolverFailure);
CHAINSPEC_ERROR(SingularSystem);
CHAINSPEC_ERROR(MonotonicityViolation);
CHAINSPEC_ERROR(WindowDisconnected);
CHAINSPEC_ERROR(HubAssumptionMissing);
CHAINSPEC_ERROR(BoundaryDegreeUnbounded);
CHAINSPEC_ERROR(NoNonEsaRay);
CHAINSPEC_ERROR(GreenNotL2);
CHAINSPEC_ERROR(ChainNotEsa);
CHAINSPEC_ERROR(LowerBoundMissing);
CHAINSPEC_ERROR(NonpositiveV);
CHAINSPEC_ERROR(ZeroInfMeasure);
CHAINSPEC_ERROR(Overflow);
CHAINSPEC_ERROR(BaseChainIsEsa);
CHAINSPEC_ERROR(RayConditionViolated);
CHAINSPEC_ERROR(ConditionAFailure);
CHAINSPEC_ERROR(AssertionFailure);
CHAINSPEC_ERROR(UnsupportedOperation);
CHAINSPEC_ERROR(ParseError);

#undef CHAINSPEC_ERROR

} // namespace chainspec
