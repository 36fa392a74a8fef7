#pragma once

#include <stdexcept>
#include <string>

namespace frobwdvv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define FROBWDVV_ERROR(Name)                       \
    struct Name : Error {                          \
        using Error::Error;                        \
    }

FROBWDVV_ERROR(BranchPointError);
FROBWDVV_ERROR(IntegrationError);
FROBWDVV_ERROR(SubstitutionError);
FROBWDVV_ERROR(SingularCenterError);
FROBWDVV_ERROR(SingularJacobianError);
FROBWDVV_ERROR(CenterMismatchError);
FROBWDVV_ERROR(NonConstantMetricError);
FROBWDVV_ERROR(SingularMetricError);
FROBWDVV_ERROR(SpecParseError);
FROBWDVV_ERROR(SpecValidationError);
FROBWDVV_ERROR(ObstructionError);
FROBWDVV_ERROR(OrderExceededError);
FROBWDVV_ERROR(InconsistentSystemError);
FROBWDVV_ERROR(UnderdeterminedError);
FROBWDVV_ERROR(NonAffineError);
FROBWDVV_ERROR(JetOrderOverflow);
FROBWDVV_ERROR(NonSemisimpleError);
FROBWDVV_ERROR(MatchingError);
FROBWDVV_ERROR(NotRepresentableError);

#undef FROBWDVV_ERROR

}  // namespace frobwdvv
