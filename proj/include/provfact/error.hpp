#pragma once

#include <stdexcept>
#include <string>

namespace provfact {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PROVFACT_ERROR(Name)          \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  };

PROVFACT_ERROR(SyntaxError)
PROVFACT_ERROR(SelfJoinError)
PROVFACT_ERROR(HeadVarError)
PROVFACT_ERROR(DisconnectedQuery)
PROVFACT_ERROR(UnknownVariable)
PROVFACT_ERROR(TooManyVariables)
PROVFACT_ERROR(UnboundVariable)
PROVFACT_ERROR(InvalidPermutation)
PROVFACT_ERROR(FormatError)
PROVFACT_ERROR(ArityMismatch)
PROVFACT_ERROR(IllegalAssignment)
PROVFACT_ERROR(ExpansionTooLarge)
PROVFACT_ERROR(EmptyWitnessSet)
PROVFACT_ERROR(NonRpOrdering)
PROVFACT_ERROR(ExtractionFailure)
PROVFACT_ERROR(ShapeMismatch)
PROVFACT_ERROR(NoTriad)
PROVFACT_ERROR(IoError)

#undef PROVFACT_ERROR

}  // namespace provfact
