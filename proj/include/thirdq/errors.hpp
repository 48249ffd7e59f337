#pragma once

#include <stdexcept>
#include <string>

namespace thirdq {

// Base for all library failures; name() is the stable identifier reported by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what) : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define THIRDQ_DEFINE_ERROR(Type)                                              \
  class Type : public Error {                                                  \
   public:                                                                     \
    explicit Type(const std::string& what) : Error(#Type, what) {}             \
  };

THIRDQ_DEFINE_ERROR(InvalidArgument)
THIRDQ_DEFINE_ERROR(MalformedHamiltonian)
THIRDQ_DEFINE_ERROR(InconsistentStructure)
THIRDQ_DEFINE_ERROR(NonDiagonalizable)
THIRDQ_DEFINE_ERROR(NonUniqueNESS)
THIRDQ_DEFINE_ERROR(QuadratureError)
THIRDQ_DEFINE_ERROR(DivisionByZero)
THIRDQ_DEFINE_ERROR(BranchAmbiguity)
THIRDQ_DEFINE_ERROR(StepTooLarge)
THIRDQ_DEFINE_ERROR(DegenerateKernel)
THIRDQ_DEFINE_ERROR(DimensionMismatch)
THIRDQ_DEFINE_ERROR(NoConvergence)
THIRDQ_DEFINE_ERROR(LapackFailure)

#undef THIRDQ_DEFINE_ERROR

}  // namespace thirdq
