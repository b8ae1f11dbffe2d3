#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fusionlab {

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define FUSIONLAB_DEFINE_ERROR(NAME)                \
  class NAME : public Error {                       \
   public:                                          \
    explicit NAME(const std::string& msg)           \
        : Error(#NAME, msg) {}                      \
  };

FUSIONLAB_DEFINE_ERROR(NotHermitian)
FUSIONLAB_DEFINE_ERROR(NonConvergence)
FUSIONLAB_DEFINE_ERROR(NotPositiveDefinite)
FUSIONLAB_DEFINE_ERROR(AlgebraMismatch)
FUSIONLAB_DEFINE_ERROR(NotIntertwiner)
FUSIONLAB_DEFINE_ERROR(NotHomomorphism)
FUSIONLAB_DEFINE_ERROR(ActionsDoNotCommute)
FUSIONLAB_DEFINE_ERROR(MissingDualityData)
FUSIONLAB_DEFINE_ERROR(NotBiFinite)
FUSIONLAB_DEFINE_ERROR(DegenerateInnerProduct)
FUSIONLAB_DEFINE_ERROR(NotFinitelyGeneratedRight)
FUSIONLAB_DEFINE_ERROR(InputError)

#undef FUSIONLAB_DEFINE_ERROR

}  // namespace fusionlab
