#pragma once

#include <stdexcept>
#include <string>

namespace factorlab {

// Every library error carries a stable kind string (e.g. "DivisionByZero")
// so the CLI and the Python layer can report it without RTTI games.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define FACTORLAB_ERROR(Name)                                        \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& msg = "") : Error(#Name, msg) {} \
  }

FACTORLAB_ERROR(DivisionByZero);
FACTORLAB_ERROR(FieldMismatch);
FACTORLAB_ERROR(NotASubfield);
FACTORLAB_ERROR(NoSuchConstant);
FACTORLAB_ERROR(InvalidField);
FACTORLAB_ERROR(NoTower);
FACTORLAB_ERROR(DimensionMismatch);
FACTORLAB_ERROR(SingularVector);
FACTORLAB_ERROR(NotAnIsometry);
FACTORLAB_ERROR(DecompositionFailure);
FACTORLAB_ERROR(DegenerateForm);
FACTORLAB_ERROR(SyntaxError);
FACTORLAB_ERROR(UnknownFamily);
FACTORLAB_ERROR(UnboundSymbol);
FACTORLAB_ERROR(NonIntegralQuotient);
FACTORLAB_ERROR(IllegalParameters);
FACTORLAB_ERROR(PointNotInDomain);
FACTORLAB_ERROR(DomainOverflow);
FACTORLAB_ERROR(NotFaithful);
FACTORLAB_ERROR(VerificationFailed);
FACTORLAB_ERROR(CapExceeded);
FACTORLAB_ERROR(UnsupportedParameters);
FACTORLAB_ERROR(SignParityMismatch);
FACTORLAB_ERROR(NotNormalizing);
FACTORLAB_ERROR(NotSubgroup);
FACTORLAB_ERROR(ManifestMismatch);
FACTORLAB_ERROR(ConfigError);

#undef FACTORLAB_ERROR

}  // namespace factorlab
