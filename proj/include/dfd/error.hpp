#pragma once

#include <stdexcept>
#include <string>

namespace dfd {

/// Base of every error raised by the toolkit. `kind()` is a stable
/// machine-readable tag used in CLI diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define DFD_DEFINE_ERROR(Name)                                               \
  class Name : public Error {                                                \
  public:                                                                    \
    explicit Name(const std::string& what) : Error(#Name, what) {}           \
  }

DFD_DEFINE_ERROR(ParseError);
DFD_DEFINE_ERROR(InvariantError);
DFD_DEFINE_ERROR(DuplicateName);
DFD_DEFINE_ERROR(DuplicateId);
DFD_DEFINE_ERROR(NotFound);
DFD_DEFINE_ERROR(UnknownMaterial);
DFD_DEFINE_ERROR(BrokenHierarchy);
DFD_DEFINE_ERROR(DomainError);
DFD_DEFINE_ERROR(MissingData);
DFD_DEFINE_ERROR(OutOfBounds);
DFD_DEFINE_ERROR(MissingMaterialData);
DFD_DEFINE_ERROR(NegativeFlux);
DFD_DEFINE_ERROR(EmptyInput);
DFD_DEFINE_ERROR(ConfigError);
DFD_DEFINE_ERROR(DecodeError);
DFD_DEFINE_ERROR(InitializationError);
DFD_DEFINE_ERROR(IoError);

#undef DFD_DEFINE_ERROR

}  // namespace dfd
