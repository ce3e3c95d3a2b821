#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blaschke {

enum class ErrorKind {
  InvalidInput,
  NoConvergence,
  DegenerateClustering,
  FiberCollision,
  StepFloorReached,
  LoopConstructionFailed,
  AmbiguousMatching,
  GroupTooLarge,
  NonCommutative,
  DegenerateGenericElement,
  PathBlocked,
};

std::string_view to_string(ErrorKind kind);

/// Typed failure carrying the module it came from, e.g. "tracking".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

  /// "module/Kind: message"
  std::string diagnostic() const;

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace blaschke
