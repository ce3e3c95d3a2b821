#include "blaschke/error.hpp"

namespace blaschke {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateClustering: return "DegenerateClustering";
    case ErrorKind::FiberCollision: return "FiberCollision";
    case ErrorKind::StepFloorReached: return "StepFloorReached";
    case ErrorKind::LoopConstructionFailed: return "LoopConstructionFailed";
    case ErrorKind::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorKind::GroupTooLarge: return "GroupTooLarge";
    case ErrorKind::NonCommutative: return "NonCommutative";
    case ErrorKind::DegenerateGenericElement: return "DegenerateGenericElement";
    case ErrorKind::PathBlocked: return "PathBlocked";
  }
  return "Unknown";
}

std::string Error::diagnostic() const {
  return module_ + "/" + std::string(to_string(kind_)) + ": " + what();
}

}  // namespace blaschke
