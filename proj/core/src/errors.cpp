#include "fedforge/errors.hpp"

namespace fedforge {

EngineError::EngineError(int round, int phase, const std::string& what)
    : Error("round " + std::to_string(round) + ", phase " +
            std::to_string(phase) + ": " + what),
      round_(round),
      phase_(phase) {}

}  // namespace fedforge
