#pragma once

#include <stdexcept>
#include <string>

namespace formflow {

struct NotTamedError : std::runtime_error {
  explicit NotTamedError(const std::string& m) : std::runtime_error(m) {}
};

struct NotCompatibleError : std::runtime_error {
  explicit NotCompatibleError(const std::string& m) : std::runtime_error(m) {}
};

struct RetractionDivergedError : std::runtime_error {
  explicit RetractionDivergedError(const std::string& m) : std::runtime_error(m) {}
};

struct NondegeneracyLostError : std::runtime_error {
  explicit NondegeneracyLostError(const std::string& m) : std::runtime_error(m) {}
};

struct BlowupDetectedError : std::runtime_error {
  explicit BlowupDetectedError(const std::string& m) : std::runtime_error(m) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace formflow
