#pragma once

#include <stdexcept>
#include <string>

namespace glmmc {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingDesign : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularQ : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnboundedAprime2 : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct QuadratureDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonFiniteGradient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConditionalSamplerFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptySamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InsufficientGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConfigParse : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace glmmc
