#pragma once

#include <stdexcept>
#include <string>

namespace arfima {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct NonInvertible : Error { using Error::Error; };
struct DegenerateLevel : Error { using Error::Error; };
struct SingularGram : Error { using Error::Error; };
struct SingularHessian : Error { using Error::Error; };
struct BoundaryD : Error { using Error::Error; };
struct AllStartsFailed : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace arfima
