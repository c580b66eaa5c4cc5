#pragma once

#include <stdexcept>
#include <string>

namespace ragan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace ragan
