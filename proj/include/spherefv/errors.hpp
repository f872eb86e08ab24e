#pragma once

#include <stdexcept>
#include <string>

namespace spherefv {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleSingularity : public Error {
 public:
  using Error::Error;
};

class InvalidRange : public Error {
 public:
  using Error::Error;
};

class InvalidResolution : public Error {
 public:
  using Error::Error;
};

class UnknownCell : public Error {
 public:
  using Error::Error;
};

class SpeedTooSmall : public Error {
 public:
  using Error::Error;
};

class CflViolation : public Error {
 public:
  using Error::Error;
};

class MeshMismatch : public Error {
 public:
  using Error::Error;
};

class ConvexityViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace spherefv
