#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ams {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A time step produced a non-finite state.
class IntegrationError : public Error {
public:
  explicit IntegrationError(std::size_t time_index)
      : Error("non-finite state produced at time index " + std::to_string(time_index)),
        time_index_(time_index) {}

  std::size_t time_index() const noexcept { return time_index_; }

private:
  std::size_t time_index_;
};

// Bad names, parameters, grids or schedules.
class ConfigError : public Error {
public:
  using Error::Error;
};

// The splitting loop hit AmsConfig::max_iterations.
class IterationGuardError : public Error {
public:
  using Error::Error;
};

// A caller broke a documented precondition (e.g. asked for a crossing that does not exist).
class LogicError : public Error {
public:
  using Error::Error;
};

}  // namespace ams
