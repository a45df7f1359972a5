#pragma once

#include <stdexcept>
#include <string>

namespace outval
{

/// Invalid or inconsistent configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file: CSV, JSON or run directory artifacts (exit code 2).
class IngestError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range or misaligned argument to a series or schedule operation.
class RangeError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace outval
