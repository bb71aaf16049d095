#pragma once

#include <stdexcept>
#include <string>

namespace epx
{

// Failure categories. The CLI maps each one onto a distinct exit code.

class DegenerateFamily : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// An eigensolve or continuation step came too close to an exceptional point.
class NearDefective : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class EpTooClose : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace epx
