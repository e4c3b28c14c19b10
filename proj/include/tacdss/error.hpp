#pragma once

#include <stdexcept>
#include <string>

namespace tacdss {

// A crisp value lies outside its variable's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// MF or rule index that does not exist.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Invalid operator/tuner configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value that would break a model or dataset invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Empty datasets, dimension mismatches.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when training diverges (non-finite parameters or loss).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tacdss
