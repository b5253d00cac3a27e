#pragma once

#include <stdexcept>
#include <string>

namespace abuse {

// Argument errors use std::invalid_argument; everything else derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Bad or empty input data (dropped rows, empty datasets, missing inputs).
class DataError : public Error {
 public:
  using Error::Error;
};

// Unreadable or invalid configuration, lexicon, rules, or lookup tables.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed binary files (embeddings, checkpoints).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Operation called on an object in the wrong state (stale cache, unfitted stats).
class StateError : public Error {
 public:
  using Error::Error;
};

// A statistic is undefined for the given input (empty group, zero variance).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, const std::string& what)
      : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace abuse
