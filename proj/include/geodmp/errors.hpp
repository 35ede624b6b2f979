#pragma once

#include <stdexcept>
#include <string>

namespace geodmp {

/// Base class for all library errors. what() starts with the error name
/// so CLI output stays machine-parseable.
class Error : public std::runtime_error {
 public:
  Error(const std::string& name, const std::string& msg)
      : std::runtime_error(name + ": " + msg), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class NoSamplesError : public Error {
 public:
  explicit NoSamplesError(const std::string& msg) : Error("NoSamples", msg) {}
};

class EmptySequenceError : public Error {
 public:
  explicit EmptySequenceError(const std::string& msg) : Error("EmptySequence", msg) {}
};

class DegenerateDemoError : public Error {
 public:
  explicit DegenerateDemoError(const std::string& msg) : Error("DegenerateDemo", msg) {}
};

class DegenerateGoalError : public Error {
 public:
  explicit DegenerateGoalError(const std::string& msg) : Error("DegenerateGoal", msg) {}
};

class DegenerateProjectionError : public Error {
 public:
  explicit DegenerateProjectionError(const std::string& msg)
      : Error("DegenerateProjection", msg) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& msg) : Error("InsufficientData", msg) {}
};

class NoNeighborsError : public Error {
 public:
  explicit NoNeighborsError(const std::string& msg) : Error("NoNeighbors", msg) {}
};

class UnsupportedRegionError : public Error {
 public:
  explicit UnsupportedRegionError(const std::string& msg) : Error("UnsupportedRegion", msg) {}
};

class InvalidSpeedError : public Error {
 public:
  explicit InvalidSpeedError(const std::string& msg) : Error("InvalidSpeed", msg) {}
};

class LengthMismatchError : public Error {
 public:
  explicit LengthMismatchError(const std::string& msg) : Error("LengthMismatch", msg) {}
};

class InvalidParamsError : public Error {
 public:
  explicit InvalidParamsError(const std::string& msg) : Error("InvalidParams", msg) {}
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& reason)
      : Error("ParseError",
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  reason),
        line(line),
        column(column) {}
  int line;
  int column;
};

class NonMonotoneTimeError : public Error {
 public:
  explicit NonMonotoneTimeError(const std::string& msg) : Error("NonMonotoneTime", msg) {}
};

class BadQuaternionNormError : public Error {
 public:
  BadQuaternionNormError(int row, double norm)
      : Error("BadQuaternionNorm",
              "row " + std::to_string(row) + " has norm " + std::to_string(norm)),
        row(row) {}
  int row;
};

}  // namespace geodmp
