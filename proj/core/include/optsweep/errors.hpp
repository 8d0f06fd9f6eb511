// SPDX-License-Identifier: Apache-2.0

#ifndef OPTSWEEP_ERRORS_HPP
#define OPTSWEEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optsweep {

/// Base class for all harness errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// pipeline parsing
class EmptyInput : public Error {
 public:
  using Error::Error;
};
class MalformedLine : public Error {
 public:
  MalformedLine(int line, const std::string& token)
      : Error("malformed pass identifier at line " + std::to_string(line) +
              ": '" + token + "'"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// compilation
class BuildFailure : public Error {
 public:
  using Error::Error;
};
class UnknownPrefix : public BuildFailure {
 public:
  using BuildFailure::BuildFailure;
};

// measurement
class CalibrationFailure : public Error {
 public:
  using Error::Error;
};
class RunCrash : public Error {
 public:
  using Error::Error;
};
class MalformedBinary : public Error {
 public:
  using Error::Error;
};
class MissingTextSection : public Error {
 public:
  using Error::Error;
};

// selection / reporting
class ZeroBaseline : public Error {
 public:
  using Error::Error;
};
class NoValidEntries : public Error {
 public:
  using Error::Error;
};
class IncompatibleRuns : public Error {
 public:
  using Error::Error;
};

// persistence
class StorageFull : public Error {
 public:
  using Error::Error;
};
class DuplicateRunId : public Error {
 public:
  using Error::Error;
};
class NotFound : public Error {
 public:
  using Error::Error;
};
class CorruptRecord : public Error {
 public:
  using Error::Error;
};
class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace optsweep

#endif  // OPTSWEEP_ERRORS_HPP
