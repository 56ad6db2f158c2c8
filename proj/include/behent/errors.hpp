#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace behent {

/// Base class for every fault raised by the engine and its harness.
class Fault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A raw command arrived out of order or carried a non-finite value.
class StreamIntegrityError : public Fault {
 public:
  using Fault::Fault;
};

class ProfileError : public Fault {
 public:
  using Fault::Fault;
};

/// Not enough baseline data to build a driver profile.
class BaselineError : public Fault {
 public:
  using Fault::Fault;
};

class ConfigError : public Fault {
 public:
  using Fault::Fault;
};

class SimulationError : public Fault {
 public:
  using Fault::Fault;
};

/// Malformed record in an input file; carries the 1-based line number.
class FormatError : public Fault {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Fault("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace behent
