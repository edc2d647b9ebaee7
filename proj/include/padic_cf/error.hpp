#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace padic_cf {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user-supplied data. The CLI maps every subclass to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidPrime : public InputError {
 public:
  explicit InvalidPrime(const std::string& value)
      : InputError("InvalidPrime: " + value + " is not a prime") {}
};

class InvalidInput : public InputError {
 public:
  explicit InvalidInput(const std::string& what) : InputError("InvalidInput: " + what) {}
};

class InvalidState : public InputError {
 public:
  explicit InvalidState(const std::string& what) : InputError("InvalidState: " + what) {}
};

class ReduciblePolynomial : public InputError {
 public:
  explicit ReduciblePolynomial(const std::string& what)
      : InputError("ReduciblePolynomial: " + what) {}
};

class NoRootInQp : public InputError {
 public:
  explicit NoRootInQp(const std::string& what) : InputError("NoRootInQp: " + what) {}
};

class AmbiguousSelector : public InputError {
 public:
  explicit AmbiguousSelector(const std::string& what)
      : InputError("AmbiguousSelector: " + what) {}
};

class ZeroInput : public InputError {
 public:
  ZeroInput() : InputError("ZeroInput: the map is undefined at 0") {}
};

class InvalidAlgorithm : public InputError {
 public:
  explicit InvalidAlgorithm(const std::string& what)
      : InputError("InvalidAlgorithm: " + what) {}
};

class MalformedExpansion : public Error {
 public:
  explicit MalformedExpansion(const std::string& what)
      : Error("MalformedExpansion: " + what) {}
};

/// An iteration ran past its step budget. `last_state` describes where it stopped.
class CapExceeded : public Error {
 public:
  CapExceeded(std::int64_t cap, std::string last_state)
      : Error("CapExceeded(" + std::to_string(cap) + "): last state " + last_state),
        cap_(cap),
        last_state_(std::move(last_state)) {}

  std::int64_t cap() const noexcept { return cap_; }
  const std::string& last_state() const noexcept { return last_state_; }

 private:
  std::int64_t cap_;
  std::string last_state_;
};

}  // namespace padic_cf
