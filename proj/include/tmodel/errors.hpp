#pragma once

#include <stdexcept>
#include <string>

namespace tmodel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RingMismatch : public Error {
 public:
  explicit RingMismatch(const std::string& what) : Error("ring mismatch: " + what) {}
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& what) : Error("shape mismatch: " + what) {}
};

class ContainmentViolation : public Error {
 public:
  explicit ContainmentViolation(const std::string& what)
      : Error("containment violation: " + what) {}
};

class InvalidMorphism : public Error {
 public:
  explicit InvalidMorphism(const std::string& what) : Error("invalid morphism: " + what) {}
};

class PreconditionViolated : public Error {
 public:
  explicit PreconditionViolated(const std::string& what)
      : Error("precondition violated: " + what) {}
};

class ExactnessViolation : public Error {
 public:
  explicit ExactnessViolation(const std::string& what)
      : Error("exactness violation: " + what) {}
};

class WindowViolation : public Error {
 public:
  explicit WindowViolation(const std::string& what) : Error("window violation: " + what) {}
};

class IndexOverflow : public Error {
 public:
  explicit IndexOverflow(const std::string& what) : Error("index overflow: " + what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("validation error: " + what) {}
};

class UnknownCommand : public Error {
 public:
  explicit UnknownCommand(const std::string& what) : Error("unknown command: " + what) {}
};

class MissingArgument : public Error {
 public:
  explicit MissingArgument(const std::string& what) : Error("missing argument: " + what) {}
};

}  // namespace tmodel
