#pragma once

#include <stdexcept>
#include <string>

namespace whpath {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a total function (non-adjacent cells,
// blocked vertex, speed count out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A queue or action broke one of the model constraints. `equation()` is the
// constraint number (2..6) of the problem formulation.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(int equation, const std::string& what)
      : Error("constraint (" + std::to_string(equation) + ") violated: " + what),
        equation_(equation) {}
  int equation() const noexcept { return equation_; }

 private:
  int equation_;
};

// Two robots hold the same cell.
class CollisionError : public Error {
 public:
  CollisionError(int robot_a, int robot_b, const std::string& what)
      : Error(what), robot_a_(robot_a), robot_b_(robot_b) {}
  int robot_a() const noexcept { return robot_a_; }
  int robot_b() const noexcept { return robot_b_; }

 private:
  int robot_a_;
  int robot_b_;
};

class UnreachableError : public Error {
 public:
  using Error::Error;
};

// Plan and preserved queue disagree on the committed prefix.
class DesyncError : public Error {
 public:
  DesyncError(int robot, const std::string& what) : Error(what), robot_(robot) {}
  int robot() const noexcept { return robot_; }

 private:
  int robot_;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace whpath
