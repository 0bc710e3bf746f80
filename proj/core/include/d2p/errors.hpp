#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace d2p {

// Base class of everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input that could not be decoded at all.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line)
      : Error(std::move(message) + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  explicit ParseError(std::string message) : Error(std::move(message)), line_(-1) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Decoded fine but violates a documented invariant.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class EmptyBatch : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class StepRange : public Error {
 public:
  using Error::Error;
};

class StepOrder : public Error {
 public:
  using Error::Error;
};

class DivergedError : public Error {
 public:
  DivergedError(std::string message, std::int64_t step)
      : Error(std::move(message) + " at step " + std::to_string(step)), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

class MissingObservation : public Error {
 public:
  using Error::Error;
};

class BehindCamera : public Error {
 public:
  using Error::Error;
};

class NoIntersection : public Error {
 public:
  using Error::Error;
};

class IntersectionBehindCamera : public Error {
 public:
  using Error::Error;
};

class UnreachableTarget : public Error {
 public:
  UnreachableTarget(std::string message, double best_residual)
      : Error(std::move(message) + " (best residual " + std::to_string(best_residual) + " m)"),
        best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

class PlanInfeasible : public Error {
 public:
  PlanInfeasible(std::string message, int step_index)
      : Error(std::move(message) + " (plan step " + std::to_string(step_index) + ")"),
        step_index_(step_index) {}
  int step_index() const { return step_index_; }

 private:
  int step_index_;
};

class SceneError : public Error {
 public:
  using Error::Error;
};

class PlanObjectMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace d2p
