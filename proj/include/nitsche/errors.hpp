#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nitsche/types.hpp"

namespace nitsche {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshCorruption : public Error {
 public:
  using Error::Error;
};

/// The interface resolution condition (two crossings per cut element, at
/// most one per edge) does not hold on the listed elements.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(const std::string& what, std::vector<int> elements)
      : Error(what), elements_(std::move(elements)) {}
  const std::vector<int>& elements() const { return elements_; }

 private:
  std::vector<int> elements_;
};

class DegenerateCut : public Error {
 public:
  DegenerateCut(const std::string& what, int element, Side majority)
      : Error(what), element_(element), majority_(majority) {}
  int element() const { return element_; }
  Side majority() const { return majority_; }

 private:
  int element_;
  Side majority_;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, std::vector<double> best, int iterations, double residual)
      : Error(what), best_(std::move(best)), iterations_(iterations), residual_(residual) {}
  const std::vector<double>& best_iterate() const { return best_; }
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> best_;
  int iterations_;
  double residual_;
};

class IndefiniteDetected : public Error {
 public:
  using Error::Error;
};

class PatchFailure : public Error {
 public:
  PatchFailure(const std::string& what, Side side, int vertex)
      : Error(what), side_(side), vertex_(vertex) {}
  Side side() const { return side_; }
  int vertex() const { return vertex_; }

 private:
  Side side_;
  int vertex_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nitsche
