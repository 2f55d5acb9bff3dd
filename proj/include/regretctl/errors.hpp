#pragma once

#include <stdexcept>
#include <string>

namespace regretctl {

// Shape/partition/causality violations: the inputs do not fit together.
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-supplied data: non-PSD costs, malformed configs, non-finite entries.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Factorization or solve broke down on well-formed input.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace regretctl
