#pragma once

#include <stdexcept>
#include <string>

namespace coalg {

// A referenced parameter or placeholder symbol could not be resolved.
struct UnresolvedSymbol : std::runtime_error {
  explicit UnresolvedSymbol(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation left the admissible domain (log/sqrt of a non-positive value,
// division by zero, non-finite intermediate, singular metric, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-point / Newton iteration of an implicit step failed to converge.
struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

// generic_dimension(l, r) with l - r odd.
struct OddDimension : std::runtime_error {
  explicit OddDimension(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coalg
