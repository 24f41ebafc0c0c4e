#pragma once

#include <stdexcept>
#include <string>

namespace paro {

// Malformed user input: bad dimensions, invalid parameters, schema violations.
// The command line tool maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(std::string const& what) : std::invalid_argument(what) {}
};

// A numerical routine could not complete: solver breakdown, iteration blow-up,
// non-finite data mid-flight. The command line tool maps this to exit code 3.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(std::string const& what) : std::runtime_error(what) {}
};

inline void require(bool condition, std::string const& message) {
  if (!condition) throw InputError(message);
}

inline void require_solver(bool condition, std::string const& message) {
  if (!condition) throw SolverError(message);
}

}  // namespace paro
