#pragma once

#include <stdexcept>
#include <string>

namespace consvm {

// Input text could not be parsed; carries the 1-based line number.
class parse_error : public std::runtime_error {
 public:
  parse_error(long line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// A caller broke an API contract (dimension mismatch, double augmentation).
class contract_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Gram matrix numerically singular and no ridge was supplied.
class singular_gram_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or a failed factorization inside numeric code.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An experiment precondition (e.g. reference model convergence) failed.
class setup_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad CLI flag / config key or value; message names the offending key.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace consvm
