#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rotnum {

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an integration produces a non-finite state or cannot meet its
/// step-size contract. `index()` is the lattice step that failed, or -1.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, std::int64_t index = -1)
      : std::runtime_error(what), index_(index) {}

  std::int64_t index() const noexcept { return index_; }

 private:
  std::int64_t index_;
};

}  // namespace rotnum
