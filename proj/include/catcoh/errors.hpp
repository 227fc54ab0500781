#pragma once

#include <stdexcept>
#include <string>

namespace catcoh {

// Invalid physical parameters or states that violate their invariants.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Unreadable files, malformed JSON/CSV.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace catcoh
