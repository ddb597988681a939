#pragma once

#include <stdexcept>
#include <string>

namespace evanesim {

// Raised when a computation cannot meet its accuracy contract (quadrature
// window too small, vanishing denominator, aliasing guard tripped).
// Input/contract violations use std::domain_error / std::invalid_argument.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evanesim
