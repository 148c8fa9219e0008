#pragma once

#include <stdexcept>
#include <string>

namespace sknet {

// Invalid arguments, malformed files, contract violations at the call site.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Principal-branch domain violations (dist(Lambda, I) >= 1 and friends).
struct BranchError : std::domain_error {
  using std::domain_error::domain_error;
};

// Enumeration would exceed the desk-scale node budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A proven bound failed at runtime; indicates a numerics bug, not bad input.
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A synthesis level had no usable net shell to draw from.
struct SynthesisGapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sknet
