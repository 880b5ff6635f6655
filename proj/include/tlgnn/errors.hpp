#pragma once

#include <stdexcept>
#include <string>

namespace tlgnn {

// Malformed or inconsistent input data (dataset files, checkpoints, graph JSON).
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration or argument combination.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An instance exceeds the size budget of an exact/brute-force routine.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rejection-sampling generator ran out of attempts.
struct GenerationBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss or gradient.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tlgnn
