#pragma once

#include <stdexcept>
#include <string>

namespace rmtw {

// Bad arguments or violated preconditions.
struct invalid_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An iterative method failed to converge or lost accuracy.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A result failed its built-in refinement or consistency check.
struct accuracy_error : numerical_error {
  using numerical_error::numerical_error;
};

// Root bracket without a sign change.
struct bracketing_error : invalid_input_error {
  using invalid_input_error::invalid_input_error;
};

// Contour or quadrature configuration violates its constraints.
struct config_error : invalid_input_error {
  using invalid_input_error::invalid_input_error;
};

// Coincident rates / eigenvalues where distinctness is required.
struct degeneracy_error : invalid_input_error {
  using invalid_input_error::invalid_input_error;
};

// Malformed or wrong-version file.
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rmtw
