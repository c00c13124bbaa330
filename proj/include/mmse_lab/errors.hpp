#pragma once

#include <stdexcept>
#include <string>

namespace mmse_lab {

// Invalid arguments: malformed distributions, out-of-range parameters,
// violated preconditions. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not reach its requested tolerance, or a
// verification step contradicted a proven inequality. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_estimate = 0.0,
                 double error_estimate = 0.0)
      : std::runtime_error(what), best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const { return best_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace mmse_lab
