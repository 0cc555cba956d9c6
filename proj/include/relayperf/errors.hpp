#pragma once

#include <stdexcept>
#include <string>

namespace relayperf {

/// Invalid input parameter (out-of-range shape, negative SNR, bad order, ...).
class domain_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Evaluation requested at a pole of a gamma function or rational function.
class pole_error : public domain_error {
  public:
    using domain_error::domain_error;
};

/// Parameter combination outside what an evaluator supports.
class unsupported_error : public domain_error {
  public:
    using domain_error::domain_error;
};

/// Base of all failures that happen while computing with valid inputs.
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class overflow_error : public numerical_error {
  public:
    using numerical_error::numerical_error;
};

/// An iterative method stopped before reaching its tolerance.
/// Carries the last iterate and the last change so callers can report them.
class convergence_error : public numerical_error {
  public:
    convergence_error(const std::string& what, double last_value, double last_delta)
        : numerical_error(what), last_value_(last_value), last_delta_(last_delta) {}

    double last_value() const noexcept { return last_value_; }
    double last_delta() const noexcept { return last_delta_; }

  private:
    double last_value_;
    double last_delta_;
};

/// Two routes that must agree (closed form vs oracle, range checks) do not.
class consistency_error : public numerical_error {
  public:
    using numerical_error::numerical_error;
};

/// Padé approximant unusable: right-half-plane or repeated poles, singular system.
class stability_error : public numerical_error {
  public:
    using numerical_error::numerical_error;
};

}  // namespace relayperf
