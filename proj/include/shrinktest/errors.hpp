#pragma once

#include <stdexcept>
#include <string>

namespace shrinktest {

// Error hierarchy shared by the whole library. The CLI maps these onto
// exit codes: invalid_argument_error -> 1, numeric_error -> 2.

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_argument_error : public error {
 public:
  using error::error;
};

// A quadrature or root-finding routine failed to reach its tolerance.
class numeric_error : public error {
 public:
  numeric_error(const std::string& what, double achieved_tol)
      : error(what + " (achieved tolerance " + std::to_string(achieved_tol) + ")"),
        achieved_tol_(achieved_tol) {}
  explicit numeric_error(const std::string& what) : error(what), achieved_tol_(0) {}

  double achieved_tolerance() const { return achieved_tol_; }

 private:
  double achieved_tol_;
};

// The Bayes Oracle threshold formula is degenerate for these parameters.
class degenerate_regime_error : public invalid_argument_error {
 public:
  using invalid_argument_error::invalid_argument_error;
};

// A bisection target level is not bracketed by the statistic's range.
class no_crossing_error : public invalid_argument_error {
 public:
  using invalid_argument_error::invalid_argument_error;
};

class missing_limit_error : public invalid_argument_error {
 public:
  using invalid_argument_error::invalid_argument_error;
};

class missing_parameter_error : public invalid_argument_error {
 public:
  using invalid_argument_error::invalid_argument_error;
};

class degenerate_posterior_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

}  // namespace shrinktest
