#pragma once

#include <cstddef>
#include <vector>

#include "shrinktest/errors.hpp"

namespace shrinktest {

// Clamped cubic spline on a uniform grid. End slopes are supplied by the
// caller, which keeps the interpolation O(h^4) up to the boundary.
class UniformCubicSpline {
 public:
  UniformCubicSpline() = default;

  UniformCubicSpline(double x0, double dx, std::vector<double> y, double slope_left,
                     double slope_right)
      : x0_(x0), dx_(dx), y_(std::move(y)) {
    const std::size_t n = y_.size();
    if (n < 3) throw invalid_argument_error("spline needs at least 3 points");
    // Solve for second derivatives m_i with clamped boundary conditions.
    std::vector<double> diag(n, 2.0), rhs(n), off(n, 1.0);
    const double h = dx_;
    rhs[0] = 6.0 / h * ((y_[1] - y_[0]) / h - slope_left);
    rhs[n - 1] = 6.0 / h * (slope_right - (y_[n - 1] - y_[n - 2]) / h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      diag[i] = 4.0;
      rhs[i] = 6.0 / (h * h) * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
    }
    // Thomas algorithm.
    m_.assign(n, 0.0);
    std::vector<double> cp(n, 0.0);
    cp[0] = off[0] / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      double denom = diag[i] - off[i] * cp[i - 1];
      cp[i] = off[i] / denom;
      rhs[i] = (rhs[i] - off[i] * rhs[i - 1]) / denom;
    }
    m_[n - 1] = rhs[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = rhs[i] - cp[i] * m_[i + 1];
  }

  bool empty() const { return y_.empty(); }
  double x_min() const { return x0_; }
  double x_max() const { return x0_ + dx_ * static_cast<double>(y_.size() - 1); }

  double operator()(double x) const {
    const std::size_t n = y_.size();
    double u = (x - x0_) / dx_;
    std::size_t i = 0;
    if (u > 0) i = static_cast<std::size_t>(u);
    if (i > n - 2) i = n - 2;
    double t = u - static_cast<double>(i);
    double s = 1.0 - t;
    double h2 = dx_ * dx_ / 6.0;
    return s * y_[i] + t * y_[i + 1] +
           h2 * (s * (s * s - 1.0) * m_[i] + t * (t * t - 1.0) * m_[i + 1]);
  }

 private:
  double x0_ = 0.0, dx_ = 1.0;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace shrinktest
