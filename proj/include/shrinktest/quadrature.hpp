#pragma once

#include <cmath>
#include <queue>
#include <span>
#include <vector>

#include "shrinktest/errors.hpp"

namespace shrinktest {

struct QuadratureSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = true;

  // Throws numeric_error carrying the achieved relative tolerance.
  const QuadratureResult& or_throw(const char* what) const {
    if (!converged) {
      double denom = std::max(std::abs(value), 1e-300);
      throw numeric_error(what, error / denom);
    }
    return *this;
  }
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (positive half).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(F&& f, double a, double b, double& value, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kGk15Nodes[i]);
    fv[14 - i] = f(c + h * kGk15Nodes[i]);
  }
  fv[7] = f(c);
  double kron = kGk15Weights[7] * fv[7];
  double gauss = kGauss7Weights[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kron += kGk15Weights[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * (fv[i] + fv[14 - i]);
  }
  value = kron * h;
  error = std::abs((kron - gauss) * h);
}

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod over a chain of segments [pts[0], pts[1], ...,
// pts.back()]; worst segment is bisected until the summed error estimate
// meets max(abs_tol, rel_tol * |value|) or the subdivision budget runs out.
template <class F>
QuadratureResult integrate_segments(F&& f, std::span<const double> pts,
                                    const QuadratureSettings& s = {}) {
  QuadratureResult out;
  if (pts.size() < 2) return out;
  std::priority_queue<detail::Segment> heap;
  double total = 0.0, toterr = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    detail::Segment seg{pts[i], pts[i + 1], 0.0, 0.0};
    detail::gk15_panel(f, seg.a, seg.b, seg.value, seg.error);
    total += seg.value;
    toterr += seg.error;
    heap.push(seg);
  }
  int n = 0;
  while (toterr > std::max(s.abs_tol, s.rel_tol * std::abs(total)) && n < s.max_subdivisions &&
         !heap.empty()) {
    detail::Segment worst = heap.top();
    heap.pop();
    total -= worst.value;
    toterr -= worst.error;
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by rounding
      total += worst.value;
      toterr += worst.error;
      break;
    }
    detail::Segment left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
    detail::gk15_panel(f, left.a, left.b, left.value, left.error);
    detail::gk15_panel(f, right.a, right.b, right.value, right.error);
    total += left.value + right.value;
    toterr += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  out.value = total;
  out.error = toterr;
  out.subdivisions = n;
  out.converged = toterr <= std::max(s.abs_tol, s.rel_tol * std::abs(total));
  return out;
}

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureSettings& s = {}) {
  const double pts[2] = {a, b};
  return integrate_segments(f, pts, s);
}

}  // namespace shrinktest
