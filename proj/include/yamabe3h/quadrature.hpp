#pragma once

#include <cstddef>
#include <functional>

namespace yamabe3h {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: bisect the interval with
// the largest error estimate until the summed estimate is <= abs_tol. Throws
// QuadratureError (carrying the achieved error) past max_intervals.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    std::size_t max_intervals = 4096);

}  // namespace yamabe3h
