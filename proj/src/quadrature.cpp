#include "yamabe3h/quadrature.hpp"

#include <algorithm>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "yamabe3h/errors.hpp"

namespace yamabe3h {

namespace {

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece evaluate(const std::function<double(double)>& f, double a, double b) {
  double error = 0.0;
  // max_depth = 0: a single 15-point rule with its Gauss-7 error estimate.
  // That estimate is for the rule mapped onto [-1, 1], hence the rescale.
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &error);
  return {a, b, value, 0.5 * (b - a) * error};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    std::size_t max_intervals) {
  std::priority_queue<Piece> queue;
  queue.push(evaluate(f, a, b));
  double total_error = queue.top().error;
  while (total_error > abs_tol) {
    if (queue.size() >= max_intervals) {
      throw QuadratureError("adaptive quadrature did not reach tolerance",
                            total_error);
    }
    const Piece worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("adaptive quadrature interval underflow", total_error);
    }
    queue.pop();
    const Piece left = evaluate(f, worst.a, mid);
    const Piece right = evaluate(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Sum left to right so the result does not depend on heap order.
  std::vector<Piece> pieces;
  pieces.reserve(queue.size());
  while (!queue.empty()) {
    pieces.push_back(queue.top());
    queue.pop();
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& x, const Piece& y) { return x.a < y.a; });
  QuadratureResult out;
  out.intervals = pieces.size();
  for (const Piece& p : pieces) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

}  // namespace yamabe3h
