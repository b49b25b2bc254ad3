#pragma once

#include <cmath>
#include <cstddef>

namespace spindlelab {

// Adaptive Gauss-Kronrod 15(7) quadrature. Splits the worst interval until
// the summed error estimate drops below rel_tol * |integral| (with a small
// absolute floor), or the interval budget is exhausted.
namespace gk {

inline constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWeightsKronrod[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWeightsGauss[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

template <typename F>
Estimate rule(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = kWeightsKronrod[7] * fc;
  double gauss = kWeightsGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = half * kNodes[i];
    const double fs = f(mid - x) + f(mid + x);
    kronrod += kWeightsKronrod[i] * fs;
    if (i % 2 == 1) gauss += kWeightsGauss[i / 2] * fs;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

}  // namespace gk

template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 int max_depth = 48) {
  struct Seg {
    double a, b, value, error;
    int depth;
  };
  auto first = gk::rule(f, a, b);
  Seg stack[1024];
  int top = 0;
  stack[top++] = {a, b, first.value, first.error, 0};
  double total = first.value;
  double total_err = first.error;
  const double abs_floor = 1e-300;

  while (top > 0 && total_err > std::max(rel_tol * std::abs(total), abs_floor)) {
    // pop the segment with the largest error
    int worst = 0;
    for (int i = 1; i < top; ++i) {
      if (stack[i].error > stack[worst].error) worst = i;
    }
    const Seg seg = stack[worst];
    stack[worst] = stack[--top];
    if (seg.depth >= max_depth || top >= 1022) {
      break;  // refinement exhausted; keep the current estimate
    }
    const double mid = 0.5 * (seg.a + seg.b);
    auto left = gk::rule(f, seg.a, mid);
    auto right = gk::rule(f, mid, seg.b);
    total += left.value + right.value - seg.value;
    total_err += left.error + right.error - seg.error;
    stack[top++] = {seg.a, mid, left.value, left.error, seg.depth + 1};
    stack[top++] = {mid, seg.b, right.value, right.error, seg.depth + 1};
  }
  return total;
}

}  // namespace spindlelab
