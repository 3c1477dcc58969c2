#pragma once

// Adaptive Gauss-Legendre quadrature on 15-point panels with interval
// bisection. Internal plumbing: the closed forms fall back to it when their
// series representations lose precision. Nodes and weights are computed once
// at first use by Newton iteration on the Legendre recurrence, which
// reproduces the tabulated values to full double precision without embedding
// 17-digit constants.

#include <cmath>
#include <numbers>

namespace obf::quadrature {

struct Gl15Rule {
  double node[15];
  double weight[15];
};

inline const Gl15Rule& gl15() {
  static const Gl15Rule rule = [] {
    Gl15Rule r{};
    constexpr int n = 15;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p1 = 1.0;
        double p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) < 1e-15) break;
      }
      r.node[i] = -z;
      r.node[n - 1 - i] = z;
      const double w = 2.0 / ((1.0 - z * z) * pp * pp);
      r.weight[i] = w;
      r.weight[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

template <class F>
double panel(F&& f, double a, double b) {
  const Gl15Rule& r = gl15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 15; ++i) acc += r.weight[i] * f(mid + half * r.node[i]);
  return acc * half;
}

namespace detail {

template <class F>
double integrate_rec(F&& f, double a, double b, double whole, double eps_abs,
                     double eps_rel, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid);
  const double right = panel(f, mid, b);
  const double refined = left + right;
  const double err = std::abs(refined - whole);
  if (depth <= 0 || err <= eps_abs || err <= eps_rel * std::abs(refined)) {
    return refined;
  }
  return integrate_rec(f, a, mid, left, 0.5 * eps_abs, eps_rel, depth - 1) +
         integrate_rec(f, mid, b, right, 0.5 * eps_abs, eps_rel, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double eps_abs, double eps_rel,
                 int max_depth = 40) {
  if (a == b) return 0.0;
  return detail::integrate_rec(f, a, b, panel(f, a, b), eps_abs, eps_rel, max_depth);
}

}  // namespace obf::quadrature
