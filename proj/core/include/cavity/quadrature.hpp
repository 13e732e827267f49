#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cavity/errors.hpp"

namespace cavity {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]; cached for n <= 128.
const QuadratureRule& gauss_legendre(int n);

// Gauss-Hermite for the weight exp(-x^2), with the weight folded in:
// sum_k weights[k] g(nodes[k]) ~ integral of g over the real line for
// g = exp(-x^2) * polynomial. Nodes from the Golub-Welsch eigenproblem.
QuadratureRule gauss_hermite(int n);

// Composite Gauss-Legendre: `panels` equal panels of `order` points on [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

template <class T>
struct IntegralResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

template <class F>
auto gl_panel(F& f, double a, double b, int order) {
  const auto& r = gauss_legendre(order);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  using T = decltype(f(a));
  T s{};
  for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * f(mid + half * r.nodes[k]);
  return T(s * half);
}

}  // namespace detail

// Adaptive bisection with a 20-point Gauss-Legendre panel, error from the
// panel/halves difference. Throws NumericError when the absolute tolerance
// cannot be met within max_depth levels.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 40)
    -> IntegralResult<decltype(f(a))> {
  using T = decltype(f(a));
  constexpr int order = 20;
  IntegralResult<T> out;
  struct Seg {
    double a, b;
    T whole;
    int depth;
  };
  std::vector<Seg> stack;
  stack.push_back({a, b, detail::gl_panel(f, a, b, order), 0});
  out.evaluations += order;
  const double width = std::abs(b - a);
  double worst_unresolved = 0.0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    const double m = 0.5 * (s.a + s.b);
    T left = detail::gl_panel(f, s.a, m, order);
    T right = detail::gl_panel(f, m, s.b, order);
    out.evaluations += 2 * order;
    const double err = std::abs(left + right - s.whole);
    const double local_tol = abs_tol * std::max(std::abs(s.b - s.a) / width, 1e-3);
    if (err <= local_tol || err <= 1e-15 * std::abs(left + right)) {
      out.value += left + right;
      out.error += err;
    } else if (s.depth >= max_depth) {
      out.value += left + right;
      out.error += err;
      worst_unresolved = std::max(worst_unresolved, err);
    } else {
      stack.push_back({s.a, m, left, s.depth + 1});
      stack.push_back({m, s.b, right, s.depth + 1});
    }
  }
  if (worst_unresolved > 0.0 && out.error > abs_tol) {
    throw NumericError("adaptive quadrature did not converge: achieved error " +
                       std::to_string(out.error) + " > tolerance " + std::to_string(abs_tol));
  }
  return out;
}

}  // namespace cavity
