// SPDX-License-Identifier: Apache-2.0
//
// Globally adaptive Gauss-Kronrod (10/21 point) quadrature for vector-valued
// integrands. All orders of the Laplace-exponent derivatives are integrated
// in one pass, and nested integrals carry their inner error estimates as
// extra (uncontrolled) components.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavnoma {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_depth = 40;        // bisection depth limit for a single interval
  int max_intervals = 2000;  // total subinterval budget
};

/// Value with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Reported when an integral cannot reach its tolerance within budget.
class QuadratureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

template <std::size_t N>
struct QuadResult {
  std::array<double, N> value{};
  std::array<double, N> error{};
  bool converged = true;
  int evaluations = 0;
};

namespace detail {

// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525690140, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss 10-point weights at the odd Kronrod abscissae (indices 1,3,5,7,9).
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <std::size_t N>
struct Panel {
  double a, b;
  int depth;
  std::array<double, N> value;
  std::array<double, N> error;
  double priority;
};

template <std::size_t N, class F>
void gk21(F& f, Panel<N>& p) {
  const double center = 0.5 * (p.a + p.b);
  const double half = 0.5 * (p.b - p.a);
  std::array<double, N> kron{};
  std::array<double, N> gauss{};
  auto add = [](std::array<double, N>& acc, const std::array<double, N>& v, double w) {
    for (std::size_t i = 0; i < N; ++i) acc[i] += w * v[i];
  };
  const std::array<double, N> fc = f(center);
  add(kron, fc, kWgk[10]);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const std::array<double, N> f1 = f(center - dx);
    const std::array<double, N> f2 = f(center + dx);
    add(kron, f1, kWgk[j]);
    add(kron, f2, kWgk[j]);
    if (j % 2 == 1) {
      add(gauss, f1, kWg[j / 2]);
      add(gauss, f2, kWg[j / 2]);
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    p.value[i] = kron[i] * half;
    p.error[i] = std::abs((kron[i] - gauss[i]) * half);
    if (!std::isfinite(p.value[i])) p.error[i] = std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

/// Integrates f over [a, b]. Only the first `controlled` components take
/// part in the convergence test; the rest are accumulated as-is.
template <std::size_t N, class F>
QuadResult<N> integrate(F&& f, double a, double b, const QuadratureSpec& spec,
                        std::size_t controlled = N) {
  using detail::Panel;
  QuadResult<N> out;
  if (!(b > a)) return out;
  controlled = std::min(controlled, N);

  auto tolerance = [&](const std::array<double, N>& total, std::size_t i) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(total[i]));
  };

  Panel<N> first{a, b, 0, {}, {}, 0.0};
  detail::gk21<N>(f, first);
  out.evaluations = 21;
  std::array<double, N> total = first.value;
  std::array<double, N> err = first.error;

  auto priority = [&](const Panel<N>& p) {
    double worst = 0.0;
    for (std::size_t i = 0; i < controlled; ++i) worst = std::max(worst, p.error[i] / tolerance(total, i));
    return worst;
  };
  auto done = [&]() {
    for (std::size_t i = 0; i < controlled; ++i)
      if (!(err[i] <= tolerance(total, i))) return false;
    return true;
  };

  auto cmp = [](const Panel<N>& x, const Panel<N>& y) { return x.priority < y.priority; };
  std::priority_queue<Panel<N>, std::vector<Panel<N>>, decltype(cmp)> heap(cmp);
  first.priority = priority(first);
  heap.push(first);
  int intervals = 1;
  std::vector<Panel<N>> frozen;

  while (!done() && !heap.empty()) {
    Panel<N> worst = heap.top();
    heap.pop();
    if (worst.depth >= spec.max_depth || intervals >= spec.max_intervals) {
      frozen.push_back(worst);
      if (intervals >= spec.max_intervals) break;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel<N> left{worst.a, mid, worst.depth + 1, {}, {}, 0.0};
    Panel<N> right{mid, worst.b, worst.depth + 1, {}, {}, 0.0};
    detail::gk21<N>(f, left);
    detail::gk21<N>(f, right);
    out.evaluations += 42;
    ++intervals;
    for (std::size_t i = 0; i < N; ++i) {
      total[i] += left.value[i] + right.value[i] - worst.value[i];
      err[i] += left.error[i] + right.error[i] - worst.error[i];
    }
    left.priority = priority(left);
    right.priority = priority(right);
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the panels to shed accumulated cancellation error.
  std::array<double, N> value{};
  std::array<double, N> error{};
  auto absorb = [&](const Panel<N>& p) {
    for (std::size_t i = 0; i < N; ++i) {
      value[i] += p.value[i];
      error[i] += p.error[i];
    }
  };
  while (!heap.empty()) {
    absorb(heap.top());
    heap.pop();
  }
  for (const auto& p : frozen) absorb(p);
  out.value = value;
  out.error = error;
  out.converged = true;
  for (std::size_t i = 0; i < controlled; ++i)
    if (!(error[i] <= tolerance(value, i))) out.converged = false;
  return out;
}

/// Integrates f over [a, inf) through x = a + scale * (u^-k - 1), u in (0, 1].
/// With k >= 1/(p-1) an x^-p tail maps to a bounded integrand at u -> 0.
template <std::size_t N, class F>
QuadResult<N> integrate_to_infinity(F&& f, double a, double scale, double k,
                                    const QuadratureSpec& spec, std::size_t controlled = N) {
  auto mapped = [&](double u) {
    std::array<double, N> v{};
    if (u <= 0.0) return v;
    const double uk = std::pow(u, -k);
    const double x = a + scale * (uk - 1.0);
    if (!std::isfinite(x)) return v;
    const double jac = scale * k * uk / u;
    v = f(x);
    for (auto& c : v) {
      c *= jac;
      if (!std::isfinite(c)) c = 0.0;
    }
    return v;
  };
  return integrate<N>(mapped, 0.0, 1.0, spec, controlled);
}

/// Scalar convenience wrapper.
template <class F>
Estimate integrate_scalar(F&& f, double a, double b, const QuadratureSpec& spec) {
  auto g = [&](double x) { return std::array<double, 1>{f(x)}; };
  const auto r = integrate<1>(g, a, b, spec);
  return {r.value[0], r.error[0]};
}

template <class F>
Estimate integrate_scalar_to_infinity(F&& f, double a, double scale, double k,
                                      const QuadratureSpec& spec) {
  auto g = [&](double x) { return std::array<double, 1>{f(x)}; };
  const auto r = integrate_to_infinity<1>(g, a, scale, k, spec);
  return {r.value[0], r.error[0]};
}

}  // namespace uavnoma
