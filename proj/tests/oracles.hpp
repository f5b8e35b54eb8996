/**
 * Copyright 2026 The specstop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

// Reference computations used only by the tests. They are written
// independently of the library (different algorithms, x-space instead of
// angle-space quadrature) so that agreement is evidence, not tautology.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Tolerates
/// integrable endpoint singularities; the integrand is never evaluated at
/// the endpoints themselves.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, int levels = 8) {
  const double half = 0.5 * (b - a);
  constexpr double kTMax = 4.0;
  // Node pair +-t: abscissae b - 2 half e and a + 2 half e with e = (1 - tanh u) / 2.
  auto term = [&](double t) {
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) / (cu * cu);
    const double e = 1.0 / (std::exp(2.0 * u) + 1.0);
    const double d = 2.0 * half * e;
    if (d <= 0.0) return 0.0;
    return w * (f(b - d) + (t > 0.0 ? f(a + d) : 0.0));
  };
  double h = 1.0;
  double sum = 0.0;
  for (double t = 0.0; t <= kTMax; t += h) sum += term(t);
  for (int level = 1; level <= levels; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTMax; t += 2.0 * h) sum += term(t);
  }
  return half * h * sum;
}

inline double mp_density(double x, double a, double b) {
  if (x <= a || x >= b) return 0.0;
  const double d = std::sqrt(b) - std::sqrt(a);
  return 2.0 * std::sqrt((b - x) * (x - a)) / (std::numbers::pi * d * d * x);
}

/// Roots of x^3 + p2 x^2 + p1 x + p0 with three real roots (trigonometric
/// method), ascending.
inline std::vector<double> real_cubic_roots(double p2, double p1, double p0) {
  const double q = (3.0 * p1 - p2 * p2) / 9.0;
  const double r = (9.0 * p2 * p1 - 27.0 * p0 - 2.0 * p2 * p2 * p2) / 54.0;
  const double mq = std::max(-q, 0.0);
  const double rho = std::sqrt(mq * mq * mq);
  const double theta = std::acos(std::clamp(rho > 0.0 ? r / rho : 1.0, -1.0, 1.0));
  const double s = 2.0 * std::sqrt(mq);
  std::vector<double> out{s * std::cos(theta / 3.0) - p2 / 3.0,
                          s * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - p2 / 3.0,
                          s * std::cos((theta + 4.0 * std::numbers::pi) / 3.0) - p2 / 3.0};
  std::sort(out.begin(), out.end());
  return out;
}

/// Cyclic Jacobi eigenvalues of a symmetric row-major k x k matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t k) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * k + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = p + 1; q < k; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double tau = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t r = 0; r < k; ++r) {
          const double arp = at(r, p), arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < k; ++r) {
          const double apr = at(p, r), aqr = at(q, r);
          at(p, r) = c * apr - s * aqr;
          at(q, r) = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> ev(k);
  for (std::size_t i = 0; i < k; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m,
                      double fm, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, fa, m, fm, lm, flm, left, eps / 2.0, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, eps / 2.0, depth - 1);
}

}  // namespace detail

/// Plain adaptive Simpson in x.
inline double simpson_x(const std::function<double(double)>& f, double a, double b, double eps, int depth = 60) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return detail::simpson(f, a, fa, b, fb, m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, depth);
}

/// Integral of |f - level| over [lo, hi] in x-space: sign changes are
/// bracketed on a fine uniform grid, refined by bisection, and each piece
/// integrated by adaptive Simpson.
inline double abs_deviation(double a, double b, double lo, double hi, double level, double eps) {
  auto g = [&](double x) { return mp_density(x, a, b) - level; };
  constexpr int kGrid = 400;
  std::vector<double> cuts{lo};
  double prev_x = lo;
  double prev = g(lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = lo + (hi - lo) * i / kGrid;
    const double gx = g(x);
    if ((prev > 0.0) != (gx > 0.0) && prev != 0.0 && gx != 0.0) {
      double l = prev_x, r = x, gl = prev;
      for (int it = 0; it < 200 && r - l > 1e-16 * std::max(1.0, std::abs(r)); ++it) {
        const double m = 0.5 * (l + r);
        const double gm = g(m);
        if ((gm > 0.0) == (gl > 0.0)) {
          l = m;
          gl = gm;
        } else {
          r = m;
        }
      }
      cuts.push_back(0.5 * (l + r));
    }
    prev_x = x;
    prev = gx;
  }
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += std::abs(simpson_x(g, cuts[k], cuts[k + 1], eps / static_cast<double>(cuts.size())));
  }
  return total;
}

struct SHat {
  double value = 0.0;
  std::size_t head = 0;
  std::size_t tail = 0;
  std::size_t bulk = 0;
};

/// Practical statistic from scratch: gap-based spike removal with the
/// overwrite loops, equal-count bins, x-space quadrature.
inline SHat s_hat(std::vector<double> v, double alpha = 7.0, double eps = 1e-11) {
  std::sort(v.begin(), v.end(), std::greater<>());
  const std::size_t n = v.size();
  double mean_gap = (v.front() - v.back()) / static_cast<double>(n - 1);
  const double r = alpha * mean_gap;
  SHat out;
  for (std::size_t i = 1; 2 * i < n; ++i)
    if (v[i - 1] - v[i] > r) out.head = i;
  for (std::size_t i = n - 1; 2 * i > n; --i)
    if (v[i - 1] - v[i] > r) out.tail = n - i;
  std::vector<double> g(v.begin() + static_cast<std::ptrdiff_t>(out.head),
                        v.end() - static_cast<std::ptrdiff_t>(out.tail));
  const std::size_t m = g.size();
  out.bulk = m;
  std::size_t cbrt = static_cast<std::size_t>(std::floor(std::cbrt(static_cast<double>(m)) + 1e-9));
  while (cbrt * cbrt * cbrt > m) --cbrt;
  const std::size_t bins = 2 * cbrt;
  const std::size_t h = m / bins;
  const double top = g.front(), bottom = g.back();
  auto gamma = [&](std::size_t i) { return g[i - 1]; };
  for (std::size_t i = 1; i <= bins; ++i) {
    const std::size_t ia = (i - 1) * h + 1;
    const std::size_t ib = i < bins ? i * h + 1 : m;
    const double hi = gamma(ia), lo = gamma(ib);
    const double mass = static_cast<double>(ib - ia) / static_cast<double>(m);
    if (!(hi > lo)) {
      out.value += mass;
      continue;
    }
    out.value += abs_deviation(bottom, top, lo, hi, mass / (hi - lo), eps);
  }
  return out;
}

}  // namespace oracle
