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


#include "specstop/mp_law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specstop/error.hpp"
#include "specstop/quadrature.hpp"

namespace specstop {

namespace {

constexpr double kPi = std::numbers::pi;

double edge_normalizer(double a, double b) {
  const double d = std::sqrt(b) - std::sqrt(a);
  return kPi * d * d / 2.0;
}

}  // namespace

MPParams MPParams::from_shape(double c, double sigma2) {
  if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "MP shape c must lie in (0, 1]");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::kInvalidArgument, "MP scale sigma^2 must be positive");
  }
  const double rc = std::sqrt(c);
  MPParams p;
  p.c = c;
  p.sigma2 = sigma2;
  p.a = sigma2 * (1.0 - rc) * (1.0 - rc);
  p.b = sigma2 * (1.0 + rc) * (1.0 + rc);
  p.c0 = 2.0 * kPi * sigma2 * c;
  return p;
}

MPParams MPParams::from_edges(double a, double b) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidArgument, "MP edges must satisfy 0 <= a < b");
  }
  const double ra = std::sqrt(a);
  const double rb = std::sqrt(b);
  const double sigma = (ra + rb) / 2.0;
  const double rc = (rb - ra) / (rb + ra);
  MPParams p;
  p.c = rc * rc;
  p.sigma2 = sigma * sigma;
  p.a = a;
  p.b = b;
  p.c0 = edge_normalizer(a, b);
  return p;
}

MPParams EstimatedMPParams::law() const { return MPParams::from_edges(a_hat, b_hat); }

double mp_density(double x, const MPParams& p) {
  if (!(x > p.a) || !(x < p.b)) return 0.0;
  return std::sqrt((p.b - x) * (x - p.a)) / (p.c0 * x);
}

double mp_density(double x, const EstimatedMPParams& p) {
  if (!(x > p.a_hat) || !(x < p.b_hat)) return 0.0;
  return std::sqrt((p.b_hat - x) * (x - p.a_hat)) / (p.c0_hat * x);
}

double mp_x_of_angle(double theta, double a, double b) {
  return a + (b - a) * (1.0 - std::cos(theta)) / 2.0;
}

double mp_angle_of_x(double x, double a, double b) {
  const double t = std::clamp(1.0 - 2.0 * (x - a) / (b - a), -1.0, 1.0);
  return std::acos(t);
}

double mp_angular_weight(double theta, double a, double b) {
  const double half = (b - a) / 2.0;
  const double x = mp_x_of_angle(theta, a, b);
  const double c0 = edge_normalizer(a, b);
  if (x <= 0.0) {
    // a == 0 and theta == 0: sin^2(theta) / x -> 4 / b.
    return half * half * (4.0 / b) / c0;
  }
  const double s = std::sin(theta);
  return half * half * s * s / (c0 * x);
}

double mp_cdf(double x, const MPParams& p) {
  if (x <= p.a) return 0.0;
  if (x >= p.b) return 1.0;
  const double theta = mp_angle_of_x(x, p.a, p.b);
  auto w = [&](double t) { return mp_angular_weight(t, p.a, p.b); };
  return std::clamp(quad::adaptive_simpson(w, 0.0, theta, 1e-13), 0.0, 1.0);
}

MPDistribution::MPDistribution(const MPParams& params) : params_(params) {
  theta_.resize(kNodes);
  x_.resize(kNodes);
  cdf_.resize(kNodes);
  for (std::size_t k = 0; k < kNodes; ++k) {
    theta_[k] = kPi * static_cast<double>(k) / static_cast<double>(kNodes - 1);
    x_[k] = mp_x_of_angle(theta_[k], params_.a, params_.b);
  }
  x_.front() = params_.a;
  x_.back() = params_.b;
  cdf_[0] = 0.0;
  for (std::size_t k = 0; k + 1 < kNodes; ++k) {
    cdf_[k + 1] = cdf_[k] + panel_cdf(k, theta_[k + 1]);
  }
}

double MPDistribution::panel_cdf(std::size_t panel, double theta) const {
  auto w = [&](double t) { return mp_angular_weight(t, params_.a, params_.b); };
  return quad::adaptive_simpson(w, theta_[panel], theta, 1e-15);
}

double MPDistribution::cdf(double x) const {
  if (x <= params_.a) return 0.0;
  if (x >= params_.b) return 1.0;
  const double theta = mp_angle_of_x(x, params_.a, params_.b);
  auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
  const auto panel = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - theta_.begin()) - 1));
  if (panel + 1 >= kNodes) return 1.0;
  return std::clamp(cdf_[panel] + panel_cdf(panel, theta), 0.0, 1.0);
}

double MPDistribution::quantile(double u) const {
  if (!(u > 0.0)) return params_.a;
  if (!(u < 1.0)) return params_.b;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return params_.b;
  const auto panel = static_cast<std::size_t>((it - cdf_.begin()) - 1);
  const double target = u - cdf_[panel];
  double lo = theta_[panel];
  double hi = theta_[panel + 1];
  while (mp_x_of_angle(hi, params_.a, params_.b) - mp_x_of_angle(lo, params_.a, params_.b) > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (panel_cdf(panel, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mp_x_of_angle(0.5 * (lo + hi), params_.a, params_.b);
}

Spectrum MPDistribution::sample(std::size_t n, Rng& rng) const {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "sample size must be >= 1");
  std::vector<double> v(n);
  for (double& x : v) x = quantile(rng.uniform());
  return Spectrum(std::move(v));
}

Spectrum sample_mp(const MPParams& p, std::size_t n, std::uint64_t seed) {
  MPDistribution dist(p);
  Rng rng(seed);
  return dist.sample(n, rng);
}

EstimatedMPParams estimate_params(const Spectrum& s) {
  if (s.size() < 2) throw Error(ErrorCode::kTooSmall, "parameter estimation needs at least 2 eigenvalues");
  const double a = s.min();
  const double b = s.max();
  if (b - a <= 1e-12 * b) throw Error(ErrorCode::kDegenerate, "min and max eigenvalue coincide");
  const double ra = std::sqrt(a);
  const double rb = std::sqrt(b);
  const double sigma = (ra + rb) / 2.0;
  const double rc = (rb - ra) / (rb + ra);
  EstimatedMPParams e;
  e.a_hat = a;
  e.b_hat = b;
  e.sigma2_hat = sigma * sigma;
  e.c_hat = rc * rc;
  e.c0_hat = edge_normalizer(a, b);
  return e;
}

double psi(double alpha, double c, double sigma2) {
  if (!(c >= 0.0) || !(sigma2 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "psi needs c >= 0, sigma^2 > 0");
  if (!(alpha > sigma2 * (1.0 + std::sqrt(c)))) {
    throw Error(ErrorCode::kNotDistant, "spike must exceed sigma^2 (1 + sqrt c)");
  }
  return alpha + c * sigma2 * alpha / (alpha - sigma2);
}

}  // namespace specstop
