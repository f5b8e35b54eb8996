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

#include <cstddef>
#include <vector>

#include "specstop/linalg.hpp"
#include "specstop/rng.hpp"

namespace specstop {

/// Marchenko-Pastur law with shape c in (0, 1] and scale sigma^2 > 0.
/// Support edges a = sigma^2 (1 - sqrt c)^2 and b = sigma^2 (1 + sqrt c)^2.
struct MPParams {
  double c = 0.0;
  double sigma2 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c0 = 0.0;  // normalizer 2 pi sigma^2 c

  static MPParams from_shape(double c, double sigma2);
  /// Inverse of the edge formulas; the stored edges are exactly `a` and `b`.
  static MPParams from_edges(double a, double b);
};

/// Law fitted from a spectrum's extreme order statistics.
struct EstimatedMPParams {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double c_hat = 0.0;
  double sigma2_hat = 0.0;
  double c0_hat = 0.0;  // pi (sqrt b - sqrt a)^2 / 2

  MPParams law() const;
};

double mp_density(double x, const MPParams& p);
double mp_density(double x, const EstimatedMPParams& p);

/// CDF by direct adaptive quadrature (no tabulation).
double mp_cdf(double x, const MPParams& p);

/// a + (b - a)(1 - cos theta)/2. On this angle grid the density times the
/// Jacobian is smooth up to both edges, which is how every integral of the
/// density in this library is taken.
double mp_x_of_angle(double theta, double a, double b);
double mp_angle_of_x(double x, double a, double b);
/// Density times dx/dtheta for the law with edges [a, b].
double mp_angular_weight(double theta, double a, double b);

/// MP law with a CDF tabulated at 512 Chebyshev-Lobatto nodes. Immutable
/// after construction and shareable across threads.
class MPDistribution {
 public:
  static constexpr std::size_t kNodes = 512;

  explicit MPDistribution(const MPParams& params);

  const MPParams& params() const { return params_; }
  double density(double x) const { return mp_density(x, params_); }
  double cdf(double x) const;
  /// Inverse CDF by bisection inside the bracketing table panel (1e-10 in x).
  double quantile(double u) const;
  /// n i.i.d. draws; deterministic in the generator state.
  Spectrum sample(std::size_t n, Rng& rng) const;

 private:
  double panel_cdf(std::size_t panel, double theta) const;

  MPParams params_;
  std::vector<double> theta_;  // node angles, equally spaced on [0, pi]
  std::vector<double> x_;      // node abscissae
  std::vector<double> cdf_;    // CDF at nodes
};

/// n i.i.d. MP draws (convenience wrapper building a one-off table).
Spectrum sample_mp(const MPParams& p, std::size_t n, std::uint64_t seed);

/// a_hat = min, b_hat = max; inverts the edge formulas.
EstimatedMPParams estimate_params(const Spectrum& s);

/// Outlier location of a distant population spike alpha when the
/// population spectrum is a point mass at sigma^2:
/// psi(alpha) = alpha + c sigma^2 alpha / (alpha - sigma^2).
double psi(double alpha, double c, double sigma2);

}  // namespace specstop
