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
#include <cstdint>
#include <variant>
#include <vector>

namespace specstop {

/// Class means m on a random half of the coordinates and m + delta on the rest.
struct D1Variant {
  double delta = 0.05;
  double base_mean = -0.2;
};

/// Class means t * v_k with v_k = e_k - (1/K) sum_{i<=K} e_i.
struct D2Variant {
  double t = 1.0;
};

struct GaussianSpec {
  std::size_t classes = 2;      // K
  std::size_t dimension = 1000; // p
  std::size_t per_class = 7500; // n_k
  double sigma = 1.0;
  std::variant<D1Variant, D2Variant> variant = D1Variant{};
  std::uint64_t seed = 0;
};

struct LabeledDataset {
  std::size_t dimension = 0;
  std::vector<double> features;  // row-major, one row per sample
  std::vector<int> labels;       // 1-based class ids
  std::vector<std::vector<double>> means;

  std::size_t size() const { return labels.size(); }
};

/// D1 mean vectors only (no samples drawn).
std::vector<std::vector<double>> d1_means(const GaussianSpec& spec);
/// D2 mean vectors only.
std::vector<std::vector<double>> d2_means(const GaussianSpec& spec);

LabeledDataset gen_d1(const GaussianSpec& spec);
LabeledDataset gen_d2(const GaussianSpec& spec);
LabeledDataset generate(const GaussianSpec& spec);

/// Mean over unordered class pairs of ||mu_k - mu_k'|| / sigma.
double snr(const std::vector<std::vector<double>>& means, double sigma);
double snr(const LabeledDataset& data, double sigma);

}  // namespace specstop
