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


#include "specstop/synth.hpp"

#include <cmath>
#include <numeric>

#include "specstop/error.hpp"
#include "specstop/parallel.hpp"
#include "specstop/rng.hpp"

namespace specstop {

namespace {

constexpr std::uint64_t kMeanStream = 0;
constexpr std::uint64_t kSampleStream = 1;

void validate_common(const GaussianSpec& spec) {
  if (spec.classes < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 classes");
  if (spec.dimension < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  if (spec.per_class < 1) throw Error(ErrorCode::kInvalidArgument, "per-class size must be >= 1");
  if (!(spec.sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise sigma must be positive");
}

LabeledDataset draw_samples(const GaussianSpec& spec, std::vector<std::vector<double>> means) {
  const std::size_t p = spec.dimension;
  const std::size_t nk = spec.per_class;
  // Each class fills its own block from its own stream.
  auto blocks = parallel_map<std::vector<double>>(spec.classes, [&](std::size_t k) {
    Rng rng = Rng::derive(spec.seed, kSampleStream, k);
    std::vector<double> block(nk * p);
    for (std::size_t i = 0; i < nk; ++i) {
      for (std::size_t j = 0; j < p; ++j) block[i * p + j] = means[k][j] + spec.sigma * rng.normal();
    }
    return block;
  });
  LabeledDataset out;
  out.dimension = p;
  out.features.reserve(spec.classes * nk * p);
  out.labels.reserve(spec.classes * nk);
  for (std::size_t k = 0; k < spec.classes; ++k) {
    out.features.insert(out.features.end(), blocks[k].begin(), blocks[k].end());
    out.labels.insert(out.labels.end(), nk, static_cast<int>(k + 1));
  }
  out.means = std::move(means);
  return out;
}

}  // namespace

std::vector<std::vector<double>> d1_means(const GaussianSpec& spec) {
  validate_common(spec);
  const auto* v = std::get_if<D1Variant>(&spec.variant);
  if (v == nullptr) throw Error(ErrorCode::kInvalidArgument, "spec is not a D1 variant");
  if (spec.dimension % 2 != 0) throw Error(ErrorCode::kOddDimension, "D1 needs an even dimension");
  if (!(v->delta >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be nonnegative");
  const std::size_t p = spec.dimension;
  std::vector<std::vector<double>> means(spec.classes);
  for (std::size_t k = 0; k < spec.classes; ++k) {
    // Partial Fisher-Yates: the first p/2 slots become I_k.
    Rng rng = Rng::derive(spec.seed, kMeanStream, k);
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < p / 2; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(p - i));
      std::swap(idx[i], idx[j]);
    }
    means[k].assign(p, v->base_mean + v->delta);
    for (std::size_t i = 0; i < p / 2; ++i) means[k][idx[i]] = v->base_mean;
  }
  return means;
}

std::vector<std::vector<double>> d2_means(const GaussianSpec& spec) {
  validate_common(spec);
  const auto* v = std::get_if<D2Variant>(&spec.variant);
  if (v == nullptr) throw Error(ErrorCode::kInvalidArgument, "spec is not a D2 variant");
  if (spec.dimension < spec.classes) throw Error(ErrorCode::kDimensionTooSmall, "D2 needs p >= K");
  if (!(v->t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "t must be nonnegative");
  const double inv_k = 1.0 / static_cast<double>(spec.classes);
  std::vector<std::vector<double>> means(spec.classes, std::vector<double>(spec.dimension, 0.0));
  for (std::size_t k = 0; k < spec.classes; ++k) {
    for (std::size_t i = 0; i < spec.classes; ++i) means[k][i] = v->t * ((i == k ? 1.0 : 0.0) - inv_k);
  }
  return means;
}

LabeledDataset gen_d1(const GaussianSpec& spec) { return draw_samples(spec, d1_means(spec)); }

LabeledDataset gen_d2(const GaussianSpec& spec) { return draw_samples(spec, d2_means(spec)); }

LabeledDataset generate(const GaussianSpec& spec) {
  return std::holds_alternative<D1Variant>(spec.variant) ? gen_d1(spec) : gen_d2(spec);
}

double snr(const std::vector<std::vector<double>>& means, double sigma) {
  if (means.size() < 2) throw Error(ErrorCode::kSingleClass, "SNR needs at least two class means");
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t k = 0; k < means.size(); ++k) {
    for (std::size_t l = k + 1; l < means.size(); ++l) {
      double sq = 0.0;
      for (std::size_t j = 0; j < means[k].size(); ++j) {
        const double d = means[k][j] - means[l][j];
        sq += d * d;
      }
      total += std::sqrt(sq);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs) / sigma;
}

double snr(const LabeledDataset& data, double sigma) { return snr(data.means, sigma); }

}  // namespace specstop
