/*
 * Copyright 2026 The FedMife Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDMIFE_DP_HPP_
#define FEDMIFE_DP_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"

namespace fedmife {

// Gaussian mechanism with SMC noise reduction. Each participant adds
// N(0, sigma^2 / t): once at least t honest updates are summed, the aggregate
// carries the variance of a single local-DP release.
struct DpParams {
  double epsilon = 0.5;
  double delta = 1e-5;
  double clip_norm = 4.0;
  int min_honest = 1;

  void Validate() const {
    if (!(epsilon > 0)) Fail(ErrorCode::kConfig, "epsilon must be > 0");
    if (!(delta > 0 && delta < 1)) {
      Fail(ErrorCode::kConfig, "delta must lie in (0, 1)");
    }
    if (!(clip_norm > 0)) Fail(ErrorCode::kConfig, "clip norm must be > 0");
    if (min_honest < 1) Fail(ErrorCode::kConfig, "t must be >= 1");
  }

  // Standard deviation of one local-DP release; includes the sensitivity.
  double sigma() const {
    return clip_norm * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
  }

  double participant_stddev() const {
    return sigma() / std::sqrt(static_cast<double>(min_honest));
  }
};

inline double L2Norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

inline std::vector<double> ClipUpdate(std::span<const double> update,
                                      double clip_norm) {
  if (!(clip_norm > 0)) {
    Fail(ErrorCode::kInvalidArgument, "clip norm must be > 0");
  }
  std::vector<double> out(update.begin(), update.end());
  const double norm = L2Norm(update);
  if (norm > clip_norm) {
    const double factor = clip_norm / norm;
    for (double& x : out) x *= factor;
  }
  return out;
}

inline std::vector<double> ReducedNoiseSample(std::size_t dim,
                                              const DpParams& params,
                                              Rng& rng) {
  if (dim < 1) Fail(ErrorCode::kInvalidArgument, "noise dimension must be >= 1");
  const double stddev = params.participant_stddev();
  std::vector<double> out(dim);
  for (double& x : out) x = rng.Gaussian(stddev);
  return out;
}

inline std::vector<double> Privatize(std::span<const double> update,
                                     const DpParams& params, Rng& rng) {
  std::vector<double> out = ClipUpdate(update, params.clip_norm);
  if (out.empty()) return out;
  const std::vector<double> noise = ReducedNoiseSample(out.size(), params, rng);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += noise[i];
  return out;
}

}  // namespace fedmife

#endif  // FEDMIFE_DP_HPP_
