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

#ifndef FEDMIFE_TPA_HPP_
#define FEDMIFE_TPA_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"
#include "fedmife/group.hpp"
#include "fedmife/mife.hpp"

namespace fedmife {

// Aggregation weights over slots, as exact rationals numerators[i] /
// denominator.
struct WeightedVector {
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 1;

  std::size_t size() const { return numerators.size(); }

  std::size_t nonzero_count() const {
    std::size_t c = 0;
    for (auto n : numerators) c += n != 0;
    return c;
  }

  // 1 / |included| on each included slot, 0 elsewhere.
  static WeightedVector Uniform(std::size_t slot_count,
                                std::span<const std::size_t> included) {
    WeightedVector w;
    w.numerators.assign(slot_count, 0);
    for (std::size_t s : included) {
      if (s >= slot_count) {
        Fail(ErrorCode::kInvalidArgument, "included slot beyond vector length");
      }
      w.numerators[s] = 1;
    }
    w.denominator = static_cast<std::int64_t>(w.nonzero_count());
    if (w.denominator == 0) w.denominator = 1;
    return w;
  }
};

enum class FilterReason { kAccepted, kTooFewNonzero, kNonUniform };

inline std::string_view FilterReasonName(FilterReason r) {
  switch (r) {
    case FilterReason::kAccepted: return "accepted";
    case FilterReason::kTooFewNonzero: return "too-few-nonzero";
    case FilterReason::kNonUniform: return "non-uniform";
  }
  return "unknown";
}

struct FilterVerdict {
  FilterReason reason = FilterReason::kAccepted;
  std::size_t nonzero = 0;

  bool accepted() const { return reason == FilterReason::kAccepted; }
  explicit operator bool() const { return accepted(); }
};

// Inference-prevention filter: a weight vector passes only if it has at
// least t nonzero entries and every nonzero entry equals 1 / c_nz.
inline FilterVerdict InferencePreventionFilter(const WeightedVector& w, int t) {
  FilterVerdict v;
  v.nonzero = w.nonzero_count();
  if (static_cast<long long>(v.nonzero) < t) {
    v.reason = FilterReason::kTooFewNonzero;
    return v;
  }
  const auto c_nz = static_cast<std::int64_t>(v.nonzero);
  for (std::int64_t num : w.numerators) {
    if (num == 0) continue;
    // num / den == 1 / c_nz
    if (w.denominator <= 0 || num * c_nz != w.denominator) {
      v.reason = FilterReason::kNonUniform;
      return v;
    }
  }
  return v;
}

// Majority of non-colluding participants: t >= floor(n / 2) + 1.
inline bool MeetsHonestMajority(int t, std::size_t n) {
  return static_cast<std::size_t>(t) >= n / 2 + 1;
}

struct KeyResponse {
  FilterVerdict verdict;
  std::optional<FunctionKey> key;
};

// The trusted authority: owns the master keys, hands out per-participant
// public keys (with spare slots for late joiners) and issues function keys
// only for weight vectors that pass the inference-prevention filter.
class KeyRegistry {
 public:
  static KeyRegistry Init(const GroupParams& group, std::size_t capacity,
                          int threshold, Rng& rng) {
    if (threshold < 1) Fail(ErrorCode::kConfig, "threshold t must be >= 1");
    if (capacity < 1) Fail(ErrorCode::kConfig, "capacity must be >= 1");
    if (static_cast<std::size_t>(threshold) > capacity) {
      Fail(ErrorCode::kConfig, "threshold t exceeds capacity");
    }
    return KeyRegistry(MifeSetup(group, capacity, rng), threshold);
  }

  static KeyRegistry Init(int security_bits, std::size_t capacity,
                          int threshold,
                          std::optional<std::uint64_t> seed = std::nullopt) {
    Rng rng = seed ? Rng(*seed) : Rng::FromEntropy();
    return Init(GroupSetup(security_bits, seed), capacity, threshold, rng);
  }

  // Idempotent; never alters other participants' shares.
  PublicKeyShare Register(std::string_view participant_id) {
    return PkDistribute(master_, assignments_, participant_id);
  }

  FilterVerdict Inspect(const WeightedVector& w) const {
    return InferencePreventionFilter(w, threshold_);
  }

  // The filter runs first. Accepted vectors are keyed as their 0/1 support
  // indicator; dividing by c_nz happens on the decoded plaintext.
  KeyResponse RequestFunctionKey(const WeightedVector& w) const {
    KeyResponse response;
    response.verdict = Inspect(w);
    if (!response.verdict) return response;
    if (w.size() > master_.capacity()) {
      Fail(ErrorCode::kDimension, "weight vector longer than capacity");
    }
    std::vector<std::int64_t> y(w.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w.numerators[i] == 0) continue;
      if (i >= assignments_.size()) {
        Fail(ErrorCode::kProtocol,
             "weight on unassigned slot " + std::to_string(i));
      }
      y[i] = 1;
    }
    response.key = SkGenerate(master_, y);
    return response;
  }

  const MasterKeys& master() const { return master_; }
  const GroupParams& group() const { return master_.group; }
  const SlotAssignments& assignments() const { return assignments_; }
  std::size_t capacity() const { return master_.capacity(); }
  std::size_t registered() const { return assignments_.size(); }
  int threshold() const { return threshold_; }

 private:
  KeyRegistry(MasterKeys master, int threshold)
      : master_(std::move(master)), threshold_(threshold) {}

  MasterKeys master_;
  SlotAssignments assignments_;
  int threshold_;
};

}  // namespace fedmife

#endif  // FEDMIFE_TPA_HPP_
