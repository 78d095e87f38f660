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

#ifndef FEDMIFE_DLOG_HPP_
#define FEDMIFE_DLOG_HPP_

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"
#include "fedmife/group.hpp"

namespace fedmife {

// Approximate heap cost of one table entry: element limbs plus node overhead.
inline std::size_t DlogEntryBytes(const GroupParams& group) {
  return (BitLength(group.modulus) + 7) / 8 + 96;
}

inline constexpr std::size_t kDefaultDlogTableBytes = std::size_t{256} << 20;

inline std::size_t DefaultMaxDlogEntries(const GroupParams& group) {
  return kDefaultDlogTableBytes / DlogEntryBytes(group);
}

// Precomputed map h -> f for h = g^f and every f in [-bound, bound].
class DlogTable {
 public:
  const GroupParams& group() const { return group_; }
  const BigInt& base() const { return group_.generator; }
  std::int64_t bound() const { return bound_; }
  std::size_t size() const { return index_.size(); }

  std::optional<std::int64_t> Lookup(const BigInt& h) const {
    return index_.Find(h);
  }

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    index_.ForEach(fn);
  }

 private:
  friend DlogTable BuildDlogTable(const GroupParams&, std::int64_t,
                                  std::size_t);

  GroupParams group_;
  std::int64_t bound_ = 0;
  FingerprintIndex<std::int64_t> index_;
};

// max_entries of 0 selects DefaultMaxDlogEntries(group).
inline DlogTable BuildDlogTable(const GroupParams& group, std::int64_t bound,
                                std::size_t max_entries = 0) {
  if (bound < 0) Fail(ErrorCode::kInvalidArgument, "negative dlog bound");
  if (max_entries == 0) max_entries = DefaultMaxDlogEntries(group);
  const auto entries = static_cast<unsigned long long>(bound) * 2 + 1;
  if (entries > max_entries) {
    Fail(ErrorCode::kCapacity,
         "dlog table with bound " + std::to_string(bound) + " needs " +
             std::to_string(entries) + " entries, cap is " +
             std::to_string(max_entries));
  }
  if (BigInt(bound) >= group.order / 2) {
    Fail(ErrorCode::kInvalidArgument, "dlog bound wraps around the group order");
  }
  DlogTable table;
  table.group_ = group;
  table.bound_ = bound;
  table.index_.Reserve(static_cast<std::size_t>(entries));
  const BigInt g_inv = group.Inverse(group.generator);
  BigInt up = 1;
  BigInt down = 1;
  table.index_.Insert(up, 0);
  for (std::int64_t f = 1; f <= bound; ++f) {
    up = group.Mul(up, group.generator);
    down = group.Mul(down, g_inv);
    table.index_.Insert(up, f);
    table.index_.Insert(down, -f);
  }
  return table;
}

// Two-tier discrete log over [-fallback_bound, fallback_bound]: a table
// lookup first, then baby-step giant-step. The baby steps are the table
// itself when it is wide enough, otherwise a dedicated window of
// ceil(sqrt(2 * fallback_bound + 1)) powers built once at construction.
// Immutable after construction.
class DlogSolver {
 public:
  DlogSolver(std::shared_ptr<const DlogTable> table,
             std::int64_t fallback_bound, std::size_t max_baby_steps = 0)
      : table_(std::move(table)), fallback_bound_(fallback_bound) {
    if (!table_) Fail(ErrorCode::kInvalidArgument, "null dlog table");
    if (fallback_bound_ < 0) {
      Fail(ErrorCode::kInvalidArgument, "negative fallback bound");
    }
    const GroupParams& group = table_->group();
    if (BigInt(fallback_bound_) >= group.order / 2) {
      Fail(ErrorCode::kInvalidArgument,
           "fallback bound wraps around the group order");
    }
    if (fallback_bound_ <= table_->bound()) return;

    const long double span = 2.0L * fallback_bound_ + 1.0L;
    auto m = static_cast<std::int64_t>(std::ceil(std::sqrt(span)));
    const std::int64_t table_width = 2 * table_->bound() + 1;
    if (table_width >= m) {
      baby_lo_ = -table_->bound();
      baby_width_ = table_width;
      return;
    }
    if (max_baby_steps == 0) max_baby_steps = DefaultMaxDlogEntries(group);
    if (static_cast<std::size_t>(m) > max_baby_steps) {
      Fail(ErrorCode::kCapacity, "baby-step window of " + std::to_string(m) +
                                     " exceeds the memory cap");
    }
    auto baby = std::make_shared<FingerprintIndex<std::int64_t>>();
    baby->Reserve(static_cast<std::size_t>(m));
    BigInt cur = 1;
    for (std::int64_t j = 0; j < m; ++j) {
      baby->Insert(cur, j);
      cur = group.Mul(cur, group.generator);
    }
    baby_ = std::move(baby);
    baby_lo_ = 0;
    baby_width_ = m;
  }

  DlogSolver(const DlogTable& table, std::int64_t fallback_bound)
      : DlogSolver(std::make_shared<const DlogTable>(table), fallback_bound) {}

  const DlogTable& table() const { return *table_; }
  std::int64_t fallback_bound() const { return fallback_bound_; }

  // Returns f with g^f == h. Throws kAggregationBound when no such f lies in
  // the search window.
  std::int64_t Solve(const BigInt& h) const {
    if (auto hit = table_->Lookup(h)) return *hit;
    if (baby_width_ > 0) {
      if (auto f = GiantSteps(h)) return *f;
    }
    Fail(ErrorCode::kAggregationBound,
         "discrete log outside [-" + std::to_string(fallback_bound_) + ", " +
             std::to_string(fallback_bound_) + "]");
  }

 private:
  std::optional<std::int64_t> BabyLookup(const BigInt& h) const {
    if (baby_) return baby_->Find(h);
    return table_->Lookup(h);
  }

  // Candidate exponents for giant step i are start_i + o for baby offsets o
  // in [baby_lo_, baby_lo_ + baby_width_), with start_i = -B - baby_lo_ +
  // i * width. Matching g^o = h * g^(-start_i) yields f = start_i + o.
  std::optional<std::int64_t> GiantSteps(const BigInt& h) const {
    const GroupParams& group = table_->group();
    const std::int64_t bound = fallback_bound_;
    std::int64_t start = -bound - baby_lo_;
    BigInt gamma = group.Mul(h, group.Exp(-start));
    const BigInt stride = group.Exp(-baby_width_);
    while (start + baby_lo_ <= bound) {
      if (auto offset = BabyLookup(gamma)) {
        const std::int64_t f = start + *offset;
        if (f >= -bound && f <= bound) return f;
      }
      gamma = group.Mul(gamma, stride);
      start += baby_width_;
    }
    return std::nullopt;
  }

  std::shared_ptr<const DlogTable> table_;
  std::int64_t fallback_bound_;
  std::shared_ptr<const FingerprintIndex<std::int64_t>> baby_;
  std::int64_t baby_lo_ = 0;
  std::int64_t baby_width_ = 0;
};

inline std::int64_t DlogSolve(const BigInt& h, const DlogTable& table,
                              std::int64_t fallback_bound) {
  return DlogSolver(table, fallback_bound).Solve(h);
}

}  // namespace fedmife

#endif  // FEDMIFE_DLOG_HPP_
