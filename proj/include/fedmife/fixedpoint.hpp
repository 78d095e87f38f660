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

#ifndef FEDMIFE_FIXEDPOINT_HPP_
#define FEDMIFE_FIXEDPOINT_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"

namespace fedmife {

inline constexpr int kDefaultPrecision = 6;
inline constexpr int kMaxPrecision = 15;

// Decimal fixed point: v -> round(v * 10^precision), negatives mapped to
// order - |v|.
class FixedPointCodec {
 public:
  FixedPointCodec(int precision_digits, BigInt order)
      : precision_digits_(precision_digits), order_(std::move(order)) {
    if (precision_digits < 0 || precision_digits > kMaxPrecision) {
      Fail(ErrorCode::kInvalidArgument,
           "precision must be in [0, " + std::to_string(kMaxPrecision) + "]");
    }
    if (order_ <= 2) Fail(ErrorCode::kInvalidArgument, "order too small");
    scale_ = 1;
    for (int i = 0; i < precision_digits; ++i) scale_ *= 10;
  }

  int precision_digits() const { return precision_digits_; }
  std::int64_t scale() const { return scale_; }
  const BigInt& order() const { return order_; }

  // Round half away from zero.
  std::int64_t Quantize(double real) const {
    const double scaled = real * static_cast<double>(scale_);
    if (!std::isfinite(scaled) || std::fabs(scaled) >= 9.0e18) {
      Fail(ErrorCode::kEncoding, "value " + std::to_string(real) +
                                     " overflows the fixed-point range");
    }
    return static_cast<std::int64_t>(std::llround(scaled));
  }

  BigInt Lift(std::int64_t v) const {
    BigInt big = BigIntFromInt64(v);
    if (2 * abs(big) >= order_) {
      Fail(ErrorCode::kEncoding, "fixed-point value exceeds order / 2");
    }
    return v < 0 ? BigInt(order_ + big) : big;
  }

  // Inverse of Lift for residues in [0, order).
  std::int64_t Center(const BigInt& residue) const {
    if (2 * residue > order_) return BigIntToInt64(residue - order_);
    return BigIntToInt64(residue);
  }

 private:
  int precision_digits_;
  std::int64_t scale_;
  BigInt order_;
};

struct EncodedVector {
  std::vector<BigInt> coords;
  int precision_digits = kDefaultPrecision;

  std::size_t dim() const { return coords.size(); }
};

inline EncodedVector EncodeVector(const FixedPointCodec& codec,
                                  std::span<const double> reals) {
  EncodedVector out;
  out.precision_digits = codec.precision_digits();
  out.coords.reserve(reals.size());
  for (double r : reals) out.coords.push_back(codec.Lift(codec.Quantize(r)));
  return out;
}

inline std::vector<double> DecodeAverage(std::span<const std::int64_t> sums,
                                         std::int64_t responder_count,
                                         const FixedPointCodec& codec) {
  if (responder_count < 1) {
    Fail(ErrorCode::kInvalidArgument, "responder_count must be >= 1");
  }
  const double denom =
      static_cast<double>(responder_count) * static_cast<double>(codec.scale());
  std::vector<double> out;
  out.reserve(sums.size());
  for (std::int64_t s : sums) out.push_back(static_cast<double>(s) / denom);
  return out;
}

inline std::int64_t NextPowerOfTwo(std::int64_t v) {
  std::int64_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Largest decrypted per-coordinate sum for `max_responders` values of
// magnitude at most `value_bound`, rounded up to a power of two.
inline std::int64_t AggregationBound(const FixedPointCodec& codec,
                                     std::int64_t max_responders,
                                     double value_bound) {
  const double raw = static_cast<double>(max_responders) *
                     static_cast<double>(codec.scale()) * value_bound;
  if (!(raw >= 0) || raw > 4.0e18) {
    Fail(ErrorCode::kInvalidArgument, "aggregation bound overflows 64 bits");
  }
  return NextPowerOfTwo(static_cast<std::int64_t>(std::ceil(raw)));
}

}  // namespace fedmife

#endif  // FEDMIFE_FIXEDPOINT_HPP_
