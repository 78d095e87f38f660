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

#ifndef FEDMIFE_BIGINT_HPP_
#define FEDMIFE_BIGINT_HPP_

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fedmife/errors.hpp"

namespace fedmife {

using BigInt = mpz_class;

inline std::size_t BitLength(const BigInt& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

// base^exp mod modulus. Negative exponents use the modular inverse of base.
inline BigInt PowMod(const BigInt& base, const BigInt& exp,
                     const BigInt& modulus) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           modulus.get_mpz_t());
  return out;
}

inline BigInt PowMod(const BigInt& base, long exp, const BigInt& modulus) {
  return PowMod(base, BigInt(exp), modulus);
}

inline BigInt Mod(const BigInt& v, const BigInt& modulus) {
  BigInt out;
  mpz_mod(out.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

inline BigInt InvertMod(const BigInt& v, const BigInt& modulus) {
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    Fail(ErrorCode::kInvalidArgument, "element has no modular inverse");
  }
  return out;
}

inline bool IsProbablePrime(const BigInt& v, int reps = 30) {
  return mpz_probab_prime_p(v.get_mpz_t(), reps) > 0;
}

inline BigInt BigIntFromInt64(std::int64_t v) {
  BigInt out;
  // mpz_set_si takes long, which is 64 bits on the supported LP64 targets.
  mpz_set_si(out.get_mpz_t(), static_cast<long>(v));
  return out;
}

inline std::int64_t BigIntToInt64(const BigInt& v) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) {
    Fail(ErrorCode::kInvalidArgument, "integer does not fit in 64 bits");
  }
  return mpz_get_si(v.get_mpz_t());
}

inline BigInt BigIntFromDecimal(std::string_view text) {
  BigInt out;
  if (text.empty() ||
      out.set_str(std::string(text), 10) != 0) {
    Fail(ErrorCode::kSerialization,
         "not a decimal integer: '" + std::string(text) + "'");
  }
  return out;
}

// Big-endian magnitude bytes; zero encodes as the empty string.
inline std::string ToBytes(const BigInt& v) {
  if (v < 0) Fail(ErrorCode::kSerialization, "negative integer on the wire");
  std::size_t count = 0;
  if (v == 0) return {};
  std::string out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8, '\0');
  mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(count);
  return out;
}

inline BigInt FromBytes(std::string_view bytes) {
  BigInt out;
  if (!bytes.empty()) {
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return out;
}

// Low 64 bits of a non-negative integer. Group elements are uniformly spread
// over [1, P), so this is a good hash key for lookup tables.
inline std::uint64_t Fingerprint(const BigInt& v) {
  std::uint64_t lo = mpz_getlimbn(v.get_mpz_t(), 0);
  if constexpr (sizeof(mp_limb_t) < sizeof(std::uint64_t)) {
    lo |= static_cast<std::uint64_t>(mpz_getlimbn(v.get_mpz_t(), 1)) << 32;
  }
  return lo;
}

// Maps group elements to values through their fingerprints. Fingerprint
// collisions spill into a short overflow list that stores the full element.
template <typename Value>
class FingerprintIndex {
 public:
  void Reserve(std::size_t n) { primary_.reserve(n); }

  // Returns false if the element was already present.
  bool Insert(const BigInt& element, Value value) {
    const std::uint64_t key = Fingerprint(element);
    auto [it, inserted] = primary_.try_emplace(key, Entry{element, value});
    if (inserted) return true;
    if (it->second.element == element) return false;
    for (const auto& [e, v] : overflow_) {
      if (e == element) return false;
    }
    overflow_.emplace_back(element, value);
    return true;
  }

  std::optional<Value> Find(const BigInt& element) const {
    auto it = primary_.find(Fingerprint(element));
    if (it == primary_.end()) return std::nullopt;
    if (it->second.element == element) return it->second.value;
    for (const auto& [e, v] : overflow_) {
      if (e == element) return v;
    }
    return std::nullopt;
  }

  std::size_t size() const { return primary_.size() + overflow_.size(); }

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (const auto& [key, entry] : primary_) fn(entry.element, entry.value);
    for (const auto& [e, v] : overflow_) fn(e, v);
  }

 private:
  struct Entry {
    BigInt element;
    Value value;
  };
  std::unordered_map<std::uint64_t, Entry> primary_;
  std::vector<std::pair<BigInt, Value>> overflow_;
};

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seedable random source shared by key generation, nonces, DP noise and the
// simulator. Streams forked with distinct labels are independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(SplitMix64(seed)) {}

  static Rng FromEntropy() {
    std::random_device rd;
    const std::uint64_t hi = rd();
    const std::uint64_t lo = rd();
    return Rng((hi << 32) ^ lo);
  }

  std::uint64_t seed() const { return seed_; }

  Rng Fork(std::uint64_t label) const {
    return Rng(SplitMix64(seed_ ^ SplitMix64(label + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, bound).
  BigInt Below(const BigInt& bound) {
    if (bound <= 0) Fail(ErrorCode::kInvalidArgument, "empty sampling range");
    const std::size_t bits = BitLength(bound);
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    BigInt out;
    while (true) {
      for (auto& w : buf) w = engine_();
      const std::size_t excess = words * 64 - bits;
      if (excess > 0) buf.back() >>= excess;
      // Most-significant word last.
      mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0,
                 buf.data());
      if (out < bound) return out;
    }
  }

  // Uniform integer with exactly `bits` bits (top bit set).
  BigInt WithBits(std::size_t bits) {
    BigInt top = BigInt(1) << static_cast<mp_bitcnt_t>(bits - 1);
    return top + Below(top);
  }

  double Uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double Gaussian(double stddev) {
    return std::normal_distribution<double>(0.0, stddev)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace fedmife

#endif  // FEDMIFE_BIGINT_HPP_
