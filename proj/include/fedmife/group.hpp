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

#ifndef FEDMIFE_GROUP_HPP_
#define FEDMIFE_GROUP_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"
#include "json.hpp"

namespace fedmife {

// Schnorr group: the order-`order` subgroup of quadratic residues modulo the
// safe prime `modulus` = 2 * order + 1, generated by `generator`.
struct GroupParams {
  BigInt modulus;
  BigInt order;
  BigInt generator;
  int security_bits = 0;

  // generator^e; `e` may be negative or unreduced.
  BigInt Exp(const BigInt& e) const {
    return PowMod(generator, Mod(e, order), modulus);
  }
  BigInt Exp(std::int64_t e) const { return Exp(BigIntFromInt64(e)); }

  BigInt Pow(const BigInt& base, const BigInt& e) const {
    return PowMod(base, Mod(e, order), modulus);
  }

  BigInt Mul(const BigInt& a, const BigInt& b) const {
    return Mod(a * b, modulus);
  }

  BigInt Inverse(const BigInt& a) const { return InvertMod(a, modulus); }

  // Membership in the prime-order subgroup.
  bool Contains(const BigInt& h) const {
    return h > 0 && h < modulus && PowMod(h, order, modulus) == 1;
  }

  // Throws kSetup if any structural invariant fails.
  void Validate(int reps = 30) const {
    if (modulus != 2 * order + 1) {
      Fail(ErrorCode::kSetup, "modulus is not 2 * order + 1");
    }
    if (!IsProbablePrime(order, reps) || !IsProbablePrime(modulus, reps)) {
      Fail(ErrorCode::kSetup, "modulus or order is not prime");
    }
    if (generator <= 1 || generator >= modulus ||
        PowMod(generator, order, modulus) != 1) {
      Fail(ErrorCode::kSetup, "generator does not have prime order");
    }
  }

  bool operator==(const GroupParams&) const = default;
};

// Uses 4 = 2^2 as generator: a non-trivial quadratic residue, hence of order
// (P - 1) / 2 for every safe prime P > 5.
inline GroupParams GroupFromSafePrime(const BigInt& safe_prime,
                                      int security_bits = 0) {
  if (safe_prime <= 5) {
    Fail(ErrorCode::kInvalidArgument, "safe prime must exceed 5");
  }
  GroupParams params;
  params.modulus = safe_prime;
  params.order = (safe_prime - 1) / 2;
  params.generator = 4;
  params.security_bits = security_bits > 0
                             ? security_bits
                             : static_cast<int>(BitLength(safe_prime));
  return params;
}

namespace internal {

// RFC 2409 / RFC 3526 MODP primes (all safe primes).
inline std::optional<std::string_view> NamedSafePrimeHex(int bits) {
  switch (bits) {
    case 1024:
      return
      "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
      "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
      "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
      "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE65381FFFFFFFFFFFFFFFF"
      ;
    case 1536:
      return
      "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
      "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
      "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
      "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
      "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
      "9ED529077096966D670C354E4ABC9804F1746C08CA237327FFFFFFFFFFFFFFFF"
      ;
    case 2048:
      return
      "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
      "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
      "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
      "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
      "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
      "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
      "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
      "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF"
      ;
    case 3072:
      return
      "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
      "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
      "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
      "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
      "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
      "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
      "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
      "3995497CEA956AE515D2261898FA051015728E5A8AAAC42DAD33170D04507A33"
      "A85521ABDF1CBA64ECFB850458DBEF0A8AEA71575D060C7DB3970F85A6E1E4C7"
      "ABF5AE8CDB0933D71E8C94E04A25619DCEE3D2261AD2EE6BF12FFA06D98A0864"
      "D87602733EC86A64521F2B18177B200CBBE117577A615D6C770988C0BAD946E2"
      "08E24FA074E5AB3143DB5BFCE0FD108E4B82D120A93AD2CAFFFFFFFFFFFFFFFF"
      ;
    default:
      return std::nullopt;
  }
}

inline const std::vector<unsigned>& SmallOddPrimes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<unsigned> out;
    for (unsigned n = 3; n < 4096; n += 2) {
      bool prime = true;
      for (unsigned d = 3; d * d <= n; d += 2) {
        if (n % d == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(n);
    }
    return out;
  }();
  return primes;
}

// q and 2q + 1 both survive trial division.
inline bool PassesSafePrimeSieve(const BigInt& q) {
  for (unsigned s : SmallOddPrimes()) {
    const unsigned long r = mpz_fdiv_ui(q.get_mpz_t(), s);
    if (r == 0 && q != s) return false;
    if (r == (s - 1) / 2) return false;  // 2q + 1 divisible by s
  }
  return true;
}

}  // namespace internal

inline constexpr int kDefaultSecurityBits = 2048;
inline constexpr int kMinSecurityBits = 32;

// Random safe prime of exactly `bits` bits drawn from `rng`.
inline BigInt GenerateSafePrime(int bits, Rng& rng,
                                std::size_t max_candidates = 50'000'000) {
  if (bits < 8) Fail(ErrorCode::kInvalidArgument, "safe prime too small");
  for (std::size_t i = 0; i < max_candidates; ++i) {
    BigInt q = rng.WithBits(static_cast<std::size_t>(bits - 1));
    q |= 1;
    if (!internal::PassesSafePrimeSieve(q)) continue;
    if (!IsProbablePrime(q, 1)) continue;
    BigInt p = 2 * q + 1;
    if (!IsProbablePrime(p, 1)) continue;
    if (IsProbablePrime(q, 30) && IsProbablePrime(p, 30)) return p;
  }
  Fail(ErrorCode::kSetup, "no safe prime found within the retry budget");
}

// Without a seed, sizes with a published MODP prime use it and other sizes
// draw a fresh safe prime from system entropy. With a seed the prime is
// always generated, deterministically.
inline GroupParams GroupSetup(int security_bits = kDefaultSecurityBits,
                              std::optional<std::uint64_t> seed = std::nullopt) {
  if (security_bits < kMinSecurityBits) {
    Fail(ErrorCode::kInvalidArgument,
         "security_bits must be at least " + std::to_string(kMinSecurityBits));
  }
  if (!seed) {
    if (auto hex = internal::NamedSafePrimeHex(security_bits)) {
      BigInt p;
      p.set_str(std::string(*hex), 16);
      return GroupFromSafePrime(p, security_bits);
    }
  }
  Rng rng = seed ? Rng(*seed) : Rng::FromEntropy();
  return GroupFromSafePrime(GenerateSafePrime(security_bits, rng),
                            security_bits);
}

// Reproducible group for simulations: the published prime when one exists
// for this size, otherwise a prime generated from the seed.
inline GroupParams DeterministicGroup(int security_bits, std::uint64_t seed) {
  if (internal::NamedSafePrimeHex(security_bits)) {
    return GroupSetup(security_bits);
  }
  return GroupSetup(security_bits, seed);
}

// Group context file: JSON object with decimal big-integer strings.
inline std::string GroupToJson(const GroupParams& params) {
  nlohmann::ordered_json j;
  j["modulus"] = params.modulus.get_str(10);
  j["order"] = params.order.get_str(10);
  j["generator"] = params.generator.get_str(10);
  j["security_bits"] = params.security_bits;
  return j.dump(2) + "\n";
}

inline GroupParams GroupFromJson(std::string_view text, bool validate = true) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kConfig, std::string("group file: ") + e.what());
  }
  GroupParams params;
  try {
    params.modulus = BigIntFromDecimal(j.at("modulus").get<std::string>());
    params.order = BigIntFromDecimal(j.at("order").get<std::string>());
    params.generator = BigIntFromDecimal(j.at("generator").get<std::string>());
    params.security_bits = j.at("security_bits").get<int>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("group file: ") + e.what());
  }
  if (validate) params.Validate();
  return params;
}

inline void SaveGroup(const GroupParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  out << GroupToJson(params);
}

inline GroupParams LoadGroup(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return GroupFromJson(buf.str());
}

}  // namespace fedmife

#endif  // FEDMIFE_GROUP_HPP_
