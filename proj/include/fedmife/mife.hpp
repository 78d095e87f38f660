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

#ifndef FEDMIFE_MIFE_HPP_
#define FEDMIFE_MIFE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedmife/bigint.hpp"
#include "fedmife/dlog.hpp"
#include "fedmife/errors.hpp"
#include "fedmife/group.hpp"

namespace fedmife {

// Multi-input functional encryption for inner products over a DDH group,
// with one scalar input per slot (eta_i = 1). A model vector of length d is
// handled as d parallel instances that share slot keys and the function key.

enum class NonceMode : std::uint8_t {
  kPerCoordinate = 0,  // fresh r for every coordinate
  kShared = 1,         // one r for the whole vector (batched)
};

inline std::string_view NonceModeName(NonceMode mode) {
  return mode == NonceMode::kShared ? "shared" : "fresh";
}

inline NonceMode ParseNonceMode(std::string_view name) {
  if (name == "fresh" || name == "per-coordinate") {
    return NonceMode::kPerCoordinate;
  }
  if (name == "shared") return NonceMode::kShared;
  Fail(ErrorCode::kConfig, "unknown nonce mode '" + std::string(name) +
                               "' (expected fresh|shared)");
}

using ElementPair = std::array<BigInt, 2>;
using ScalarPair = std::array<BigInt, 2>;

struct MasterKeys {
  GroupParams group;
  // mpk
  ElementPair a_exp;             // [a] = (g, g^a)
  std::vector<BigInt> wa_exp;    // [W_i a], one element per slot
  // msk
  std::vector<ScalarPair> w;     // W_i, a 1x2 row over Z_order
  std::vector<BigInt> u;         // u_i
  BigInt a;                      // kept for test-scale invariant checks

  std::size_t capacity() const { return w.size(); }
  bool operator==(const MasterKeys&) const = default;
};

struct PublicKeyShare {
  std::size_t slot_index = 0;
  GroupParams group;
  ElementPair a_exp;
  BigInt wa_exp;
  BigInt u;

  bool operator==(const PublicKeyShare&) const = default;
};

struct FunctionKey {
  std::vector<ScalarPair> d;          // d_i = y_i * W_i
  BigInt z;                           // sum_i y_i * u_i
  std::vector<std::int64_t> weights;  // y

  bool operator==(const FunctionKey&) const = default;
};

struct SlotCiphertext {
  std::size_t slot_index = 0;
  NonceMode mode = NonceMode::kPerCoordinate;
  std::size_t coord_count = 0;
  std::vector<ElementPair> t_exp;  // [a r], one pair per nonce
  std::vector<BigInt> c_exp;       // [x_j + u_i + (W_i a) r], one per coordinate

  std::size_t element_count() const { return 2 * t_exp.size() + c_exp.size(); }
  bool operator==(const SlotCiphertext&) const = default;
};

inline MasterKeys MifeSetup(const GroupParams& group, std::size_t capacity,
                            Rng& rng) {
  if (capacity < 1) Fail(ErrorCode::kInvalidArgument, "capacity must be >= 1");
  MasterKeys keys;
  keys.group = group;
  keys.a = rng.Below(group.order);
  keys.a_exp = {group.generator, group.Exp(keys.a)};
  keys.w.reserve(capacity);
  keys.u.reserve(capacity);
  keys.wa_exp.reserve(capacity);
  for (std::size_t i = 0; i < capacity; ++i) {
    ScalarPair w_i = {rng.Below(group.order), rng.Below(group.order)};
    BigInt u_i = rng.Below(group.order);
    keys.wa_exp.push_back(group.Exp(w_i[0] + w_i[1] * keys.a));
    keys.w.push_back(std::move(w_i));
    keys.u.push_back(std::move(u_i));
  }
  return keys;
}

// Participant id -> slot bookkeeping used by PkDistribute. Kept apart from
// MasterKeys so joins never touch key material.
class SlotAssignments {
 public:
  std::optional<std::size_t> Find(std::string_view id) const {
    auto it = slots_.find(std::string(id));
    if (it == slots_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t Assign(std::string_view id, std::size_t capacity) {
    if (auto slot = Find(id)) return *slot;
    if (slots_.size() >= capacity) {
      Fail(ErrorCode::kNoSlot, "all " + std::to_string(capacity) +
                                   " slots are assigned; cannot add '" +
                                   std::string(id) + "'");
    }
    const std::size_t slot = slots_.size();
    slots_.emplace(std::string(id), slot);
    return slot;
  }

  std::size_t size() const { return slots_.size(); }
  const std::map<std::string, std::size_t>& entries() const { return slots_; }

 private:
  std::map<std::string, std::size_t> slots_;
};

inline PublicKeyShare PublicKeyForSlot(const MasterKeys& keys,
                                       std::size_t slot) {
  if (slot >= keys.capacity()) {
    Fail(ErrorCode::kNoSlot, "slot " + std::to_string(slot) +
                                 " beyond capacity " +
                                 std::to_string(keys.capacity()));
  }
  return PublicKeyShare{slot, keys.group, keys.a_exp, keys.wa_exp[slot],
                        keys.u[slot]};
}

inline PublicKeyShare PkDistribute(const MasterKeys& keys,
                                   SlotAssignments& assignments,
                                   std::string_view participant_id) {
  return PublicKeyForSlot(keys,
                          assignments.Assign(participant_id, keys.capacity()));
}

// `y` is indexed by slot; slots past y.size() carry weight 0.
inline FunctionKey SkGenerate(const MasterKeys& keys,
                              std::span<const std::int64_t> y) {
  if (y.size() > keys.capacity()) {
    Fail(ErrorCode::kDimension,
         "weight vector of length " + std::to_string(y.size()) +
             " exceeds capacity " + std::to_string(keys.capacity()));
  }
  const BigInt& order = keys.group.order;
  FunctionKey fk;
  fk.weights.assign(y.begin(), y.end());
  fk.d.reserve(y.size());
  BigInt z = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const BigInt yi = BigIntFromInt64(y[i]);
    fk.d.push_back({Mod(yi * keys.w[i][0], order), Mod(yi * keys.w[i][1], order)});
    z += yi * keys.u[i];
  }
  fk.z = Mod(z, order);
  return fk;
}

namespace internal {

// g^x for x in [0, order), using the shorter of x and order - x.
inline BigInt ExpCentered(const GroupParams& group, const BigInt& g_inv,
                          const BigInt& x) {
  if (x > group.order / 2) {
    return PowMod(g_inv, group.order - x, group.modulus);
  }
  return PowMod(group.generator, x, group.modulus);
}

}  // namespace internal

inline SlotCiphertext Encrypt(const PublicKeyShare& share,
                              std::span<const BigInt> x, NonceMode mode,
                              Rng& rng) {
  const GroupParams& group = share.group;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0 || x[j] >= group.order) {
      Fail(ErrorCode::kEncoding,
           "coordinate " + std::to_string(j) + " outside [0, order)");
    }
  }
  SlotCiphertext ct;
  ct.slot_index = share.slot_index;
  ct.mode = mode;
  ct.coord_count = x.size();
  ct.c_exp.reserve(x.size());

  const BigInt& p = group.modulus;
  const BigInt g_inv = group.Inverse(group.generator);
  const BigInt g_u = group.Exp(share.u);
  // Returns g^u * [Wa]^r and records [a r].
  auto draw_nonce = [&]() {
    const BigInt r = rng.Below(group.order);
    ct.t_exp.push_back({PowMod(share.a_exp[0], r, p),
                        PowMod(share.a_exp[1], r, p)});
    return group.Mul(g_u, PowMod(share.wa_exp, r, p));
  };

  if (mode == NonceMode::kShared) {
    const BigInt pad = draw_nonce();
    for (const BigInt& xj : x) {
      ct.c_exp.push_back(group.Mul(internal::ExpCentered(group, g_inv, xj), pad));
    }
  } else {
    ct.t_exp.reserve(x.size());
    for (const BigInt& xj : x) {
      const BigInt pad = draw_nonce();
      ct.c_exp.push_back(group.Mul(internal::ExpCentered(group, g_inv, xj), pad));
    }
  }
  return ct;
}

// Per coordinate j, the group element g^(sum_i y_i x_i[j]) before the
// discrete log is taken.
inline std::vector<BigInt> DecryptToGroup(std::span<const SlotCiphertext> cts,
                                          const FunctionKey& fk,
                                          const GroupParams& group) {
  std::set<std::size_t> wanted;
  for (std::size_t i = 0; i < fk.weights.size(); ++i) {
    if (fk.weights[i] != 0) wanted.insert(i);
  }
  std::set<std::size_t> given;
  for (const auto& ct : cts) {
    if (!given.insert(ct.slot_index).second) {
      Fail(ErrorCode::kProtocol,
           "duplicate ciphertext for slot " + std::to_string(ct.slot_index));
    }
  }
  if (given != wanted) {
    Fail(ErrorCode::kProtocol,
         "ciphertext slots do not match the function key's nonzero weights");
  }
  if (cts.empty()) return {};
  const std::size_t dim = cts.front().coord_count;
  for (const auto& ct : cts) {
    const std::size_t nonces = ct.mode == NonceMode::kShared ? 1 : dim;
    if (ct.coord_count != dim || ct.c_exp.size() != dim ||
        ct.t_exp.size() != nonces) {
      Fail(ErrorCode::kProtocol, "ciphertexts disagree on shape");
    }
  }

  const BigInt& p = group.modulus;
  auto mask_of = [&](const SlotCiphertext& ct, std::size_t j) {
    const ElementPair& t = ct.t_exp[ct.mode == NonceMode::kShared ? 0 : j];
    const ScalarPair& d = fk.d[ct.slot_index];
    return group.Mul(PowMod(t[0], d[0], p), PowMod(t[1], d[1], p));
  };
  auto weighted = [&](const SlotCiphertext& ct, std::size_t j) {
    const std::int64_t y = fk.weights[ct.slot_index];
    if (y == 1) return ct.c_exp[j];
    return group.Pow(ct.c_exp[j], BigIntFromInt64(y));
  };

  // Shared-nonce masks do not depend on j.
  std::vector<BigInt> shared_mask(cts.size());
  for (std::size_t k = 0; k < cts.size(); ++k) {
    if (cts[k].mode == NonceMode::kShared) shared_mask[k] = mask_of(cts[k], 0);
  }
  const BigInt g_z = group.Exp(fk.z);

  std::vector<BigInt> out(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    BigInt num = 1;
    BigInt den = g_z;
    for (std::size_t k = 0; k < cts.size(); ++k) {
      num = group.Mul(num, weighted(cts[k], j));
      den = group.Mul(den, cts[k].mode == NonceMode::kShared
                               ? shared_mask[k]
                               : mask_of(cts[k], j));
    }
    out[j] = group.Mul(num, group.Inverse(den));
  }
  return out;
}

// Signed inner products sum_i y_i * x_i[j], one per coordinate.
inline std::vector<std::int64_t> Decrypt(std::span<const SlotCiphertext> cts,
                                         const FunctionKey& fk,
                                         const DlogSolver& solver) {
  const GroupParams& group = solver.table().group();
  std::vector<BigInt> elements = DecryptToGroup(cts, fk, group);
  std::vector<std::int64_t> out;
  out.reserve(elements.size());
  for (const BigInt& h : elements) out.push_back(solver.Solve(h));
  return out;
}

}  // namespace fedmife

#endif  // FEDMIFE_MIFE_HPP_
