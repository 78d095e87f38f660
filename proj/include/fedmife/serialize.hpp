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

#ifndef FEDMIFE_SERIALIZE_HPP_
#define FEDMIFE_SERIALIZE_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"
#include "fedmife/group.hpp"
#include "fedmife/mife.hpp"

namespace fedmife {

// Wire encoding for keys and ciphertexts. Integers are fixed-width
// big-endian; big integers are a u32 byte length followed by big-endian
// magnitude bytes. Byte counts from this encoding drive the traffic metrics.

class ByteWriter {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }

  void U32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
      out_.push_back(static_cast<char>((v >> shift) & 0xff));
    }
  }

  void I64(std::int64_t v) {
    const auto u = static_cast<std::uint64_t>(v);
    for (int shift = 56; shift >= 0; shift -= 8) {
      out_.push_back(static_cast<char>((u >> shift) & 0xff));
    }
  }

  void Big(const BigInt& v) {
    const std::string bytes = ToBytes(v);
    U32(static_cast<std::uint32_t>(bytes.size()));
    out_ += bytes;
  }

  void Group(const GroupParams& g) {
    Big(g.modulus);
    Big(g.order);
    Big(g.generator);
    U32(static_cast<std::uint32_t>(g.security_bits));
  }

  const std::string& bytes() const { return out_; }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  std::uint8_t U8() { return static_cast<std::uint8_t>(Take(1)[0]); }

  std::uint32_t U32() {
    std::string_view b = Take(4);
    std::uint32_t v = 0;
    for (char c : b) v = (v << 8) | static_cast<std::uint8_t>(c);
    return v;
  }

  std::int64_t I64() {
    std::string_view b = Take(8);
    std::uint64_t v = 0;
    for (char c : b) v = (v << 8) | static_cast<std::uint8_t>(c);
    return static_cast<std::int64_t>(v);
  }

  BigInt Big() { return FromBytes(Take(U32())); }

  GroupParams Group() {
    GroupParams g;
    g.modulus = Big();
    g.order = Big();
    g.generator = Big();
    g.security_bits = static_cast<int>(U32());
    return g;
  }

  bool done() const { return pos_ == in_.size(); }

  void ExpectDone() const {
    if (!done()) Fail(ErrorCode::kSerialization, "trailing bytes");
  }

 private:
  std::string_view Take(std::size_t n) {
    if (in_.size() - pos_ < n) Fail(ErrorCode::kSerialization, "truncated input");
    std::string_view out = in_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

inline std::string SerializeCiphertext(const SlotCiphertext& ct) {
  ByteWriter w;
  w.U32(static_cast<std::uint32_t>(ct.slot_index));
  w.U8(static_cast<std::uint8_t>(ct.mode));
  w.U32(static_cast<std::uint32_t>(ct.coord_count));
  w.U32(static_cast<std::uint32_t>(ct.t_exp.size()));
  for (const auto& t : ct.t_exp) {
    w.Big(t[0]);
    w.Big(t[1]);
  }
  for (const auto& c : ct.c_exp) w.Big(c);
  return w.Take();
}

inline SlotCiphertext DeserializeCiphertext(std::string_view bytes) {
  ByteReader r(bytes);
  SlotCiphertext ct;
  ct.slot_index = r.U32();
  const std::uint8_t mode = r.U8();
  if (mode > 1) Fail(ErrorCode::kSerialization, "unknown nonce mode byte");
  ct.mode = static_cast<NonceMode>(mode);
  ct.coord_count = r.U32();
  const std::uint32_t nonces = r.U32();
  const std::size_t expected =
      ct.mode == NonceMode::kShared ? 1 : ct.coord_count;
  if (nonces != expected) {
    Fail(ErrorCode::kSerialization, "nonce count does not match mode");
  }
  ct.t_exp.resize(nonces);
  for (auto& t : ct.t_exp) {
    t[0] = r.Big();
    t[1] = r.Big();
  }
  ct.c_exp.resize(ct.coord_count);
  for (auto& c : ct.c_exp) c = r.Big();
  r.ExpectDone();
  return ct;
}

inline std::string SerializePublicKeyShare(const PublicKeyShare& pk) {
  ByteWriter w;
  w.U32(static_cast<std::uint32_t>(pk.slot_index));
  w.Group(pk.group);
  w.Big(pk.a_exp[0]);
  w.Big(pk.a_exp[1]);
  w.Big(pk.wa_exp);
  w.Big(pk.u);
  return w.Take();
}

inline PublicKeyShare DeserializePublicKeyShare(std::string_view bytes) {
  ByteReader r(bytes);
  PublicKeyShare pk;
  pk.slot_index = r.U32();
  pk.group = r.Group();
  pk.a_exp[0] = r.Big();
  pk.a_exp[1] = r.Big();
  pk.wa_exp = r.Big();
  pk.u = r.Big();
  r.ExpectDone();
  return pk;
}

inline std::string SerializeFunctionKey(const FunctionKey& fk) {
  ByteWriter w;
  w.U32(static_cast<std::uint32_t>(fk.weights.size()));
  for (std::size_t i = 0; i < fk.weights.size(); ++i) {
    w.I64(fk.weights[i]);
    w.Big(fk.d[i][0]);
    w.Big(fk.d[i][1]);
  }
  w.Big(fk.z);
  return w.Take();
}

inline FunctionKey DeserializeFunctionKey(std::string_view bytes) {
  ByteReader r(bytes);
  FunctionKey fk;
  const std::uint32_t n = r.U32();
  fk.weights.resize(n);
  fk.d.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    fk.weights[i] = r.I64();
    fk.d[i][0] = r.Big();
    fk.d[i][1] = r.Big();
  }
  fk.z = r.Big();
  r.ExpectDone();
  return fk;
}

inline std::string SerializeMasterKeys(const MasterKeys& keys) {
  ByteWriter w;
  w.Group(keys.group);
  w.Big(keys.a);
  w.Big(keys.a_exp[0]);
  w.Big(keys.a_exp[1]);
  w.U32(static_cast<std::uint32_t>(keys.capacity()));
  for (std::size_t i = 0; i < keys.capacity(); ++i) {
    w.Big(keys.w[i][0]);
    w.Big(keys.w[i][1]);
    w.Big(keys.u[i]);
    w.Big(keys.wa_exp[i]);
  }
  return w.Take();
}

// FNV-1a over the wire bytes; used to show key material is unchanged.
inline std::uint64_t Digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fedmife

#endif  // FEDMIFE_SERIALIZE_HPP_
