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

#include "fedmife/tpa.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "fedmife/serialize.hpp"

namespace fedmife {
namespace {

// Direct restatement of the two checks on reduced fractions.
bool ReferenceFilter(const WeightedVector& w, int t) {
  std::int64_t c_nz = 0;
  for (auto n : w.numerators) c_nz += n != 0;
  if (c_nz < t) return false;
  for (auto n : w.numerators) {
    if (n == 0) continue;
    std::int64_t num = n, den = w.denominator;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (den == 0) return false;
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num /= g;
    den /= g;
    if (num != 1 || den != c_nz) return false;
  }
  return true;
}

WeightedVector Vec(std::vector<std::int64_t> nums, std::int64_t den) {
  return WeightedVector{std::move(nums), den};
}

std::vector<std::size_t> Range(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

TEST(FilterTest, SinglingOutVectorRejected) {
  const auto v = InferencePreventionFilter(Vec({0, 0, 1, 0, 0, 0, 0, 0, 0, 0}, 1), 5);
  EXPECT_FALSE(v);
  EXPECT_EQ(v.reason, FilterReason::kTooFewNonzero);
}

TEST(FilterTest, UniformSupersetAccepted) {
  std::vector<std::size_t> seven{0, 2, 3, 5, 6, 8, 9};
  const auto w = WeightedVector::Uniform(10, seven);
  EXPECT_EQ(w.denominator, 7);
  EXPECT_TRUE(InferencePreventionFilter(w, 5));
}

TEST(FilterTest, ShrunkenAndSkewedVectorsRejected) {
  EXPECT_EQ(InferencePreventionFilter(Vec({1, 1, 1, 1, 0, 0, 0, 0, 0, 0}, 4), 5).reason,
            FilterReason::kTooFewNonzero);
  // (1/2, 1/4, 1/8, 1/8, 1/8): five nonzero, not uniform.
  EXPECT_EQ(InferencePreventionFilter(Vec({4, 2, 1, 1, 1, 0, 0, 0, 0, 0}, 8), 5).reason,
            FilterReason::kNonUniform);
  // Equal but wrong magnitude: 1/10 each on 5 entries.
  EXPECT_EQ(InferencePreventionFilter(Vec({1, 1, 1, 1, 1}, 10), 5).reason,
            FilterReason::kNonUniform);
  // Scaled representation of 1/5 is fine.
  EXPECT_TRUE(InferencePreventionFilter(Vec({2, 2, 2, 2, 2}, 10), 5));
  EXPECT_EQ(InferencePreventionFilter(Vec({1, 1, 1, 1, -1}, 5), 5).reason,
            FilterReason::kNonUniform);
}

TEST(FilterTest, MatchesReferenceOnRandomVectors) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + rng.NextU64() % 16;
    const int t = 1 + static_cast<int>(rng.NextU64() % 10);
    WeightedVector w;
    w.numerators.assign(n, 0);
    const std::uint64_t kind = rng.NextU64() % 3;
    if (kind == 0) {
      // Uniform over a random support, possibly scaled.
      std::int64_t count = 0;
      for (auto& v : w.numerators) {
        if (rng.NextU64() % 2) {
          v = 1;
          ++count;
        }
      }
      const std::int64_t k = 1 + static_cast<std::int64_t>(rng.NextU64() % 3);
      for (auto& v : w.numerators) v *= k;
      w.denominator = std::max<std::int64_t>(1, count * k);
    } else {
      for (auto& v : w.numerators) {
        v = static_cast<std::int64_t>(rng.NextU64() % 5) - (kind == 2 ? 2 : 0);
      }
      w.denominator = 1 + static_cast<std::int64_t>(rng.NextU64() % 20);
    }
    const FilterVerdict verdict = InferencePreventionFilter(w, t);
    ASSERT_EQ(verdict.accepted(), ReferenceFilter(w, t)) << "case " << i;
    if (verdict) {
      ASSERT_GE(verdict.nonzero, static_cast<std::size_t>(t));
    }
    // Monotone: rejected at t stays rejected for larger t.
    if (!verdict) {
      for (int t2 = t + 1; t2 <= t + 5; ++t2) {
        ASSERT_FALSE(InferencePreventionFilter(w, t2));
      }
    }
  }
}

TEST(FilterTest, HonestMajorityRule) {
  EXPECT_TRUE(MeetsHonestMajority(6, 10));
  EXPECT_FALSE(MeetsHonestMajority(5, 10));
  EXPECT_TRUE(MeetsHonestMajority(6, 11));
  EXPECT_TRUE(MeetsHonestMajority(1, 1));
}

class RegistryTest : public ::testing::Test {
 protected:
  static const GroupParams& Group() {
    static const GroupParams g = GroupSetup(128, 555);
    return g;
  }
};

TEST_F(RegistryTest, InitProvisionsUnassignedSlots) {
  Rng rng(1);
  const KeyRegistry reg = KeyRegistry::Init(Group(), 64, 5, rng);
  EXPECT_EQ(reg.capacity(), 64u);
  EXPECT_EQ(reg.registered(), 0u);
  EXPECT_EQ(reg.threshold(), 5);
  Rng rng2(2);
  const KeyRegistry one = KeyRegistry::Init(Group(), 1, 1, rng2);
  EXPECT_EQ(one.capacity(), 1u);
}

TEST_F(RegistryTest, InvalidThresholdIsConfigError) {
  Rng rng(1);
  try {
    KeyRegistry::Init(Group(), 64, 0, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  EXPECT_THROW(KeyRegistry::Init(Group(), 4, 5, rng), Error);
}

TEST_F(RegistryTest, LateJoinLeavesExistingSharesUntouched) {
  Rng rng(3);
  KeyRegistry reg = KeyRegistry::Init(Group(), 64, 5, rng);
  std::vector<std::string> before;
  for (int i = 1; i <= 10; ++i) {
    before.push_back(SerializePublicKeyShare(reg.Register("p" + std::to_string(i))));
  }
  const std::uint64_t master = Digest(SerializeMasterKeys(reg.master()));
  const PublicKeyShare late = reg.Register("p11");
  EXPECT_EQ(late.slot_index, 10u);
  for (int i = 1; i <= 10; ++i) {
    EXPECT_EQ(SerializePublicKeyShare(reg.Register("p" + std::to_string(i))), before[i - 1]);
  }
  EXPECT_EQ(Digest(SerializeMasterKeys(reg.master())), master);
  EXPECT_EQ(reg.Register("p11"), late);
}

TEST_F(RegistryTest, FullRegistryRejectsJoin) {
  Rng rng(4);
  KeyRegistry reg = KeyRegistry::Init(Group(), 2, 1, rng);
  reg.Register("a");
  reg.Register("b");
  try {
    reg.Register("c");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSlot);
  }
}

class KeyIssueTest : public RegistryTest {
 protected:
  void SetUp() override {
    Rng rng(10);
    reg_ = std::make_unique<KeyRegistry>(KeyRegistry::Init(Group(), 64, 5, rng));
    for (int i = 1; i <= 10; ++i) shares_.push_back(reg_->Register("p" + std::to_string(i)));
    Rng data(11);
    for (int i = 0; i < 10; ++i) {
      values_.push_back(static_cast<std::int64_t>(data.NextU64() % 2001) - 1000);
    }
  }

  std::vector<SlotCiphertext> Encrypted(const std::vector<std::size_t>& slots) {
    Rng rng(12);
    std::vector<SlotCiphertext> out;
    for (std::size_t s : slots) {
      const std::int64_t v = values_[s];
      const BigInt x = v < 0 ? BigInt(Group().order + v) : BigInt(v);
      out.push_back(Encrypt(shares_[s], std::vector<BigInt>{x}, NonceMode::kPerCoordinate, rng));
    }
    return out;
  }

  std::unique_ptr<KeyRegistry> reg_;
  std::vector<PublicKeyShare> shares_;
  std::vector<std::int64_t> values_;
  DlogSolver solver_{BuildDlogTable(Group(), 1 << 10), 1 << 16};
};

TEST_F(KeyIssueTest, UniformVectorOverAllResponders) {
  const auto all = Range(10);
  const KeyResponse resp = reg_->RequestFunctionKey(WeightedVector::Uniform(10, all));
  ASSERT_TRUE(resp.key);
  EXPECT_EQ(resp.key->weights, std::vector<std::int64_t>(10, 1));
  const std::int64_t expected = std::accumulate(values_.begin(), values_.end(), std::int64_t{0});
  EXPECT_EQ(Decrypt(Encrypted(all), *resp.key, solver_), std::vector<std::int64_t>{expected});
}

TEST_F(KeyIssueTest, ColluderVectorRejectedAtSix) {
  Rng rng(20);
  KeyRegistry strict = KeyRegistry::Init(Group(), 64, 6, rng);
  for (int i = 1; i <= 10; ++i) strict.Register("p" + std::to_string(i));
  // Target slot 0 plus four colluders; the five honest slots are zeroed.
  const std::vector<std::size_t> crafted{0, 6, 7, 8, 9};
  const KeyResponse resp = strict.RequestFunctionKey(WeightedVector::Uniform(10, crafted));
  EXPECT_FALSE(resp.key);
  EXPECT_EQ(resp.verdict.reason, FilterReason::kTooFewNonzero);
}

TEST_F(KeyIssueTest, DropoutNeedsNoRekeying) {
  const std::uint64_t master = Digest(SerializeMasterKeys(reg_->master()));
  const std::vector<std::size_t> seven{0, 1, 2, 4, 5, 7, 9};
  const KeyResponse resp = reg_->RequestFunctionKey(WeightedVector::Uniform(10, seven));
  ASSERT_TRUE(resp.key);
  std::int64_t expected = 0;
  for (std::size_t s : seven) expected += values_[s];
  EXPECT_EQ(Decrypt(Encrypted(seven), *resp.key, solver_), std::vector<std::int64_t>{expected});
  EXPECT_EQ(Digest(SerializeMasterKeys(reg_->master())), master);
}

TEST_F(KeyIssueTest, KeyBindsToAcceptedSlotSet) {
  const std::vector<std::size_t> seven{0, 1, 2, 3, 4, 5, 6};
  const KeyResponse resp = reg_->RequestFunctionKey(WeightedVector::Uniform(10, seven));
  ASSERT_TRUE(resp.key);
  for (const auto& subset : {std::vector<std::size_t>{0, 1, 2, 3, 4, 5},
                             std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7}}) {
    try {
      Decrypt(Encrypted(subset), *resp.key, solver_);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocol);
    }
  }
}

TEST_F(KeyIssueTest, WeightOnUnassignedSlotIsProtocolError) {
  const std::vector<std::size_t> slots{0, 1, 2, 3, 11};
  try {
    reg_->RequestFunctionKey(WeightedVector::Uniform(12, slots));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

}  // namespace
}  // namespace fedmife
