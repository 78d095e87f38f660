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

#include "fedmife/bench.hpp"

#include <gtest/gtest.h>

#include <string>

namespace fedmife {
namespace {

BenchSpec SmallSpec() {
  BenchSpec spec;
  spec.participants = {1, 3};
  spec.dim = 8;
  spec.precisions = {2, 6};
  spec.security_bits = 128;
  return spec;
}

TEST(BenchTest, RowsAndDeterministicBytes) {
  const auto rows = RunBench(SmallSpec());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].participants, 1u);
  EXPECT_EQ(rows[1].participants, 3u);
  EXPECT_EQ(rows[2].precision, 6);
  for (const auto& r : rows) {
    EXPECT_EQ(r.ct_bytes_subsequent, 0u);
    EXPECT_GT(r.enc_avg_s, 0.0);
    EXPECT_GT(r.dec_s, 0.0);
  }
  EXPECT_GT(rows[1].ct_bytes_initial, 2 * rows[0].ct_bytes_initial);
  const auto again = RunBench(SmallSpec());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].ct_bytes_initial, again[i].ct_bytes_initial);
  }
}

TEST(BenchTest, SharedNonceShrinksCiphertexts) {
  BenchSpec spec = SmallSpec();
  spec.precisions = {4};
  const auto fresh = RunBench(spec);
  spec.mode = NonceMode::kShared;
  const auto shared = RunBench(spec);
  EXPECT_LT(shared[0].ct_bytes_initial, fresh[0].ct_bytes_initial);
}

TEST(BenchTest, EmptyParticipantListGivesHeaderOnly) {
  BenchSpec spec = SmallSpec();
  spec.participants.clear();
  EXPECT_EQ(BenchCsv(RunBench(spec)), std::string(kBenchHeader) + "\n");
}

TEST(BenchTest, EncryptOnlySkipsDecryption) {
  BenchSpec spec = SmallSpec();
  spec.operation = ParseBenchOperation("enc");
  EXPECT_EQ(RunBench(spec)[0].dec_s, 0.0);
  spec.operation = ParseBenchOperation("dlog");
  EXPECT_GT(RunBench(spec)[0].dec_s, 0.0);
  EXPECT_THROW(ParseBenchOperation("sign"), Error);
}

TEST(BenchTest, SpecValidation) {
  BenchSpec spec = SmallSpec();
  spec.repetitions = 2;
  EXPECT_THROW(RunBench(spec), Error);
  spec = SmallSpec();
  spec.precisions = {16};
  EXPECT_THROW(RunBench(spec), Error);
}

TEST(BenchTest, MedianHandlesOddAndEven) {
  EXPECT_DOUBLE_EQ(Median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(Median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(BenchTest, MetaRecordsHardware) {
  const std::string meta = BenchMetaJson(SmallSpec());
  EXPECT_NE(meta.find("\"cpu\""), std::string::npos);
  EXPECT_NE(meta.find("\"gmp_version\""), std::string::npos);
}

}  // namespace
}  // namespace fedmife
