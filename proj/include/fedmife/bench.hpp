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

#ifndef FEDMIFE_BENCH_HPP_
#define FEDMIFE_BENCH_HPP_

#include <gmp.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "fedmife/dlog.hpp"
#include "fedmife/errors.hpp"
#include "fedmife/fixedpoint.hpp"
#include "fedmife/group.hpp"
#include "fedmife/mife.hpp"
#include "fedmife/report.hpp"
#include "fedmife/serialize.hpp"
#include "json.hpp"

namespace fedmife {

enum class BenchOperation { kEncrypt, kDecrypt, kDlog, kEndToEnd };

inline BenchOperation ParseBenchOperation(std::string_view name) {
  if (name == "enc") return BenchOperation::kEncrypt;
  if (name == "dec") return BenchOperation::kDecrypt;
  if (name == "dlog") return BenchOperation::kDlog;
  if (name == "end-to-end") return BenchOperation::kEndToEnd;
  Fail(ErrorCode::kConfig, "unknown operation '" + std::string(name) +
                               "' (expected enc|dec|dlog|end-to-end)");
}

struct BenchSpec {
  BenchOperation operation = BenchOperation::kEndToEnd;
  std::vector<std::size_t> participants = {2, 4, 8, 16};
  std::size_t dim = 1000;
  std::vector<int> precisions = {kDefaultPrecision};
  int repetitions = 3;
  NonceMode mode = NonceMode::kPerCoordinate;
  int security_bits = 512;
  std::uint64_t seed = 1;
  double value_range = 0.01;  // plaintext coordinates drawn from [-range, range]

  void Validate() const {
    if (repetitions < 3) Fail(ErrorCode::kConfig, "repetitions must be >= 3");
    if (dim < 1) Fail(ErrorCode::kConfig, "dim must be >= 1");
    if (precisions.empty()) Fail(ErrorCode::kConfig, "no precision given");
    for (int p : precisions) {
      if (p < 0 || p > kMaxPrecision) Fail(ErrorCode::kConfig, "precision out of range");
    }
    for (std::size_t n : participants) {
      if (n < 1) Fail(ErrorCode::kConfig, "participant counts must be >= 1");
    }
    if (!(value_range > 0)) Fail(ErrorCode::kConfig, "value_range must be > 0");
  }
};

// Medians over repetitions. enc_avg_s is per participant; dec_s covers the
// whole aggregate including the discrete logs (or only them for kDlog).
struct BenchRow {
  std::size_t participants = 0;
  std::size_t dim = 0;
  int precision = 0;
  double enc_avg_s = 0.0;
  double dec_s = 0.0;
  std::size_t ct_bytes_initial = 0;
  std::size_t ct_bytes_subsequent = 0;
};

inline constexpr const char* kBenchHeader =
    "participants,dim,precision,enc_avg_s,dec_s,ct_bytes_initial,ct_bytes_subsequent";

inline std::string BenchCsv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kBenchHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.participants) + "," + std::to_string(r.dim) + "," +
           std::to_string(r.precision) + "," + FormatDouble(r.enc_avg_s, "%.6f") + "," +
           FormatDouble(r.dec_s, "%.6f") + "," + std::to_string(r.ct_bytes_initial) + "," +
           std::to_string(r.ct_bytes_subsequent) + "\n";
  }
  return out;
}

inline double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

class BenchRunner {
 public:
  static constexpr std::size_t kEncryptSlice = 100;
  static constexpr std::size_t kDecryptSlice = 50;

  explicit BenchRunner(BenchSpec spec) : spec_(std::move(spec)) {
    spec_.Validate();
    std::size_t capacity = 1;
    for (std::size_t n : spec_.participants) capacity = std::max(capacity, n);
    if (!spec_.participants.empty()) {
      group_ = DeterministicGroup(spec_.security_bits, spec_.seed);
      Rng rng = Rng(spec_.seed).Fork(1);
      keys_ = std::make_unique<MasterKeys>(MifeSetup(group_, capacity, rng));
    }
  }

  const GroupParams& group() const { return group_; }

  BenchRow Run(std::size_t n, int precision) { return RunSweep({{n, precision}}).front(); }

  // Timing is interleaved across configurations at a fine grain: encryption
  // one participant at a time, decryption one coordinate slice at a time.
  // Drift in machine speed then lands on every row alike. Decryption is
  // independent per coordinate, so the summed slices do the same work as one
  // whole-vector call plus one g^z per slice.
  std::vector<BenchRow> RunSweep(const std::vector<std::pair<std::size_t, int>>& configs) {
    std::vector<Case> cases;
    cases.reserve(configs.size());
    for (const auto& [n, p] : configs) cases.push_back(Prepare(n, p));
    for (int rep = 0; rep < spec_.repetitions; ++rep) TimeRound(cases, rep);
    std::vector<BenchRow> rows;
    for (Case& c : cases) {
      c.row.enc_avg_s = Median(c.enc_times);
      c.row.dec_s = Median(c.dec_times);
      rows.push_back(c.row);
    }
    return rows;
  }

  // Participant sweep at every precision; empty participant list yields no rows.
  std::vector<BenchRow> RunAll() {
    std::vector<std::pair<std::size_t, int>> configs;
    for (int p : spec_.precisions) {
      for (std::size_t n : spec_.participants) configs.emplace_back(n, p);
    }
    return RunSweep(configs);
  }

 private:
  struct Case {
    std::vector<std::vector<BigInt>> inputs;
    std::vector<std::int64_t> expected;
    std::unique_ptr<DlogSolver> solver;
    std::vector<PublicKeyShare> shares;
    FunctionKey fk;
    BenchRow row;
    std::vector<double> enc_times;
    std::vector<double> dec_times;
  };

  Case Prepare(std::size_t n, int precision) const {
    Case c;
    const FixedPointCodec codec(precision, group_.order);
    Rng data_rng = Rng(spec_.seed).Fork(0x42454E43).Fork(n * 100 + precision);
    c.inputs.resize(n);
    c.expected.assign(spec_.dim, 0);
    for (auto& x : c.inputs) {
      std::vector<double> values(spec_.dim);
      for (double& v : values) v = spec_.value_range * (2.0 * data_rng.Uniform01() - 1.0);
      x = EncodeVector(codec, values).coords;
      for (std::size_t j = 0; j < spec_.dim; ++j) c.expected[j] += codec.Center(x[j]);
    }
    const std::int64_t bound =
        AggregationBound(codec, static_cast<std::int64_t>(n), spec_.value_range);
    c.solver = std::make_unique<DlogSolver>(
        std::make_shared<const DlogTable>(BuildDlogTable(group_, bound)), bound);
    SlotAssignments slots;
    for (std::size_t i = 0; i < n; ++i) {
      c.shares.push_back(PkDistribute(*keys_, slots, "bench" + std::to_string(i)));
    }
    c.fk = SkGenerate(*keys_, std::vector<std::int64_t>(n, 1));
    c.row = BenchRow{n, spec_.dim, precision, 0.0, 0.0, 0, 0};
    return c;
  }

  static SlotCiphertext Slice(const SlotCiphertext& ct, std::size_t lo, std::size_t hi) {
    SlotCiphertext out;
    out.slot_index = ct.slot_index;
    out.mode = ct.mode;
    out.coord_count = hi - lo;
    out.c_exp.assign(ct.c_exp.begin() + lo, ct.c_exp.begin() + hi);
    if (ct.mode == NonceMode::kShared) {
      out.t_exp = ct.t_exp;
    } else {
      out.t_exp.assign(ct.t_exp.begin() + lo, ct.t_exp.begin() + hi);
    }
    return out;
  }

  static void Append(SlotCiphertext& whole, SlotCiphertext part) {
    if (whole.coord_count == 0) {
      whole = std::move(part);
      return;
    }
    whole.coord_count += part.coord_count;
    whole.c_exp.insert(whole.c_exp.end(), part.c_exp.begin(), part.c_exp.end());
    whole.t_exp.insert(whole.t_exp.end(), part.t_exp.begin(), part.t_exp.end());
  }

  void TimeRound(std::vector<Case>& cases, int rep) const {
    std::size_t max_n = 0;
    for (const Case& c : cases) max_n = std::max(max_n, c.shares.size());
    std::vector<std::vector<SlotCiphertext>> cts(cases.size());
    std::vector<double> enc(cases.size(), 0.0), dec(cases.size(), 0.0);
    std::vector<Rng> rngs;
    for (std::size_t k = 0; k < cases.size(); ++k) {
      rngs.push_back(Rng(spec_.seed).Fork(0x454E43).Fork(rep).Fork(k));
    }
    // Per-coordinate nonces make slice-wise encryption identical to a
    // whole-vector call; a shared nonce must cover the whole vector.
    const std::size_t enc_slice =
        spec_.mode == NonceMode::kPerCoordinate ? kEncryptSlice : spec_.dim;
    for (std::size_t i = 0; i < max_n; ++i) {
      std::vector<SlotCiphertext> pending(cases.size());
      for (std::size_t lo = 0; lo < spec_.dim; lo += enc_slice) {
        const std::size_t hi = std::min(spec_.dim, lo + enc_slice);
        for (std::size_t k = 0; k < cases.size(); ++k) {
          Case& c = cases[k];
          if (i >= c.shares.size()) continue;
          const std::span<const BigInt> x(c.inputs[i].data() + lo, hi - lo);
          const auto start = std::chrono::steady_clock::now();
          SlotCiphertext part = Encrypt(c.shares[i], x, spec_.mode, rngs[k]);
          enc[k] += Seconds(start);
          Append(pending[k], std::move(part));
        }
      }
      for (std::size_t k = 0; k < cases.size(); ++k) {
        if (i < cases[k].shares.size()) cts[k].push_back(std::move(pending[k]));
      }
    }
    for (std::size_t k = 0; k < cases.size(); ++k) {
      Case& c = cases[k];
      c.enc_times.push_back(enc[k] / static_cast<double>(c.shares.size()));
      if (rep == 0) {
        for (const auto& ct : cts[k]) c.row.ct_bytes_initial += SerializeCiphertext(ct).size();
      }
    }
    if (spec_.operation == BenchOperation::kEncrypt) return;

    std::vector<std::vector<std::int64_t>> sums(cases.size());
    for (std::size_t lo = 0; lo < spec_.dim; lo += kDecryptSlice) {
      const std::size_t hi = std::min(spec_.dim, lo + kDecryptSlice);
      for (std::size_t k = 0; k < cases.size(); ++k) {
        const Case& c = cases[k];
        std::vector<SlotCiphertext> part;
        for (const auto& ct : cts[k]) part.push_back(Slice(ct, lo, hi));
        std::vector<std::int64_t> got;
        if (spec_.operation == BenchOperation::kDlog) {
          const std::vector<BigInt> elements = DecryptToGroup(part, c.fk, group_);
          const auto start = std::chrono::steady_clock::now();
          for (const BigInt& h : elements) got.push_back(c.solver->Solve(h));
          dec[k] += Seconds(start);
        } else {
          const auto start = std::chrono::steady_clock::now();
          got = Decrypt(part, c.fk, *c.solver);
          dec[k] += Seconds(start);
        }
        sums[k].insert(sums[k].end(), got.begin(), got.end());
      }
    }
    for (std::size_t k = 0; k < cases.size(); ++k) {
      if (sums[k] != cases[k].expected) {
        Fail(ErrorCode::kProtocol, "benchmark decryption mismatch");
      }
      cases[k].dec_times.push_back(dec[k]);
    }
  }

  static double Seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  BenchSpec spec_;
  GroupParams group_;
  std::unique_ptr<MasterKeys> keys_;
};

inline std::vector<BenchRow> RunBench(const BenchSpec& spec) {
  return BenchRunner(spec).RunAll();
}

// Hardware and build metadata recorded next to benchmark results.
inline std::string BenchMetaJson(const BenchSpec& spec) {
  nlohmann::ordered_json j;
  std::string cpu = "unknown";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      cpu = line.substr(line.find(':') + 2);
      break;
    }
  }
  j["cpu"] = cpu;
  j["hardware_threads"] = std::thread::hardware_concurrency();
  j["worker_threads"] = 1;
#if defined(__VERSION__)
  j["compiler"] = __VERSION__;
#endif
  j["gmp_version"] = gmp_version;
  j["security_bits"] = spec.security_bits;
  j["mode"] = std::string(NonceModeName(spec.mode));
  j["dim"] = spec.dim;
  j["repetitions"] = spec.repetitions;
  j["seed"] = spec.seed;
  j["value_range"] = spec.value_range;
  return j.dump(2) + "\n";
}

}  // namespace fedmife

#endif  // FEDMIFE_BENCH_HPP_
