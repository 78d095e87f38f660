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

#ifndef FEDMIFE_REPORT_HPP_
#define FEDMIFE_REPORT_HPP_

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fedmife/errors.hpp"
#include "fedmife/learning.hpp"
#include "fedmife/protocol.hpp"

namespace fedmife {

inline std::string FormatDouble(double v, const char* fmt = "%.10g") {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

inline constexpr const char* kMetricsHeader =
    "epoch,status,responders,queries_sent,late,dropouts,joins,divisor,registrations,"
    "pk_distributions,key_requests,function_keys,filter_rejections,ciphertext_uploads,"
    "crypto_messages,messages,bytes_up,bytes_down,bytes_key,ct_bytes_initial,"
    "ct_bytes_subsequent,sim_start,sim_collect,sim_end,noise_std,epsilon_spent,f1";

// Deterministic under a fixed seed: phase times are simulated-clock values.
inline std::string MetricsCsv(const std::vector<EpochMetrics>& metrics) {
  std::string out = std::string(kMetricsHeader) + "\n";
  for (const auto& m : metrics) {
    out += std::to_string(m.epoch) + (m.completed ? ",completed," : ",aborted,") +
           std::to_string(m.responses_received) + "," + std::to_string(m.queries_sent) +
           "," + std::to_string(m.late_responses) + "," + std::to_string(m.dropouts) + "," +
           std::to_string(m.joins) + "," + std::to_string(m.divisor) + "," +
           std::to_string(m.registrations) + "," + std::to_string(m.pk_distributions) + "," +
           std::to_string(m.key_requests) + "," + std::to_string(m.function_keys) + "," +
           std::to_string(m.filter_rejections) + "," +
           std::to_string(m.ciphertext_uploads) + "," + std::to_string(m.crypto_messages) +
           "," + std::to_string(m.messages) + "," + std::to_string(m.bytes_up) + "," +
           std::to_string(m.bytes_down) + "," + std::to_string(m.bytes_key) + "," +
           std::to_string(m.ct_bytes_initial) + "," +
           std::to_string(m.ct_bytes_subsequent) + "," + FormatDouble(m.sim_start) + "," +
           FormatDouble(m.sim_collect) + "," + FormatDouble(m.sim_end) + "," +
           FormatDouble(m.noise_std) + "," + FormatDouble(m.epsilon_spent) + "," +
           FormatDouble(m.f1) + "\n";
  }
  return out;
}

inline constexpr const char* kTimingsHeader = "epoch,train_s,encrypt_s,decrypt_s,total_s";

// Wall-clock phase timings; machine dependent.
inline std::string TimingsCsv(const std::vector<EpochMetrics>& metrics) {
  std::string out = std::string(kTimingsHeader) + "\n";
  for (const auto& m : metrics) {
    out += std::to_string(m.epoch) + "," + FormatDouble(m.wall_train_s, "%.6f") + "," +
           FormatDouble(m.wall_encrypt_s, "%.6f") + "," +
           FormatDouble(m.wall_decrypt_s, "%.6f") + "," +
           FormatDouble(m.wall_total_s, "%.6f") + "\n";
  }
  return out;
}

// One weight per line, round-trippable.
inline std::string ModelText(const ModelVector& model) {
  std::string out;
  for (double w : model.weights) out += FormatDouble(w, "%.17g") + "\n";
  return out;
}

inline void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace fedmife

#endif  // FEDMIFE_REPORT_HPP_
