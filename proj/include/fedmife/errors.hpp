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

#ifndef FEDMIFE_ERRORS_HPP_
#define FEDMIFE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fedmife {

// Machine-readable failure category carried by every exception the library
// throws.
enum class ErrorCode {
  kInvalidArgument,
  kSetup,              // group / prime generation exhausted its retry budget
  kCapacity,           // a configured memory cap would be exceeded
  kNoSlot,             // every provisioned MIFE slot is already assigned
  kDimension,          // vector length does not match the key material
  kEncoding,           // value cannot be represented in Z_order
  kAggregationBound,   // decrypted exponent outside the dlog search window
  kProtocol,           // ciphertext set does not match the function key
  kFilterRejected,     // inference-prevention filter refused a weight vector
  kConfig,             // malformed configuration or scenario
  kArchitecture,       // model vector does not fit the trainer
  kSerialization,      // truncated or malformed wire bytes
  kTrainingFailed,     // no epoch reached quorum
  kIo,
};

constexpr std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kSetup: return "setup";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kNoSlot: return "no-slot";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kEncoding: return "encoding";
    case ErrorCode::kAggregationBound: return "aggregation-bound";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kFilterRejected: return "filter-rejected";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kArchitecture: return "architecture";
    case ErrorCode::kSerialization: return "serialization";
    case ErrorCode::kTrainingFailed: return "training-failed";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fedmife

#endif  // FEDMIFE_ERRORS_HPP_
