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

#ifndef FEDMIFE_PROTOCOL_HPP_
#define FEDMIFE_PROTOCOL_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fedmife/dlog.hpp"
#include "fedmife/dp.hpp"
#include "fedmife/errors.hpp"
#include "fedmife/fixedpoint.hpp"
#include "fedmife/group.hpp"
#include "fedmife/learning.hpp"
#include "fedmife/mife.hpp"
#include "fedmife/network.hpp"
#include "fedmife/serialize.hpp"
#include "fedmife/tpa.hpp"

namespace fedmife {

// none: plaintext FedAvg. local-dp: every participant adds the full Gaussian
// noise, plaintext aggregation. no-dp: encrypted aggregation without noise.
// dp: encrypted aggregation with noise split across t participants.
enum class PrivacyMode { kNone, kLocalDp, kHybridNoDp, kHybridDp };

inline std::string_view PrivacyModeName(PrivacyMode mode) {
  switch (mode) {
    case PrivacyMode::kNone: return "none";
    case PrivacyMode::kLocalDp: return "local-dp";
    case PrivacyMode::kHybridNoDp: return "no-dp";
    case PrivacyMode::kHybridDp: return "dp";
  }
  return "?";
}

inline PrivacyMode ParsePrivacyMode(std::string_view name) {
  if (name == "none" || name == "no-privacy") return PrivacyMode::kNone;
  if (name == "local-dp") return PrivacyMode::kLocalDp;
  if (name == "no-dp") return PrivacyMode::kHybridNoDp;
  if (name == "dp") return PrivacyMode::kHybridDp;
  Fail(ErrorCode::kConfig, "unknown baseline '" + std::string(name) +
                               "' (expected none|local-dp|no-dp|dp)");
}

inline bool UsesEncryption(PrivacyMode mode) {
  return mode == PrivacyMode::kHybridNoDp || mode == PrivacyMode::kHybridDp;
}

inline bool UsesNoise(PrivacyMode mode) {
  return mode == PrivacyMode::kLocalDp || mode == PrivacyMode::kHybridDp;
}

// kWaitForAll closes collection once every queried participant answered or
// max_wait elapsed. kCloseAtQuorum closes as soon as t responses arrived.
enum class QuorumPolicy { kWaitForAll, kCloseAtQuorum };

struct TrainingConfig {
  int epochs = 1;
  DpParams dp;  // min_honest is replaced by threshold
  int threshold = 5;
  double max_wait = 10.0;
  std::size_t capacity = 64;
  int precision = kDefaultPrecision;
  NonceMode mode = NonceMode::kPerCoordinate;
  std::uint64_t seed = 1;
  int security_bits = 256;
  std::optional<GroupParams> group;  // overrides security_bits
  PrivacyMode privacy = PrivacyMode::kHybridDp;
  QuorumPolicy quorum = QuorumPolicy::kWaitForAll;
  bool require_majority = false;
  // Coordinate magnitude bound used to size the dlog search when no clipping
  // applies.
  double value_bound = 8.0;
  std::int64_t dlog_table_bound = std::int64_t{1} << 16;
  TrainOptions train;
  LatencyModel latency;
  bool audit = false;  // keep plaintext responder updates for oracle checks

  DpParams noise_params() const {
    DpParams p = dp;
    p.min_honest = privacy == PrivacyMode::kHybridDp ? threshold : 1;
    return p;
  }

  void Validate(std::size_t initial_participants) const {
    if (epochs < 1) Fail(ErrorCode::kConfig, "epochs must be >= 1");
    if (threshold < 1) Fail(ErrorCode::kConfig, "threshold t must be >= 1");
    if (!(max_wait > 0)) Fail(ErrorCode::kConfig, "max_wait must be > 0");
    if (precision < 0 || precision > kMaxPrecision) {
      Fail(ErrorCode::kConfig, "precision must lie in [0, " +
                                   std::to_string(kMaxPrecision) + "]");
    }
    if (static_cast<std::size_t>(threshold) > initial_participants) {
      Fail(ErrorCode::kConfig, "threshold t exceeds the initial participant count");
    }
    if (initial_participants > capacity) {
      Fail(ErrorCode::kConfig, "more initial participants than capacity N");
    }
    if (require_majority && !MeetsHonestMajority(threshold, initial_participants)) {
      Fail(ErrorCode::kConfig, "t = " + std::to_string(threshold) +
                                   " is not an honest majority of " +
                                   std::to_string(initial_participants));
    }
    if (!(value_bound > 0)) Fail(ErrorCode::kConfig, "value_bound must be > 0");
    if (dlog_table_bound < 1) Fail(ErrorCode::kConfig, "dlog table bound must be >= 1");
    if (UsesNoise(privacy)) dp.Validate();
  }
};

struct Participant {
  std::string id;
  DatasetShard shard;
};

struct QueryMessage {
  int epoch = 0;
  std::string learning_spec;
  std::size_t party_count = 0;
  ModelVector global_model;
};

struct ResponseMessage {
  int epoch = 0;
  std::size_t slot_index = 0;
  std::optional<SlotCiphertext> ciphertext;
  std::vector<double> plaintext;  // baselines without encryption
};

struct RegisterMessage {
  std::string participant;
};

struct KeyRequestMessage {
  int epoch = 0;
  WeightedVector weights;
};

struct KeyReplyMessage {
  int epoch = 0;
  FilterVerdict verdict;
  std::optional<FunctionKey> key;
};

using ProtocolPayload = std::variant<RegisterMessage, PublicKeyShare, QueryMessage,
                                     ResponseMessage, KeyRequestMessage, KeyReplyMessage>;

inline constexpr std::string_view kAggregatorId = "aggregator";
inline constexpr std::string_view kAuthorityId = "tpa";

// Crypto message total (key shares + function keys + uploads) for n participants and m aggregators.
inline std::int64_t CryptoMessageTotal(std::int64_t n, std::int64_t m = 1) {
  return m * n + m + n;
}

struct EpochMetrics {
  int epoch = 0;
  bool completed = false;
  std::size_t queries_sent = 0;
  std::size_t responses_received = 0;
  std::size_t late_responses = 0;
  std::size_t dropouts = 0;
  std::size_t joins = 0;
  std::size_t divisor = 0;  // c_nz of the weight vector, 0 when aborted
  std::size_t registrations = 0;
  std::size_t pk_distributions = 0;
  std::size_t key_requests = 0;
  std::size_t function_keys = 0;
  std::size_t filter_rejections = 0;
  std::size_t ciphertext_uploads = 0;
  std::size_t crypto_messages = 0;
  std::size_t messages = 0;
  std::size_t bytes_up = 0;    // participants to aggregator or authority
  std::size_t bytes_down = 0;  // to participants
  std::size_t bytes_key = 0;   // aggregator <-> authority
  std::size_t ct_bytes_initial = 0;
  std::size_t ct_bytes_subsequent = 0;
  double sim_start = 0.0;
  double sim_collect = 0.0;
  double sim_end = 0.0;
  double wall_train_s = 0.0;
  double wall_encrypt_s = 0.0;
  double wall_decrypt_s = 0.0;
  double wall_total_s = 0.0;
  double noise_std = 0.0;
  double epsilon_spent = 0.0;
  double f1 = std::numeric_limits<double>::quiet_NaN();
};

struct EpochAudit {
  int epoch = 0;
  std::vector<std::string> responders;
  std::vector<ModelVector> updates;      // as encoded by each responder
  std::vector<ModelVector> raw_updates;  // before fixed-point encoding
  ModelVector global_after;
};

struct TrainingResult {
  ModelVector model;
  std::vector<EpochMetrics> metrics;
  std::vector<EpochAudit> audit;
  std::vector<TraceEntry> trace;
  GroupParams group;
  std::uint64_t master_digest = 0;        // at setup
  std::uint64_t master_digest_final = 0;  // after the last epoch
  std::map<std::string, std::uint64_t> share_digests;        // as first issued
  std::map<std::string, std::uint64_t> share_digests_final;  // reissued at the end
  std::size_t completed_epochs() const {
    return static_cast<std::size_t>(std::count_if(
        metrics.begin(), metrics.end(), [](const auto& m) { return m.completed; }));
  }
};

class TrainingFailedError : public Error {
 public:
  TrainingFailedError(const std::string& msg, std::vector<EpochMetrics> metrics)
      : Error(ErrorCode::kTrainingFailed, msg), metrics_(std::move(metrics)) {}
  const std::vector<EpochMetrics>& metrics() const { return metrics_; }

 private:
  std::vector<EpochMetrics> metrics_;
};

inline std::string LearningSpec(const Architecture& arch, const TrainOptions& opts) {
  std::ostringstream out;
  out << (arch.hidden.empty() ? "logistic" : "mlp") << ':';
  const auto widths = arch.widths();
  for (std::size_t i = 0; i < widths.size(); ++i) out << (i ? "-" : "") << widths[i];
  out << " lr=" << opts.learning_rate << " bf=" << opts.batch_fraction
      << " le=" << opts.local_epochs;
  return out.str();
}

struct ParticipantState {
  std::size_t index = 0;  // position in the participant list
  std::string id;
  const DatasetShard* shard = nullptr;
  std::optional<PublicKeyShare> share;
  int active_from = std::numeric_limits<int>::max();
};

struct StepTimings {
  double train_s = 0.0;
  double encrypt_s = 0.0;
};

namespace internal {

inline double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace internal

// local_train -> privatize -> encode -> encrypt. Randomness is derived from
// (seed, participant index, epoch) so runs replay exactly.
inline ResponseMessage ParticipantStep(const TrainingConfig& config,
                                       const Architecture& arch,
                                       const FixedPointCodec& codec,
                                       const ParticipantState& state,
                                       const QueryMessage& query,
                                       std::vector<double>* plain_out = nullptr,
                                       std::vector<double>* raw_out = nullptr,
                                       StepTimings* timings = nullptr) {
  const Rng stream = Rng(config.seed).Fork(0x5041525400000000ULL + state.index).Fork(
      static_cast<std::uint64_t>(query.epoch));
  auto start = std::chrono::steady_clock::now();
  TrainOptions opts = config.train;
  opts.seed = stream.Fork(1).NextU64();
  ModelVector local = LocalTrain(arch, query.global_model, *state.shard, opts);
  std::vector<double> update = std::move(local.weights);
  if (UsesNoise(config.privacy)) {
    Rng noise_rng = stream.Fork(2);
    update = Privatize(update, config.noise_params(), noise_rng);
  }
  if (timings) timings->train_s += internal::SecondsSince(start);
  if (raw_out) *raw_out = update;

  ResponseMessage response;
  response.epoch = query.epoch;
  if (!UsesEncryption(config.privacy)) {
    if (plain_out) *plain_out = update;
    response.plaintext = std::move(update);
    return response;
  }
  if (!state.share) Fail(ErrorCode::kProtocol, state.id + " holds no public key");
  start = std::chrono::steady_clock::now();
  const EncodedVector encoded = EncodeVector(codec, update);
  if (plain_out) {
    plain_out->resize(encoded.dim());
    for (std::size_t k = 0; k < encoded.dim(); ++k) {
      (*plain_out)[k] = static_cast<double>(codec.Center(encoded.coords[k])) /
                        static_cast<double>(codec.scale());
    }
  }
  Rng enc_rng = stream.Fork(3);
  response.slot_index = state.share->slot_index;
  response.ciphertext = Encrypt(*state.share, encoded.coords, config.mode, enc_rng);
  if (timings) timings->encrypt_s += internal::SecondsSince(start);
  return response;
}

namespace internal {

class Simulation {
 public:
  Simulation(const TrainingConfig& config, const Architecture& arch,
             const ModelVector& initial, const std::vector<Participant>& participants,
             const FaultSchedule& schedule, const DatasetShard* test_set)
      : config_(config),
        arch_(arch),
        global_(initial),
        test_set_(test_set),
        group_(config.group ? *config.group
                            : DeterministicGroup(config.security_bits, config.seed)),
        registry_(MakeRegistry()),
        codec_(config.precision, group_.order),
        bus_(config.latency, Rng(config.seed).Fork(2).NextU64()),
        spec_(LearningSpec(arch, config.train)) {
    arch_.Check(global_);
    bus_.set_faults(schedule);
    std::size_t initial_count = 0;
    for (std::size_t i = 0; i < participants.size(); ++i) {
      const Participant& p = participants[i];
      if (p.shard.feature_dim != arch.input_dim) {
        Fail(ErrorCode::kArchitecture, p.id + ": shard width does not match the model");
      }
      if (by_id_.count(p.id)) Fail(ErrorCode::kConfig, "duplicate participant " + p.id);
      by_id_[p.id] = i;
      states_.push_back(ParticipantState{i, p.id, &p.shard, std::nullopt,
                                         std::numeric_limits<int>::max()});
      const auto join = schedule.JoinEpoch(p.id);
      if (!join || *join <= 0) {
        ++initial_count;
      } else {
        joins_.emplace_back(*join, i);
      }
    }
    config_.Validate(initial_count);
    if (participants.size() > config_.capacity) {
      Fail(ErrorCode::kConfig, "participants including joiners exceed capacity N");
    }
    if (UsesEncryption(config_.privacy)) {
      table_ = std::make_shared<const DlogTable>(
          BuildDlogTable(group_, config_.dlog_table_bound));
    }
    result_.master_digest = Digest(SerializeMasterKeys(registry_.master()));
  }

  TrainingResult Run() {
    // Setup: initial participants register and receive their key shares.
    EpochMetrics setup;
    current_ = &setup;
    epoch_ = 0;
    for (const auto& st : states_) {
      const auto join = bus_.faults().JoinEpoch(st.id);
      if (!join || *join <= 0) SendRegistration(st);
    }
    Drain();
    carry_ = setup;

    for (int e = 1; e <= config_.epochs; ++e) RunEpoch(e);

    result_.model = global_;
    result_.trace = bus_.trace();
    result_.group = group_;
    result_.master_digest_final = Digest(SerializeMasterKeys(registry_.master()));
    for (const auto& [id, slot] : registry_.assignments().entries()) {
      result_.share_digests_final[id] =
          Digest(SerializePublicKeyShare(PublicKeyForSlot(registry_.master(), slot)));
    }
    if (result_.completed_epochs() == 0) {
      throw TrainingFailedError("no epoch reached the quorum of t = " +
                                    std::to_string(config_.threshold),
                                result_.metrics);
    }
    return std::move(result_);
  }

 private:
  using Bus = EventBus<ProtocolPayload>;

  KeyRegistry MakeRegistry() {
    Rng key_rng = Rng(config_.seed).Fork(1);
    return KeyRegistry::Init(group_, config_.capacity, config_.threshold, key_rng);
  }

  void RunEpoch(int e) {
    const auto wall_start = std::chrono::steady_clock::now();
    EpochMetrics m;
    m.epoch = e;
    m.registrations = carry_.registrations;
    m.pk_distributions = carry_.pk_distributions;
    m.messages = carry_.messages;
    m.bytes_up = carry_.bytes_up;
    m.bytes_down = carry_.bytes_down;
    carry_ = EpochMetrics{};
    current_ = &m;
    epoch_ = e;
    m.sim_start = bus_.now();
    responses_.clear();
    plain_updates_.clear();
    raw_updates_.clear();
    collecting_ = true;

    for (const auto& [join_epoch, idx] : joins_) {
      if (join_epoch == e) {
        ++m.joins;
        SendRegistration(states_[idx]);
      }
    }
    queried_ = 0;
    QueryMessage query{e, spec_, registry_.registered(), global_};
    const std::size_t query_bytes = 12 + spec_.size() + 8 * global_.dim();
    for (const auto& st : states_) {
      if (!st.share || st.active_from > e) continue;
      ++queried_;
      ++m.queries_sent;
      Send(std::string(kAggregatorId), st.id, "query", query_bytes, query);
    }
    timer_ = bus_.ScheduleTimer(bus_.now() + config_.max_wait, std::string(kAggregatorId), e);
    if (queried_ == 0) CloseCollection();
    Drain();
    if (collecting_) CloseCollection();
    Drain();

    m.sim_end = bus_.now();
    m.crypto_messages = m.pk_distributions + m.function_keys + m.ciphertext_uploads;
    if (UsesNoise(config_.privacy) && m.completed) {
      const double c = static_cast<double>(m.divisor);
      m.noise_std = config_.noise_params().participant_stddev() / std::sqrt(c);
    }
    const std::size_t completed_so_far =
        result_.completed_epochs() + (m.completed ? 1 : 0);
    m.epsilon_spent = UsesNoise(config_.privacy)
                          ? config_.dp.epsilon * static_cast<double>(completed_so_far)
                          : 0.0;
    if (test_set_ && test_set_->size() > 0) m.f1 = EvaluateF1(arch_, global_, *test_set_);
    m.wall_total_s = SecondsSince(wall_start);
    result_.metrics.push_back(m);
    current_ = nullptr;
  }

  void SendRegistration(const ParticipantState& st) {
    ++current_->registrations;
    Send(st.id, std::string(kAuthorityId), "register", 4 + st.id.size(),
         RegisterMessage{st.id});
  }

  bool Send(const std::string& from, const std::string& to, const std::string& kind,
            std::size_t bytes, ProtocolPayload payload) {
    EpochMetrics& m = *current_;
    ++m.messages;
    const bool from_participant = by_id_.count(from) > 0;
    const bool to_participant = by_id_.count(to) > 0;
    if (from_participant) {
      m.bytes_up += bytes;
    } else if (to_participant) {
      m.bytes_down += bytes;
    } else {
      m.bytes_key += bytes;
    }
    return bus_.Send(from, to, kind, epoch_, bytes, std::move(payload));
  }

  void Drain() {
    while (auto event = bus_.Next()) {
      if (auto* timer = std::get_if<Bus::Timer>(&*event)) {
        if (timer->tag == epoch_ && collecting_) CloseCollection();
        continue;
      }
      Handle(std::get<Bus::Message>(std::move(*event)));
    }
  }

  void Handle(Bus::Message msg) {
    EpochMetrics& m = *current_;
    if (auto* reg = std::get_if<RegisterMessage>(&msg.payload)) {
      const bool fresh = !registry_.assignments().Find(reg->participant).has_value();
      PublicKeyShare share = registry_.Register(reg->participant);
      if (fresh) {
        result_.share_digests[reg->participant] = Digest(SerializePublicKeyShare(share));
      }
      const std::size_t bytes = SerializePublicKeyShare(share).size();
      ++m.pk_distributions;
      Send(std::string(kAuthorityId), reg->participant, "public_key", bytes, std::move(share));
    } else if (auto* share = std::get_if<PublicKeyShare>(&msg.payload)) {
      ParticipantState& st = states_[by_id_.at(msg.to)];
      st.share = *share;
      st.active_from = msg.epoch + 1;
    } else if (auto* query = std::get_if<QueryMessage>(&msg.payload)) {
      ParticipantState& st = states_[by_id_.at(msg.to)];
      StepTimings timings;
      std::vector<double> plain, raw;
      ResponseMessage response = ParticipantStep(config_, arch_, codec_, st, *query,
                                                 config_.audit ? &plain : nullptr,
                                                 config_.audit ? &raw : nullptr, &timings);
      m.wall_train_s += timings.train_s;
      m.wall_encrypt_s += timings.encrypt_s;
      std::size_t bytes = 12;
      if (response.ciphertext) {
        const std::size_t ct = SerializeCiphertext(*response.ciphertext).size();
        bytes += ct;
        m.ct_bytes_initial += ct;
        ++m.ciphertext_uploads;
      } else {
        bytes += 8 * response.plaintext.size();
      }
      if (config_.audit) {
        plain_updates_[st.id] = std::move(plain);
        raw_updates_[st.id] = std::move(raw);
      }
      if (!Send(st.id, std::string(kAggregatorId), "response", bytes, std::move(response))) {
        ++m.dropouts;
      }
    } else if (auto* response = std::get_if<ResponseMessage>(&msg.payload)) {
      if (!collecting_ || response->epoch != epoch_) {
        ++m.late_responses;
        return;
      }
      responses_.emplace(msg.from, std::move(*response));
      const bool quorum_close = config_.quorum == QuorumPolicy::kCloseAtQuorum &&
                                responses_.size() >= static_cast<std::size_t>(config_.threshold);
      if (responses_.size() == queried_ || quorum_close) CloseCollection();
    } else if (auto* request = std::get_if<KeyRequestMessage>(&msg.payload)) {
      KeyResponse reply = registry_.RequestFunctionKey(request->weights);
      if (!reply.verdict) {
        Send(std::string(kAuthorityId), std::string(kAggregatorId), "key_rejected", 8,
             KeyReplyMessage{request->epoch, reply.verdict, std::nullopt});
        return;
      }
      const std::size_t bytes = SerializeFunctionKey(*reply.key).size();
      Send(std::string(kAuthorityId), std::string(kAggregatorId), "function_key", bytes,
           KeyReplyMessage{request->epoch, reply.verdict, std::move(reply.key)});
    } else if (auto* reply = std::get_if<KeyReplyMessage>(&msg.payload)) {
      if (!reply->key) {
        ++m.filter_rejections;
        return;
      }
      ++m.function_keys;
      AggregateEncrypted(*reply->key);
    }
  }

  void CloseCollection() {
    EpochMetrics& m = *current_;
    collecting_ = false;
    bus_.CancelTimer(timer_);
    m.sim_collect = bus_.now();
    m.responses_received = responses_.size();
    if (responses_.size() < static_cast<std::size_t>(config_.threshold)) return;
    if (!UsesEncryption(config_.privacy)) {
      AggregatePlain();
      return;
    }
    std::vector<std::size_t> slots;
    for (const auto& [id, r] : responses_) slots.push_back(r.slot_index);
    KeyRequestMessage request{epoch_, WeightedVector::Uniform(registry_.registered(), slots)};
    ++m.key_requests;
    const std::size_t bytes = 8 + 8 * request.weights.size();
    Send(std::string(kAggregatorId), std::string(kAuthorityId), "key_request", bytes,
         std::move(request));
  }

  void AggregatePlain() {
    std::vector<ModelVector> models;
    for (const auto& [id, r] : responses_) models.push_back({r.plaintext, global_.layout});
    std::vector<std::size_t> all(models.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Finish(PlaintextFedAvg(models, all).weights);
  }

  std::int64_t SearchBound(std::size_t responders) const {
    double bound = config_.value_bound;
    if (UsesNoise(config_.privacy)) {
      bound = config_.dp.clip_norm + 6.0 * config_.noise_params().participant_stddev();
    }
    return AggregationBound(codec_, static_cast<std::int64_t>(responders), bound);
  }

  const DlogSolver& SolverFor(std::int64_t bound) {
    auto it = solvers_.find(bound);
    if (it == solvers_.end()) {
      it = solvers_.emplace(bound, std::make_unique<DlogSolver>(table_, bound)).first;
    }
    return *it->second;
  }

  void AggregateEncrypted(const FunctionKey& key) {
    EpochMetrics& m = *current_;
    const auto start = std::chrono::steady_clock::now();
    std::vector<SlotCiphertext> cts;
    for (const auto& [id, r] : responses_) cts.push_back(*r.ciphertext);
    std::sort(cts.begin(), cts.end(),
              [](const auto& a, const auto& b) { return a.slot_index < b.slot_index; });
    const std::vector<std::int64_t> sums =
        Decrypt(cts, key, SolverFor(SearchBound(cts.size())));
    std::vector<double> average = DecodeAverage(sums, cts.size(), codec_);
    m.wall_decrypt_s += SecondsSince(start);
    Finish(std::move(average));
  }

  void Finish(std::vector<double> weights) {
    EpochMetrics& m = *current_;
    if (weights.size() != global_.dim()) {
      Fail(ErrorCode::kDimension, "aggregate does not match the model dimension");
    }
    global_.weights = std::move(weights);
    m.completed = true;
    m.divisor = responses_.size();
    if (config_.audit) {
      EpochAudit audit;
      audit.epoch = epoch_;
      for (const auto& [id, r] : responses_) {
        audit.responders.push_back(id);
        audit.updates.push_back({plain_updates_.at(id), global_.layout});
        audit.raw_updates.push_back({raw_updates_.at(id), global_.layout});
      }
      audit.global_after = global_;
      result_.audit.push_back(std::move(audit));
    }
  }

  TrainingConfig config_;
  Architecture arch_;
  ModelVector global_;
  const DatasetShard* test_set_;
  GroupParams group_;
  KeyRegistry registry_;
  FixedPointCodec codec_;
  Bus bus_;
  std::string spec_;
  std::shared_ptr<const DlogTable> table_;
  std::map<std::int64_t, std::unique_ptr<DlogSolver>> solvers_;

  std::vector<ParticipantState> states_;
  std::map<std::string, std::size_t> by_id_;
  std::vector<std::pair<int, std::size_t>> joins_;

  EpochMetrics carry_;
  EpochMetrics* current_ = nullptr;
  int epoch_ = 0;
  std::size_t queried_ = 0;
  bool collecting_ = false;
  std::uint64_t timer_ = 0;
  std::map<std::string, ResponseMessage> responses_;
  std::map<std::string, std::vector<double>> plain_updates_;
  std::map<std::string, std::vector<double>> raw_updates_;
  TrainingResult result_;
};

}  // namespace internal

// Runs the aggregator, participants and authority over the simulated network.
// Participants without a join entry register before epoch 1; joiners
// register during their join epoch and are queried from the next one.
inline TrainingResult RunTraining(const TrainingConfig& config, const Architecture& arch,
                                  const ModelVector& initial_model,
                                  const std::vector<Participant>& participants,
                                  const FaultSchedule& schedule = {},
                                  const DatasetShard* test_set = nullptr) {
  internal::Simulation sim(config, arch, initial_model, participants, schedule, test_set);
  return sim.Run();
}

}  // namespace fedmife

#endif  // FEDMIFE_PROTOCOL_HPP_
