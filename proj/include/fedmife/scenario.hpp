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

#ifndef FEDMIFE_SCENARIO_HPP_
#define FEDMIFE_SCENARIO_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fedmife/errors.hpp"
#include "fedmife/learning.hpp"
#include "fedmife/protocol.hpp"
#include "json.hpp"

namespace fedmife {

struct DataSpec {
  std::string kind = "blobs";  // blobs | csv
  BlobSpec blobs;
  std::uint64_t sample_seed = 0;  // 0: derived from the run seed
  std::string path;
  std::string test_path;
  std::string label_column = "label";
  std::size_t shard_size = 100;
  std::size_t test_size = 500;
};

struct ModelSpec {
  std::string kind = "mlp";  // logistic | mlp
  std::vector<std::size_t> hidden = {16, 32};
};

struct Scenario {
  std::size_t participants = 10;  // initial participants p1..pN
  TrainingConfig config;
  ModelSpec model;
  DataSpec data;
  FaultSchedule schedule;
  std::string group_file;
  std::filesystem::path base_dir;  // relative paths resolve here
};

struct PreparedRun {
  Architecture arch;
  ModelVector initial;
  std::vector<Participant> participants;
  DatasetShard test;
};

namespace internal {

using Json = nlohmann::json;

// Semantic errors carry the line of the first occurrence of the key.
class ScenarioReader {
 public:
  ScenarioReader(std::string_view text, std::string source)
      : text_(text), source_(std::move(source)) {}

  [[noreturn]] void Error(const std::string& key, const std::string& msg) const {
    Fail(ErrorCode::kConfig, source_ + ":" + std::to_string(LineOf(key)) + ": '" +
                                 key + "' " + msg);
  }

  int LineOf(const std::string& dotted) const {
    const std::string leaf = dotted.substr(dotted.rfind('.') + 1);
    const auto pos = text_.find("\"" + leaf + "\"");
    if (pos == std::string_view::npos) return 1;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + pos, '\n'));
  }

  void CheckKeys(const Json& obj, const std::string& prefix,
                 std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) Error(prefix.empty() ? "<root>" : prefix, "must be an object");
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        Error(Join(prefix, key), "is not a recognised key");
      }
    }
  }

  template <typename T>
  void Read(const Json& obj, const std::string& prefix, const char* key, T& out) const {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    const std::string path = Join(prefix, key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) Error(path, "must be true or false");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) Error(path, "must be an integer");
        if (std::is_unsigned_v<T> && v.get<std::int64_t>() < 0) {
          Error(path, "must be non-negative");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) Error(path, "must be a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) Error(path, "must be a string");
      }
      out = v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      Error(path, e.what());
    }
  }

  static std::string Join(const std::string& prefix, std::string_view key) {
    return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
  }

 private:
  std::string_view text_;
  std::string source_;
};

}  // namespace internal

// Structured text (JSON) scenario. Parse errors report line and column;
// semantic errors report the line of the offending key.
inline Scenario ParseScenario(std::string_view text, const std::string& source = "scenario") {
  using internal::Json;
  Json root;
  try {
    root = Json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto before = text.substr(0, offset > 0 ? offset - 1 : 0);
    const auto line = 1 + std::count(before.begin(), before.end(), '\n');
    const auto nl = before.rfind('\n');
    const auto col = before.size() - (nl == std::string_view::npos ? 0 : nl + 1) + 1;
    Fail(ErrorCode::kConfig, source + ":" + std::to_string(line) + ":" +
                                 std::to_string(col) + ": malformed scenario");
  }
  const internal::ScenarioReader r(text, source);
  r.CheckKeys(root, "",
              {"participants", "epochs", "seed", "security_bits", "capacity", "threshold",
               "require_majority", "max_wait", "quorum", "precision", "mode", "baseline",
               "value_bound", "dlog_table_bound", "group_file", "dp", "model", "training",
               "data", "latency", "schedule"});
  Scenario s;
  TrainingConfig& c = s.config;
  r.Read(root, "", "participants", s.participants);
  r.Read(root, "", "epochs", c.epochs);
  r.Read(root, "", "seed", c.seed);
  r.Read(root, "", "security_bits", c.security_bits);
  r.Read(root, "", "capacity", c.capacity);
  r.Read(root, "", "threshold", c.threshold);
  r.Read(root, "", "require_majority", c.require_majority);
  r.Read(root, "", "max_wait", c.max_wait);
  r.Read(root, "", "precision", c.precision);
  r.Read(root, "", "value_bound", c.value_bound);
  r.Read(root, "", "dlog_table_bound", c.dlog_table_bound);
  r.Read(root, "", "group_file", s.group_file);
  std::string text_value;
  if (root.contains("mode")) {
    r.Read(root, "", "mode", text_value);
    try {
      c.mode = ParseNonceMode(text_value);
    } catch (const fedmife::Error&) {
      r.Error("mode", "must be fresh or shared");
    }
  }
  if (root.contains("baseline")) {
    r.Read(root, "", "baseline", text_value);
    try {
      c.privacy = ParsePrivacyMode(text_value);
    } catch (const fedmife::Error&) {
      r.Error("baseline", "must be one of none, local-dp, no-dp, dp");
    }
  }
  if (root.contains("quorum")) {
    r.Read(root, "", "quorum", text_value);
    if (text_value == "all") {
      c.quorum = QuorumPolicy::kWaitForAll;
    } else if (text_value == "first-t") {
      c.quorum = QuorumPolicy::kCloseAtQuorum;
    } else {
      r.Error("quorum", "must be all or first-t");
    }
  }
  if (root.contains("dp")) {
    const Json& dp = root["dp"];
    r.CheckKeys(dp, "dp", {"epsilon", "delta", "clip"});
    r.Read(dp, "dp", "epsilon", c.dp.epsilon);
    r.Read(dp, "dp", "delta", c.dp.delta);
    r.Read(dp, "dp", "clip", c.dp.clip_norm);
    if (!(c.dp.epsilon > 0)) r.Error("dp.epsilon", "must be > 0");
    if (!(c.dp.delta > 0 && c.dp.delta < 1)) r.Error("dp.delta", "must lie in (0, 1)");
    if (!(c.dp.clip_norm > 0)) r.Error("dp.clip", "must be > 0");
  }
  if (root.contains("model")) {
    const Json& m = root["model"];
    r.CheckKeys(m, "model", {"kind", "hidden"});
    r.Read(m, "model", "kind", s.model.kind);
    r.Read(m, "model", "hidden", s.model.hidden);
    if (s.model.kind != "logistic" && s.model.kind != "mlp") {
      r.Error("model.kind", "must be logistic or mlp");
    }
    if (s.model.kind == "mlp" && s.model.hidden.empty()) s.model.hidden = {16, 32};
    if (s.model.kind == "logistic") s.model.hidden.clear();
  }
  if (root.contains("training")) {
    const Json& t = root["training"];
    r.CheckKeys(t, "training", {"learning_rate", "batch_fraction", "local_epochs"});
    r.Read(t, "training", "learning_rate", c.train.learning_rate);
    r.Read(t, "training", "batch_fraction", c.train.batch_fraction);
    r.Read(t, "training", "local_epochs", c.train.local_epochs);
    if (!(c.train.batch_fraction > 0 && c.train.batch_fraction <= 1)) {
      r.Error("training.batch_fraction", "must lie in (0, 1]");
    }
  }
  if (root.contains("data")) {
    const Json& d = root["data"];
    r.CheckKeys(d, "data",
                {"kind", "classes", "features", "separation", "spread", "center_seed",
                 "sample_seed", "path", "test_path", "label_column", "shard_size",
                 "test_size"});
    DataSpec& ds = s.data;
    r.Read(d, "data", "kind", ds.kind);
    r.Read(d, "data", "classes", ds.blobs.classes);
    r.Read(d, "data", "features", ds.blobs.features);
    r.Read(d, "data", "separation", ds.blobs.separation);
    r.Read(d, "data", "spread", ds.blobs.spread);
    r.Read(d, "data", "center_seed", ds.blobs.center_seed);
    r.Read(d, "data", "sample_seed", ds.sample_seed);
    r.Read(d, "data", "path", ds.path);
    r.Read(d, "data", "test_path", ds.test_path);
    r.Read(d, "data", "label_column", ds.label_column);
    r.Read(d, "data", "shard_size", ds.shard_size);
    r.Read(d, "data", "test_size", ds.test_size);
    if (ds.kind != "blobs" && ds.kind != "csv") r.Error("data.kind", "must be blobs or csv");
    if (ds.kind == "csv" && ds.path.empty()) r.Error("data.kind", "csv data needs a path");
    if (ds.shard_size < 1) r.Error("data.shard_size", "must be >= 1");
  }
  if (root.contains("latency")) {
    const Json& l = root["latency"];
    r.CheckKeys(l, "latency", {"min", "max"});
    r.Read(l, "latency", "min", c.latency.min);
    r.Read(l, "latency", "max", c.latency.max);
    if (c.latency.min < 0 || c.latency.max < c.latency.min) {
      r.Error("latency.max", "needs 0 <= min <= max");
    }
  }
  if (root.contains("schedule")) {
    const Json& sch = root["schedule"];
    r.CheckKeys(sch, "schedule", {"dropouts", "stragglers", "joins"});
    auto list = [&](const char* key) -> const Json& {
      static const Json empty = Json::array();
      if (!sch.contains(key)) return empty;
      if (!sch[key].is_array()) r.Error(std::string("schedule.") + key, "must be a list");
      return sch[key];
    };
    for (const Json& d : list("dropouts")) {
      r.CheckKeys(d, "schedule.dropouts", {"participant", "from", "to"});
      DropoutEvent ev;
      r.Read(d, "schedule.dropouts", "participant", ev.participant);
      r.Read(d, "schedule.dropouts", "from", ev.first_epoch);
      ev.last_epoch = ev.first_epoch;
      r.Read(d, "schedule.dropouts", "to", ev.last_epoch);
      if (ev.participant.empty()) r.Error("schedule.dropouts", "entry needs a participant");
      s.schedule.dropouts.push_back(ev);
    }
    for (const Json& d : list("stragglers")) {
      r.CheckKeys(d, "schedule.stragglers", {"participant", "epoch", "delay"});
      StragglerEvent ev;
      r.Read(d, "schedule.stragglers", "participant", ev.participant);
      r.Read(d, "schedule.stragglers", "epoch", ev.epoch);
      r.Read(d, "schedule.stragglers", "delay", ev.delay);
      if (ev.participant.empty()) r.Error("schedule.stragglers", "entry needs a participant");
      s.schedule.stragglers.push_back(ev);
    }
    for (const Json& d : list("joins")) {
      r.CheckKeys(d, "schedule.joins", {"participant", "epoch"});
      JoinEvent ev;
      r.Read(d, "schedule.joins", "participant", ev.participant);
      r.Read(d, "schedule.joins", "epoch", ev.epoch);
      if (ev.participant.empty()) r.Error("schedule.joins", "entry needs a participant");
      if (ev.epoch < 1) r.Error("schedule.joins", "epoch must be >= 1");
      s.schedule.joins.push_back(ev);
    }
  }
  if (s.participants < 1) r.Error("participants", "must be >= 1");
  if (c.epochs < 1) r.Error("epochs", "must be >= 1");
  if (c.threshold < 1) r.Error("threshold", "must be >= 1");
  if (static_cast<std::size_t>(c.threshold) > s.participants) {
    r.Error("threshold", "exceeds the participant count");
  }
  if (s.participants > c.capacity) r.Error("capacity", "is below the participant count");
  if (c.precision < 0 || c.precision > kMaxPrecision) {
    r.Error("precision", "must lie in [0, " + std::to_string(kMaxPrecision) + "]");
  }
  if (!(c.max_wait > 0)) r.Error("max_wait", "must be > 0");
  return s;
}

inline Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = ParseScenario(buf.str(), path);
  s.base_dir = std::filesystem::path(path).parent_path();
  return s;
}

// Participant ids: p1..pN for the initial set, then every joiner named in
// the schedule that is not already among them.
inline std::vector<std::string> ScenarioParticipantIds(const Scenario& s) {
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= s.participants; ++i) ids.push_back("p" + std::to_string(i));
  std::set<std::string> initial(ids.begin(), ids.end());
  for (const auto& j : s.schedule.joins) {
    if (initial.count(j.participant)) {
      Fail(ErrorCode::kConfig, "joiner " + j.participant + " is already an initial participant");
    }
    if (std::find(ids.begin(), ids.end(), j.participant) == ids.end()) {
      ids.push_back(j.participant);
    }
  }
  return ids;
}

inline PreparedRun PrepareRun(Scenario& s) {
  PreparedRun run;
  const auto ids = ScenarioParticipantIds(s);
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return (path.is_absolute() ? path : s.base_dir / path).string();
  };
  const std::uint64_t sample_seed = s.data.sample_seed ? s.data.sample_seed : s.config.seed;
  Rng data_rng = Rng(sample_seed).Fork(0x44415441);
  DatasetShard pool;
  std::size_t classes = s.data.blobs.classes;
  if (s.data.kind == "blobs") {
    pool = MakeBlobs(s.data.blobs, ids.size() * s.data.shard_size, data_rng);
    run.test = MakeBlobs(s.data.blobs, s.data.test_size, data_rng);
  } else {
    pool = LoadCsv(resolve(s.data.path), s.data.label_column);
    if (!s.data.test_path.empty()) {
      run.test = LoadCsv(resolve(s.data.test_path), s.data.label_column);
    }
    int max_label = 0;
    for (int l : pool.labels) max_label = std::max(max_label, l);
    classes = std::max<std::size_t>(2, static_cast<std::size_t>(max_label) + 1);
  }
  const auto shards = PartitionShards(pool, ids.size(), s.data.shard_size, data_rng);
  for (std::size_t i = 0; i < ids.size(); ++i) run.participants.push_back({ids[i], shards[i]});
  run.arch = Architecture{pool.feature_dim, s.model.hidden, classes};
  Rng init_rng = Rng(s.config.seed).Fork(0x494E4954);
  run.initial = run.arch.Init(init_rng);
  if (!s.group_file.empty()) s.config.group = LoadGroup(resolve(s.group_file));
  return run;
}

}  // namespace fedmife

#endif  // FEDMIFE_SCENARIO_HPP_
