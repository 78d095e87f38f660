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

#ifndef FEDMIFE_NETWORK_HPP_
#define FEDMIFE_NETWORK_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"

namespace fedmife {

// Uniform per-message latency in simulated time units.
struct LatencyModel {
  double min = 0.1;
  double max = 1.0;

  double Sample(Rng& rng) const {
    if (max <= min) return min;
    return min + (max - min) * rng.Uniform01();
  }
};

// Participant-level faults keyed by epoch. Dropped participants lose their
// upstream messages; stragglers have them delayed.
struct DropoutEvent {
  std::string participant;
  int first_epoch = 1;
  int last_epoch = 1;  // inclusive; < 0 means for the rest of training
};

struct StragglerEvent {
  std::string participant;
  int epoch = 1;
  double delay = 0.0;
};

struct JoinEvent {
  std::string participant;
  int epoch = 1;
};

struct FaultSchedule {
  std::vector<DropoutEvent> dropouts;
  std::vector<StragglerEvent> stragglers;
  std::vector<JoinEvent> joins;

  bool Drops(const std::string& from, int epoch) const {
    return std::any_of(dropouts.begin(), dropouts.end(), [&](const auto& d) {
      return d.participant == from && epoch >= d.first_epoch &&
             (d.last_epoch < 0 || epoch <= d.last_epoch);
    });
  }

  double ExtraDelay(const std::string& from, int epoch) const {
    double delay = 0.0;
    for (const auto& s : stragglers) {
      if (s.participant == from && s.epoch == epoch) delay += s.delay;
    }
    return delay;
  }

  std::optional<int> JoinEpoch(const std::string& participant) const {
    for (const auto& j : joins) {
      if (j.participant == participant) return j.epoch;
    }
    return std::nullopt;
  }
};

struct TraceEntry {
  std::uint64_t seq = 0;
  double sent_at = 0.0;
  double delivered_at = 0.0;  // undefined for drops
  std::string from;
  std::string to;
  std::string kind;
  int epoch = 0;
  std::size_t bytes = 0;
  bool dropped = false;
};

inline std::string FormatTrace(const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  char buf[64];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof(buf), "%.9f", e.dropped ? e.sent_at : e.delivered_at);
    out << buf << ' ' << e.seq << ' ' << (e.dropped ? "DROP" : "DELIVER") << ' '
        << e.from << "->" << e.to << ' ' << e.kind << " epoch=" << e.epoch
        << " bytes=" << e.bytes << '\n';
  }
  return out.str();
}

// Deterministic discrete-event message bus with a virtual clock. Delivery is
// at-most-once and FIFO per (from, to) channel; events with equal timestamps
// are ordered by send sequence. Single-threaded.
template <typename Payload>
class EventBus {
 public:
  struct Message {
    std::uint64_t seq;
    std::string from;
    std::string to;
    std::string kind;
    int epoch;
    std::size_t bytes;
    double sent_at;
    double deliver_at;
    Payload payload;
  };

  struct Timer {
    std::uint64_t id;
    std::string owner;
    int tag;
    double at;
  };

  using Event = std::variant<Message, Timer>;

  EventBus(LatencyModel latency, std::uint64_t seed)
      : latency_(latency), rng_(seed) {}

  void set_faults(FaultSchedule faults) { faults_ = std::move(faults); }
  const FaultSchedule& faults() const { return faults_; }

  double now() const { return now_; }

  // Returns false when the schedule drops the message.
  bool Send(const std::string& from, const std::string& to,
            const std::string& kind, int epoch, std::size_t bytes,
            Payload payload) {
    return SendAt(now_, from, to, kind, epoch, bytes, std::move(payload));
  }

  bool SendAt(double at, const std::string& from, const std::string& to,
              const std::string& kind, int epoch, std::size_t bytes,
              Payload payload) {
    if (at < now_) Fail(ErrorCode::kInvalidArgument, "cannot send in the past");
    const std::uint64_t seq = next_seq_++;
    // Latency is drawn for every message so drops do not shift later draws.
    const double latency = latency_.Sample(rng_) + faults_.ExtraDelay(from, epoch);
    TraceEntry entry{seq, at, 0.0, from, to, kind, epoch, bytes, false};
    if (faults_.Drops(from, epoch)) {
      entry.dropped = true;
      trace_.push_back(std::move(entry));
      return false;
    }
    double& channel_tail = channel_tail_[{from, to}];
    const double deliver_at = std::max(at + latency, channel_tail);
    channel_tail = deliver_at;
    queue_.push(Item{deliver_at, seq,
                     Message{seq, from, to, kind, epoch, bytes, at, deliver_at,
                             std::move(payload)}});
    return true;
  }

  std::uint64_t ScheduleTimer(double at, const std::string& owner, int tag) {
    const std::uint64_t seq = next_seq_++;
    queue_.push(Item{std::max(at, now_), seq, Timer{seq, owner, tag, at}});
    return seq;
  }

  void CancelTimer(std::uint64_t id) { cancelled_.insert(id); }

  // Pops the next event and advances the clock to it.
  std::optional<Event> Next() {
    while (!queue_.empty()) {
      Item item = std::move(const_cast<Item&>(queue_.top()));
      queue_.pop();
      if (auto* timer = std::get_if<Timer>(&item.event)) {
        if (cancelled_.erase(timer->id) > 0) continue;
      }
      now_ = item.at;
      if (auto* msg = std::get_if<Message>(&item.event)) {
        trace_.push_back(TraceEntry{msg->seq, msg->sent_at, msg->deliver_at, msg->from,
                                    msg->to, msg->kind, msg->epoch, msg->bytes, false});
      }
      return std::move(item.event);
    }
    return std::nullopt;
  }

  bool idle() const { return queue_.empty(); }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  struct Item {
    double at;
    std::uint64_t seq;
    Event event;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  LatencyModel latency_;
  Rng rng_;
  FaultSchedule faults_;
  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
  std::map<std::pair<std::string, std::string>, double> channel_tail_;
  std::set<std::uint64_t> cancelled_;
  std::vector<TraceEntry> trace_;
};

struct SendEvent {
  double at = 0.0;
  std::string from;
  std::string to;
  std::string kind;
  int epoch = 0;
  std::size_t bytes = 0;
};

// Runs a fixed list of sends through the bus and returns the trace: drops in
// send order interleaved with deliveries in delivery order.
inline std::vector<TraceEntry> SimulateNetwork(std::vector<SendEvent> events,
                                               const LatencyModel& latency,
                                               std::uint64_t seed,
                                               const FaultSchedule& faults = {}) {
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.at < b.at; });
  EventBus<std::monostate> bus(latency, seed);
  bus.set_faults(faults);
  for (const SendEvent& e : events) {
    bus.SendAt(e.at, e.from, e.to, e.kind, e.epoch, e.bytes, {});
  }
  while (bus.Next()) {
  }
  return bus.trace();
}

}  // namespace fedmife

#endif  // FEDMIFE_NETWORK_HPP_
