/*
 * Copyright (c) 2026, The locke-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef LOCKE_SYSTEM_HPP_
#define LOCKE_SYSTEM_HPP_

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locke/config.hpp"
#include "locke/l1_controller.hpp"
#include "locke/l2_controller.hpp"
#include "locke/network.hpp"
#include "locke/snapshot.hpp"
#include "locke/trace.hpp"

namespace locke {

// One nondeterministic step: start a processor's next op, deliver an
// in-flight message, fire a retry backoff timer, or time out a request
// that nothing in flight can answer.
struct Choice {
  enum class Kind : std::uint8_t { kInject, kDeliver, kFire, kTimeout };

  Kind kind = Kind::kDeliver;
  std::uint64_t arg = 0;  // cpu, message seq, timer id, or cpu

  static Choice inject(std::uint64_t cpu) { return {Kind::kInject, cpu}; }
  static Choice deliver(std::uint64_t seq) { return {Kind::kDeliver, seq}; }
  static Choice fire(std::uint64_t id) { return {Kind::kFire, id}; }
  static Choice timeout(std::uint64_t cpu) { return {Kind::kTimeout, cpu}; }

  std::string str() const;
  bool operator==(const Choice&) const = default;
};

class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Choice> parse_schedule(std::string_view text);
std::string format_schedule(const std::vector<Choice>& schedule);

struct Timer {
  std::uint64_t id = 0;
  std::uint64_t fire_at = 0;
  NodeId node;
  Message request;
};

struct LogEntry {
  std::uint64_t step = 0;
  Choice choice;
  std::optional<Message> delivered;
  std::optional<NodeId> actor;
  std::vector<DispatchNote> notes;
  std::vector<CompletedOp> completed;
  std::vector<Message> sent;
};

enum class LogMode : std::uint8_t { kNone, kTail, kFull };

struct Stats {
  std::uint64_t retries = 0;
  std::uint64_t freezes = 0;
  std::uint64_t completions = 0;
  std::uint64_t timers_fired = 0;
  std::uint64_t timeouts = 0;
};

// The whole machine: processors, L1s, L2, memory and the network.
// Copyable, so the explorer can branch on it.
class System {
 public:
  System(Config config, Trace trace, LogMode log = LogMode::kNone);

  const Config& config() const { return config_; }
  const Trace& trace() const { return trace_; }
  ProtocolEnv env() const;

  // Every step possible right now, injections first, then deliveries by
  // seq, then timers by id.
  std::vector<Choice> enabled() const;
  // Throws ScheduleError when the choice is not enabled; ProtocolError and
  // InternalFault propagate from the controllers.
  void apply(const Choice& c);
  // The step the configured policy takes: eager injection, due timers,
  // then one delivery; an idle network fast-forwards to the next timer.
  // nullopt when nothing can move.
  std::optional<Choice> auto_choice();
  // auto_choice() followed by apply(); false when nothing moved.
  bool step_auto();

  bool ops_done() const;
  bool quiescent() const { return net_.empty() && timers_.empty(); }
  // Outstanding ops but no enabled step at all.
  bool stuck() const;
  std::uint64_t clock() const { return clock_; }
  int open_segment() const;

  const std::vector<OpRecord>& history() const { return history_; }
  const std::vector<Choice>& schedule() const { return schedule_; }
  const std::deque<LogEntry>& log() const { return log_; }
  const Network& network() const { return net_; }
  const std::vector<L1Controller>& l1s() const { return l1_; }
  const L2Controller& l2() const { return l2_; }
  const MemoryNode& memory() const { return mem_; }
  const std::vector<Timer>& timers() const { return timers_; }
  const Stats& stats() const { return stats_; }

  Snapshot snapshot() const;
  // History-free encoding of the state: message seqs, timer ids and op
  // timestamps are dropped and request births are replaced by their rank.
  std::string canonical_key() const;

  void set_record_schedule(bool on) { record_schedule_ = on; }

 private:
  void inject(int cpu);
  void deliver(Message msg);
  void fire(std::uint64_t timer_id);
  void time_out(int cpu);
  // The cpu's request can no longer be answered: it waits, and no message
  // or timer for its block exists anywhere.
  bool timeout_enabled(std::size_t cpu) const;
  void absorb(NodeId actor, Effects& fx, LogEntry* entry);
  void push_log(LogEntry entry);
  std::vector<NodeId> request_targets(NodeId src) const;
  std::vector<NodeId> peer_targets(NodeId src) const;

  Config config_;
  Trace trace_;
  LogMode log_mode_;
  std::vector<std::vector<std::size_t>> cpu_ops_;
  std::vector<std::size_t> cpu_next_;
  std::vector<int> segment_left_;
  std::vector<L1Controller> l1_;
  L2Controller l2_;
  MemoryNode mem_;
  Network net_;
  std::vector<Timer> timers_;
  std::uint64_t next_timer_ = 1;
  std::uint64_t clock_ = 0;
  std::uint64_t tick_ = 0;
  std::vector<OpRecord> history_;
  std::vector<Choice> schedule_;
  bool record_schedule_ = true;
  std::deque<LogEntry> log_;
  Stats stats_;
};

}  // namespace locke

#endif  // LOCKE_SYSTEM_HPP_
