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

#include "locke/system.hpp"

#include <algorithm>
#include <climits>
#include <iomanip>
#include <map>
#include <sstream>

namespace locke {

std::string Choice::str() const {
  switch (kind) {
    case Kind::kInject: return "inject " + std::to_string(arg);
    case Kind::kDeliver: return "deliver " + std::to_string(arg);
    case Kind::kFire: return "fire " + std::to_string(arg);
    case Kind::kTimeout: return "timeout " + std::to_string(arg);
  }
  return "?";
}

std::vector<Choice> parse_schedule(std::string_view text) {
  std::vector<Choice> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string verb;
    if (!(ls >> verb)) continue;
    std::uint64_t arg = 0;
    std::string extra;
    if (!(ls >> arg) || (ls >> extra)) {
      throw ScheduleError("malformed schedule line " + std::to_string(lineno));
    }
    if (verb == "inject") {
      out.push_back(Choice::inject(arg));
    } else if (verb == "deliver") {
      out.push_back(Choice::deliver(arg));
    } else if (verb == "fire") {
      out.push_back(Choice::fire(arg));
    } else if (verb == "timeout") {
      out.push_back(Choice::timeout(arg));
    } else {
      throw ScheduleError("unknown schedule step '" + verb + "' at line " +
                          std::to_string(lineno));
    }
  }
  return out;
}

std::string format_schedule(const std::vector<Choice>& schedule) {
  std::string out;
  for (const Choice& c : schedule) out += c.str() + "\n";
  return out;
}

std::string OpRecord::str() const {
  std::ostringstream os;
  os << "op" << op_id << " " << node << " " << to_string(kind) << " a" << addr;
  if (kind == OpKind::kStore || completed) os << " v=" << value;
  if (issued) os << " issued@" << issue_time;
  if (completed) os << " done@" << complete_time;
  return os.str();
}

std::string Snapshot::table(BlockAddr addr) const {
  std::ostringstream os;
  os << "block " << addr << " at step " << step << ":\n";
  for (const LineView& l : lines) {
    if (l.addr != addr) continue;
    os << "  " << std::left << std::setw(5) << l.node.str() << " " << std::setw(3)
       << l.state_name() << " tok=" << l.tokens << " data=";
    if (l.data) {
      os << *l.data;
    } else {
      os << "-";
    }
    os << " acks=" << l.pending_acks << "\n";
  }
  for (const MemoryView& m : memory) {
    if (m.addr == addr) os << "  MEM       tok=" << m.tokens << "\n";
  }
  for (const Message& m : in_flight) {
    if (m.addr == addr) os << "  net   " << m.str() << "\n";
  }
  for (const Message& m : parked) {
    if (m.addr == addr) os << "  wait  " << m.str() << "\n";
  }
  return os.str();
}

System::System(Config config, Trace trace, LogMode log)
    : config_(std::move(config)),
      trace_(std::move(trace)),
      log_mode_(log),
      l2_(config_.blocks, config_.total_tokens()),
      net_(config_.policy, config_.seed) {
  config_.validate();
  cpu_ops_.resize(static_cast<std::size_t>(config_.n_l1));
  cpu_next_.assign(cpu_ops_.size(), 0);
  history_.resize(trace_.size());
  for (std::size_t i = 0; i < trace_.size(); ++i) {
    const TraceOp& op = trace_[i];
    if (op.cpu < 0 || op.cpu >= config_.n_l1) {
      throw TraceError("cpu out of range in op " + std::to_string(i));
    }
    if (op.addr.value >= static_cast<std::uint32_t>(config_.blocks)) {
      throw TraceError("block " + std::to_string(op.addr.value) + " outside the address space");
    }
    cpu_ops_[op.cpu].push_back(i);
    if (static_cast<std::size_t>(op.segment) >= segment_left_.size()) {
      segment_left_.resize(op.segment + 1, 0);
    }
    ++segment_left_[op.segment];
    OpRecord& r = history_[i];
    r.op_id = i;
    r.node = NodeId::l1(static_cast<std::uint16_t>(op.cpu));
    r.kind = op.kind;
    r.addr = op.addr;
    r.value = op.kind == OpKind::kStore ? op.value : 0;
  }
  for (int i = 0; i < config_.n_l1; ++i) {
    l1_.emplace_back(static_cast<std::uint16_t>(i), config_.l1);
  }
}

ProtocolEnv System::env() const {
  return {config_.n_l1, config_.total_tokens(), config_.mode, clock_, config_.fault};
}

int System::open_segment() const {
  for (std::size_t s = 0; s < segment_left_.size(); ++s) {
    if (segment_left_[s] > 0) return static_cast<int>(s);
  }
  return INT_MAX;
}

std::vector<Choice> System::enabled() const {
  std::vector<Choice> out;
  const int open = open_segment();
  for (std::size_t c = 0; c < cpu_ops_.size(); ++c) {
    if (l1_[c].busy() || cpu_next_[c] >= cpu_ops_[c].size()) continue;
    if (trace_[cpu_ops_[c][cpu_next_[c]]].segment <= open) out.push_back(Choice::inject(c));
  }
  for (const Message& m : net_.in_flight()) out.push_back(Choice::deliver(m.seq));
  for (const Timer& t : timers_) out.push_back(Choice::fire(t.id));
  for (std::size_t c = 0; c < l1_.size(); ++c) {
    if (timeout_enabled(c)) out.push_back(Choice::timeout(c));
  }
  return out;
}

bool System::timeout_enabled(std::size_t cpu) const {
  const L1Controller& c = l1_[cpu];
  if (!c.waiting_on_request()) return false;
  const BlockAddr addr = c.current_op()->addr;
  const NodeId self = c.id();
  // Requests from other nodes do not count: they never answer ours.
  const auto answers = [&](const Message& m) {
    if (m.addr != addr) return false;
    if (m.src == self && is_request(m.kind)) return true;
    return m.dest == self && !is_request(m.kind);
  };
  const auto& fl = net_.in_flight();
  if (std::any_of(fl.begin(), fl.end(), answers)) return false;
  return std::none_of(timers_.begin(), timers_.end(), [&](const Timer& t) {
    return t.node == self && t.request.addr == addr;
  });
}

bool System::ops_done() const { return open_segment() == INT_MAX; }

bool System::stuck() const { return !ops_done() && enabled().empty(); }

std::optional<Choice> System::auto_choice() {
  const int open = open_segment();
  for (std::size_t c = 0; c < cpu_ops_.size(); ++c) {
    if (l1_[c].busy() || cpu_next_[c] >= cpu_ops_[c].size()) continue;
    if (trace_[cpu_ops_[c][cpu_next_[c]]].segment <= open) return Choice::inject(c);
  }
  const Timer* due = nullptr;
  for (const Timer& t : timers_) {
    if (t.fire_at <= clock_ && (!due || t.id < due->id)) due = &t;
  }
  if (due) return Choice::fire(due->id);
  for (std::size_t c = 0; c < l1_.size(); ++c) {
    if (timeout_enabled(c)) return Choice::timeout(c);
  }
  if (const auto seq = net_.pick()) return Choice::deliver(*seq);
  for (const Timer& t : timers_) {
    if (!due || t.fire_at < due->fire_at || (t.fire_at == due->fire_at && t.id < due->id)) {
      due = &t;
    }
  }
  if (due) return Choice::fire(due->id);
  return std::nullopt;
}

bool System::step_auto() {
  const auto c = auto_choice();
  if (!c) return false;
  apply(*c);
  return true;
}

void System::apply(const Choice& c) {
  switch (c.kind) {
    case Choice::Kind::kInject: {
      const auto cpu = c.arg;
      if (cpu >= cpu_ops_.size() || l1_[cpu].busy() || cpu_next_[cpu] >= cpu_ops_[cpu].size() ||
          trace_[cpu_ops_[cpu][cpu_next_[cpu]]].segment > open_segment()) {
        throw ScheduleError("step '" + c.str() + "' is not enabled");
      }
      if (record_schedule_) schedule_.push_back(c);
      inject(static_cast<int>(cpu));
      return;
    }
    case Choice::Kind::kDeliver: {
      auto msg = net_.take(c.arg);
      if (!msg) throw ScheduleError("step '" + c.str() + "': no such message in flight");
      if (record_schedule_) schedule_.push_back(c);
      deliver(std::move(*msg));
      return;
    }
    case Choice::Kind::kFire: {
      const bool known = std::any_of(timers_.begin(), timers_.end(),
                                     [&](const Timer& t) { return t.id == c.arg; });
      if (!known) throw ScheduleError("step '" + c.str() + "': no such timer");
      if (record_schedule_) schedule_.push_back(c);
      fire(c.arg);
      return;
    }
    case Choice::Kind::kTimeout: {
      if (c.arg >= l1_.size() || !timeout_enabled(c.arg)) {
        throw ScheduleError("step '" + c.str() + "' is not enabled");
      }
      if (record_schedule_) schedule_.push_back(c);
      time_out(static_cast<int>(c.arg));
      return;
    }
  }
}

void System::time_out(int cpu) {
  ++stats_.timeouts;
  LogEntry entry;
  entry.step = clock_;
  entry.choice = Choice::timeout(cpu);
  entry.actor = l1_[cpu].id();
  Effects fx;
  l1_[cpu].timeout(env(), fx);
  absorb(l1_[cpu].id(), fx, log_mode_ == LogMode::kNone ? nullptr : &entry);
  push_log(std::move(entry));
}

void System::inject(int cpu) {
  const std::size_t idx = cpu_ops_[cpu][cpu_next_[cpu]++];
  const TraceOp& t = trace_[idx];
  PendingOp op;
  op.kind = t.kind;
  op.addr = t.addr;
  op.value = t.value;
  op.priority = Priority{clock_, NodeId::l1(static_cast<std::uint16_t>(cpu))};
  op.op_id = idx;
  OpRecord& r = history_[idx];
  r.issued = true;
  r.issue_time = ++tick_;
  r.issue_step = clock_;

  LogEntry entry;
  entry.step = clock_;
  entry.choice = Choice::inject(cpu);
  entry.actor = op.priority.node;
  Effects fx;
  l1_[cpu].issue(op, env(), fx);
  absorb(op.priority.node, fx, log_mode_ == LogMode::kNone ? nullptr : &entry);
  push_log(std::move(entry));
}

void System::deliver(Message msg) {
  ++clock_;
  LogEntry entry;
  entry.step = clock_;
  entry.choice = Choice::deliver(msg.seq);
  entry.actor = msg.dest;
  Effects fx;
  switch (msg.dest.kind) {
    case NodeKind::kL1:
      if (msg.dest.index >= l1_.size()) throw InternalFault("message to a missing L1");
      l1_[msg.dest.index].receive(msg, env(), fx);
      break;
    case NodeKind::kL2:
      l2_.receive(msg, env(), fx);
      break;
    case NodeKind::kMemory:
      mem_.receive(msg, fx);
      break;
  }
  const NodeId actor = msg.dest;
  if (log_mode_ != LogMode::kNone) entry.delivered = std::move(msg);
  absorb(actor, fx, log_mode_ == LogMode::kNone ? nullptr : &entry);
  push_log(std::move(entry));
}

void System::fire(std::uint64_t timer_id) {
  const auto it = std::find_if(timers_.begin(), timers_.end(),
                               [&](const Timer& t) { return t.id == timer_id; });
  const Timer t = *it;
  timers_.erase(it);
  clock_ = std::max(clock_, t.fire_at);
  ++stats_.timers_fired;
  LogEntry entry;
  entry.step = clock_;
  entry.choice = Choice::fire(timer_id);
  entry.actor = t.node;
  Effects fx;
  l1_[t.node.index].fire_backoff(t.request, env(), fx);
  absorb(t.node, fx, log_mode_ == LogMode::kNone ? nullptr : &entry);
  push_log(std::move(entry));
}

std::vector<NodeId> System::request_targets(NodeId src) const {
  std::vector<NodeId> out = peer_targets(src);
  out.push_back(NodeId::l2());
  return out;
}

std::vector<NodeId> System::peer_targets(NodeId src) const {
  std::vector<NodeId> out;
  for (int i = 0; i < config_.n_l1; ++i) {
    const NodeId n = NodeId::l1(static_cast<std::uint16_t>(i));
    if (n != src) out.push_back(n);
  }
  return out;
}

void System::absorb(NodeId actor, Effects& fx, LogEntry* entry) {
  for (Outgoing& o : fx.out) {
    if (o.msg.kind == MessageKind::kRetry) ++stats_.retries;
    const std::size_t before = net_.in_flight().size();
    switch (o.fanout) {
      case Fanout::kUnicast:
        net_.send(std::move(o.msg));
        break;
      case Fanout::kRequest:
        net_.broadcast(o.msg, request_targets(o.msg.src));
        break;
      case Fanout::kPeers:
        net_.broadcast(o.msg, peer_targets(o.msg.src));
        break;
    }
    if (entry) {
      const auto& fl = net_.in_flight();
      entry->sent.insert(entry->sent.end(), fl.begin() + static_cast<std::ptrdiff_t>(before),
                         fl.end());
    }
  }
  for (Message& m : fx.timers) {
    timers_.push_back({next_timer_++, clock_ + config_.backoff, actor, std::move(m)});
  }
  for (const CompletedOp& c : fx.completed) {
    OpRecord& r = history_.at(c.op_id);
    r.completed = true;
    r.complete_time = ++tick_;
    r.complete_step = clock_;
    r.value = c.value;
    --segment_left_[trace_[c.op_id].segment];
    ++stats_.completions;
  }
  stats_.freezes += static_cast<std::uint64_t>(fx.freezes);
  if (entry) {
    entry->notes = std::move(fx.notes);
    entry->completed = std::move(fx.completed);
  }
}

void System::push_log(LogEntry entry) {
  if (log_mode_ == LogMode::kNone) return;
  log_.push_back(std::move(entry));
  if (log_mode_ == LogMode::kTail && log_.size() > 64) log_.pop_front();
}

Snapshot System::snapshot() const {
  Snapshot s;
  s.total_tokens = config_.total_tokens();
  s.blocks = config_.blocks;
  s.step = clock_;
  for (const L1Controller& c : l1_) {
    c.cache().for_each([&](const L1Line& l) {
      LineView v;
      v.node = c.id();
      v.addr = l.addr;
      v.l1_state = l.state;
      v.data = l.data;
      v.tokens = l.tokens;
      v.pending_acks = l.pending_acks();
      v.has_boss = l.boss.has_value();
      if (l.pending) v.pending = l.pending->kind;
      s.lines.push_back(v);
      s.parked.insert(s.parked.end(), l.stalled.begin(), l.stalled.end());
    });
  }
  for (const auto& [addr, l] : l2_.lines()) {
    LineView v;
    v.node = NodeId::l2();
    v.addr = addr;
    v.l2_state = l.state;
    v.data = l.data;
    v.tokens = l.tokens;
    v.pending_acks = l.pending_acks();
    s.lines.push_back(v);
    s.parked.insert(s.parked.end(), l.stalled.begin(), l.stalled.end());
  }
  for (const auto& [addr, h] : mem_.holdings()) s.memory.push_back({addr, h.tokens, h.data});
  s.in_flight = net_.in_flight();
  return s;
}

namespace {

bool has_priority(MessageKind k) { return is_request(k) || k == MessageKind::kComplete; }

class KeyWriter {
 public:
  KeyWriter(std::vector<std::uint64_t> births, std::vector<std::uint32_t> attempts)
      : births_(std::move(births)), attempts_(std::move(attempts)) {
    std::sort(births_.begin(), births_.end());
    births_.erase(std::unique(births_.begin(), births_.end()), births_.end());
  }

  std::uint64_t rank(std::uint64_t birth) const {
    return static_cast<std::uint64_t>(
        std::lower_bound(births_.begin(), births_.end(), birth) - births_.begin());
  }

  std::string msg(const Message& m) const {
    Message c = m;
    if (has_priority(c.kind)) c.priority.birth = rank(c.priority.birth);
    // Only "current wave or not" matters for attempts.
    if (c.requester.is_l1() && c.requester.index < attempts_.size()) {
      c.attempt = c.attempt == attempts_[c.requester.index] ? 1 : 0;
    }
    return describe(c, false);
  }

  void pri(std::ostream& os, const Priority& p) const {
    os << "(" << rank(p.birth) << "," << p.node << ")";
  }

  void op(std::ostream& os, const std::optional<PendingOp>& op) const {
    if (!op) {
      os << "-";
      return;
    }
    os << to_string(op->kind) << "a" << op->addr << "v" << op->value << "o" << op->op_id;
    pri(os, op->priority);
    os << (op->getx_issued ? "x" : "");
  }

 private:
  std::vector<std::uint64_t> births_;
  std::vector<std::uint32_t> attempts_;
};

void core(std::ostream& os, const LineCore& l) {
  os << "a" << l.addr << " d";
  if (l.data) {
    os << *l.data;
  } else {
    os << "-";
  }
  os << " t" << l.tokens << " s[";
  for (const SentRecord& r : l.sent) os << r.dest << r.bundle << ";";
  os << "]";
}

}  // namespace

std::string System::canonical_key() const {
  std::vector<std::uint64_t> births{clock_};
  auto add_msg = [&](const Message& m) {
    if (has_priority(m.kind)) births.push_back(m.priority.birth);
  };
  for (const L1Controller& c : l1_) {
    if (c.current_op()) births.push_back(c.current_op()->priority.birth);
    for (const auto& [k, b] : c.completions()) births.push_back(b);
    c.cache().for_each([&](const L1Line& l) {
      if (l.pending) births.push_back(l.pending->priority.birth);
      if (l.boss) births.push_back(l.boss->birth);
      for (const Message& m : l.stalled) add_msg(m);
    });
  }
  for (const auto& [a, l] : l2_.lines()) {
    for (const Message& m : l.stalled) add_msg(m);
  }
  for (const Message& m : net_.in_flight()) add_msg(m);
  for (const Timer& t : timers_) add_msg(t.request);
  std::vector<std::uint32_t> attempts;
  for (const L1Controller& c : l1_) attempts.push_back(c.attempt());
  const KeyWriter kw(std::move(births), std::move(attempts));

  std::ostringstream os;
  os << "now" << kw.rank(clock_) << "|cpu";
  for (std::size_t c = 0; c < cpu_next_.size(); ++c) os << " " << cpu_next_[c];
  for (const L1Controller& c : l1_) {
    os << "|" << c.id() << " op=";
    kw.op(os, c.current_op());
    if (c.parked_victim()) os << " victim=" << *c.parked_victim();
    os << " done[";
    for (const auto& [k, b] : c.completions()) {
      os << k.first << "/" << k.second << ":" << kw.rank(b) << ";";
    }
    os << "] lru[";
    for (int s = 0; s < c.cache().geometry().sets; ++s) {
      for (int w : c.cache().lru_order(s)) os << w;
      os << ";";
    }
    os << "]";
    for (const auto& slot : c.cache().slots()) {
      if (!slot) {
        os << " {}";
        continue;
      }
      const L1Line& l = *slot;
      os << " {" << to_string(l.state) << " ";
      core(os, l);
      os << " b";
      if (l.boss) {
        kw.pri(os, *l.boss);
      } else {
        os << "-";
      }
      os << " p";
      kw.op(os, l.pending);
      os << " tried" << (l.op_tried_in ? to_string(*l.op_tried_in) : "-");
      for (const Message& m : l.stalled) os << " w:" << kw.msg(m);
      os << "}";
    }
  }
  os << "|L2";
  for (const auto& [a, l] : l2_.lines()) {
    os << " {" << to_string(l.state) << " ";
    core(os, l);
    if (l.replacement_stalled) os << " R";
    for (const Message& m : l.stalled) os << " w:" << kw.msg(m);
    os << "}";
  }
  os << "|MEM";
  for (const auto& [a, h] : mem_.holdings()) {
    os << " a" << a << h.tokens << (h.data ? std::to_string(*h.data) : "-");
  }
  std::vector<std::string> flight;
  for (const Message& m : net_.in_flight()) flight.push_back(kw.msg(m));
  std::sort(flight.begin(), flight.end());
  os << "|NET";
  for (const auto& f : flight) os << " " << f << ";";
  std::vector<std::string> timers;
  for (const Timer& t : timers_) timers.push_back(t.node.str() + ":" + kw.msg(t.request));
  std::sort(timers.begin(), timers.end());
  os << "|TMR";
  for (const auto& t : timers) os << " " << t << ";";
  return os.str();
}

}  // namespace locke
