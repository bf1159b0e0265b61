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

#include "locke/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace locke {

namespace {

const char* const kCheckOrder[] = {"conservation", "exclusivity", "value-coherence",
                                   "line-state",   "serialization", "progress",
                                   "protocol"};

std::string format_entry(const LogEntry& e) {
  std::ostringstream os;
  os << "[" << e.step << "] " << e.choice.str();
  if (e.delivered) os << " " << e.delivered->str();
  for (const DispatchNote& n : e.notes) os << "\n      " << n.str();
  for (const CompletedOp& c : e.completed) {
    os << "\n      " << c.node << " completes op" << c.op_id << " " << to_string(c.kind) << " a"
       << c.addr << " = " << c.value;
  }
  for (const Message& m : e.sent) os << "\n      sends " << m.str();
  return os.str();
}

std::string config_text(const Config& c) {
  std::ostringstream os;
  os << "n_l1 = " << c.n_l1 << "\ntokens = " << c.total_tokens() << "\nl1_sets = " << c.l1.sets
     << "\nl1_ways = " << c.l1.ways << "\nl2_sets = " << c.l2.sets << "\nl2_ways = " << c.l2.ways
     << "\nblocks = " << c.blocks << "\nmode = " << to_string(c.mode)
     << "\npolicy = " << to_string(c.policy) << "\nseed = " << c.seed
     << "\nprogress_bound = " << c.progress_bound << "\nbackoff = " << c.backoff << "\n";
  if (c.fault == Fault::kStaleDataOnDataOwner) os << "fault = stale_data_owner\n";
  return os.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

bool RunReport::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.ok; });
}

std::string RunReport::str() const {
  std::ostringstream os;
  os << "config: " << config << "\n";
  os << "ops: " << ops << " completed: " << completed << " steps: " << steps << "\n";
  os << "messages: " << messages << "\n";
  for (int k = 0; k < kMessageKindCount; ++k) {
    os << "  " << std::left << std::setw(16) << to_string(static_cast<MessageKind>(k))
       << by_kind[k] << "\n";
  }
  os << "retries: " << retries << " freezes: " << freezes << " backoffs: " << backoffs << "\n";
  os << "memory:";
  for (const auto& [a, v] : memory_image) os << " a" << a << "=" << v;
  os << "\nchecks:\n";
  for (const Verdict& v : verdicts) os << "  " << v.str() << "\n";
  os << "result: " << (ok() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

RunResult run(const Config& config, const Trace& trace, const RunOptions& options) {
  RunResult res;
  System sys(config, trace, options.log);
  std::map<std::string, Verdict> verdicts;
  for (const char* name : kCheckOrder) verdicts[name] = Verdict::pass(name);
  std::optional<Verdict> failure;
  auto record = [&](Verdict v) {
    if (!v.ok && verdicts[v.check].ok) verdicts[v.check] = v;
    if (!v.ok && !failure) failure = std::move(v);
  };

  std::size_t next = 0;
  try {
    while (!failure) {
      if (options.schedule) {
        if (next >= options.schedule->size()) break;
        sys.apply((*options.schedule)[next++]);
      } else if (!sys.step_auto()) {
        break;
      }
      if (options.check_every_step) {
        for (Verdict& v : check_safety(sys.snapshot())) record(std::move(v));
      }
      for (const L1Controller& c : sys.l1s()) {
        if (!c.current_op()) continue;
        const OpRecord& r = sys.history()[c.current_op()->op_id];
        if (sys.clock() - r.issue_step > config.progress_bound) {
          record(check_progress(sys.history(), sys.clock(), config.progress_bound));
          break;
        }
      }
    }
  } catch (const ProtocolError& e) {
    record(Verdict::fail("protocol", std::nullopt, e.what()));
  } catch (const InternalFault& e) {
    record(Verdict::fail("protocol", std::nullopt, std::string("internal fault: ") + e.what()));
  }

  if (!failure && !options.check_every_step) {
    for (Verdict& v : check_safety(sys.snapshot())) record(std::move(v));
  }
  record(check_serialization(sys.history()));
  record(check_progress(sys.history(), sys.clock(), config.progress_bound));
  if (!failure && !sys.ops_done()) {
    std::uint64_t left = 0;
    for (const OpRecord& r : sys.history()) left += r.completed ? 0 : 1;
    record(Verdict::fail("progress", std::nullopt,
                         std::to_string(left) + " op(s) never completed; the run stopped at step " +
                             std::to_string(sys.clock())));
  }

  RunReport& rep = res.report;
  rep.config = sys.config().str();
  rep.ops = trace.size();
  rep.completed = sys.stats().completions;
  rep.steps = sys.clock();
  rep.messages = sys.network().sent();
  rep.by_kind = sys.network().sent_by_kind();
  rep.retries = sys.stats().retries;
  rep.freezes = sys.stats().freezes;
  rep.backoffs = sys.stats().timers_fired;
  const Snapshot snap = sys.snapshot();
  for (int b = 0; b < config.blocks; ++b) {
    const BlockAddr a{static_cast<std::uint32_t>(b)};
    std::string value = "?";
    for (const LineView& l : snap.lines) {
      if (l.addr == a && l.tokens.owner) value = l.data ? std::to_string(*l.data) : "-";
    }
    for (const MemoryView& m : snap.memory) {
      if (m.addr == a && m.tokens.owner) value = m.data ? std::to_string(*m.data) : "-";
    }
    rep.memory_image[a.value] = value;
  }
  for (const char* name : kCheckOrder) rep.verdicts.push_back(verdicts[name]);
  res.schedule = sys.schedule();
  res.log.assign(sys.log().begin(), sys.log().end());

  if (failure) {
    std::ostringstream os;
    os << failure->str() << "\n";
    if (failure->addr) os << snap.table(*failure->addr);
    const std::size_t from = res.log.size() > 50 ? res.log.size() - 50 : 0;
    if (!res.log.empty()) os << "recent log:\n";
    for (std::size_t i = from; i < res.log.size(); ++i) os << "  " << format_entry(res.log[i]) << "\n";
    res.failure = os.str();
  }
  return res;
}

Trace random_trace(int ops, int n_l1, int blocks, DataWord max_value, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0x5EED);
  std::uniform_int_distribution<int> cpu(0, n_l1 - 1);
  std::uniform_int_distribution<int> block(0, blocks - 1);
  std::uniform_int_distribution<DataWord> value(0, max_value);
  std::bernoulli_distribution store(0.5);
  Trace t;
  t.reserve(static_cast<std::size_t>(ops));
  for (int i = 0; i < ops; ++i) {
    TraceOp op;
    op.cpu = cpu(rng);
    op.addr = BlockAddr{static_cast<std::uint32_t>(block(rng))};
    op.kind = store(rng) ? OpKind::kStore : OpKind::kLoad;
    if (op.kind == OpKind::kStore) op.value = value(rng);
    t.push_back(op);
  }
  return t;
}

FuzzSummary fuzz(const Config& base, const FuzzOptions& options) {
  FuzzSummary out;
  for (int i = 0; i < options.seeds; ++i) {
    Config cfg = base;
    cfg.seed = options.first_seed + static_cast<std::uint64_t>(i);
    const Trace trace = random_trace(options.ops, cfg.n_l1, cfg.blocks, options.max_value, cfg.seed);
    RunResult r = run(cfg, trace);
    if (!r.report.ok()) {
      out.failed_seeds.push_back(cfg.seed);
      if (!options.artifact_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(options.artifact_dir);
        const fs::path stem = fs::path(options.artifact_dir) / ("seed-" + std::to_string(cfg.seed));
        write_file(stem.string() + ".cfg", config_text(cfg));
        write_file(stem.string() + ".trace", format_trace(trace));
        write_file(stem.string() + ".schedule", format_schedule(r.schedule));
        write_file(stem.string() + ".report", r.report.str() + "\n" + r.failure);
        out.artifacts.push_back(stem.string());
      }
    }
    out.reports.push_back(std::move(r.report));
  }
  return out;
}

std::string FuzzSummary::str() const {
  std::ostringstream os;
  std::uint64_t ops = 0;
  std::uint64_t msgs = 0;
  for (const RunReport& r : reports) {
    ops += r.ops;
    msgs += r.messages;
    os << r.config << ": " << (r.ok() ? "PASS" : "FAIL") << " ops=" << r.ops
       << " completed=" << r.completed << " steps=" << r.steps << " messages=" << r.messages
       << " retries=" << r.retries << " freezes=" << r.freezes << "\n";
    for (const Verdict& v : r.verdicts) {
      if (!v.ok) os << "  " << v.str() << "\n";
    }
  }
  for (const std::string& a : artifacts) os << "artifacts: " << a << ".*\n";
  os << reports.size() << " seed(s), " << ops << " ops, " << msgs << " messages, "
     << failed_seeds.size() << " failing\n";
  return os.str();
}

namespace {

constexpr int kLane = 10;

int lane_of(NodeId n, int n_l1) {
  switch (n.kind) {
    case NodeKind::kL1: return n.index;
    case NodeKind::kL2: return n_l1;
    case NodeKind::kMemory: return n_l1 + 1;
  }
  return 0;
}

std::string lanes(int n_lanes, int from, int to, char mark_from, char mark_to) {
  std::string row(static_cast<std::size_t>(n_lanes * kLane), ' ');
  for (int i = 0; i < n_lanes; ++i) row[i * kLane + kLane / 2] = '|';
  if (from >= 0 && to >= 0) {
    const int a = from * kLane + kLane / 2;
    const int b = to * kLane + kLane / 2;
    for (int i = std::min(a, b) + 1; i < std::max(a, b); ++i) row[i] = '-';
    row[a] = mark_from;
    row[b] = mark_to;
  } else if (from >= 0) {
    row[from * kLane + kLane / 2] = mark_from;
  }
  while (!row.empty() && row.back() == ' ') row.pop_back();
  return row;
}

}  // namespace

std::string dump_msc(const std::vector<LogEntry>& log, int n_l1, std::optional<BlockAddr> addr) {
  const int n_lanes = n_l1 + 2;
  std::ostringstream os;
  std::string head(static_cast<std::size_t>(n_lanes * kLane), ' ');
  for (int i = 0; i < n_lanes; ++i) {
    const std::string name = i < n_l1 ? "L1." + std::to_string(i) : i == n_l1 ? "L2" : "MEM";
    head.replace(static_cast<std::size_t>(i * kLane + kLane / 2 - name.size() / 2), name.size(),
                 name);
  }
  while (!head.empty() && head.back() == ' ') head.pop_back();
  os << "step  " << head << "\n";

  for (const LogEntry& e : log) {
    if (e.delivered && (!addr || e.delivered->addr == *addr)) {
      const Message& m = *e.delivered;
      const int from = lane_of(m.src, n_l1);
      const int to = lane_of(m.dest, n_l1);
      os << std::right << std::setw(4) << e.step << "  "
         << std::left << std::setw(n_lanes * kLane)
         << lanes(n_lanes, from, to, 'o', from == to ? '@' : (to > from ? '>' : '<')) << "  "
         << to_string(m.kind) << " a" << m.addr;
      if (carries_tokens(m.kind)) os << " " << m.payload;
      if (m.kind == MessageKind::kRetry) os << " " << to_string(m.retry_kind);
      for (const DispatchNote& n : e.notes) {
        if (n.addr != m.addr || n.node != m.dest) continue;
        os << "  [" << n.before << "->" << n.after << " " << n.event;
        if (n.marker == Marker::kNormal && !n.actions.empty()) {
          os << ":";
          for (ActionKind a : n.actions) os << " " << to_string(a);
        } else if (n.marker == Marker::kStall) {
          os << ": stall";
        } else if (n.marker == Marker::kIgnore) {
          os << ": ignore";
        }
        os << "]";
      }
      os << "\n";
    }
    for (const CompletedOp& c : e.completed) {
      if (addr && c.addr != *addr) continue;
      const int at = lane_of(c.node, n_l1);
      os << "      " << std::left << std::setw(n_lanes * kLane) << lanes(n_lanes, at, -1, '*', ' ')
         << "  " << to_string(c.kind) << " a" << c.addr << " = " << c.value << " done\n";
    }
  }
  return os.str();
}

}  // namespace locke
