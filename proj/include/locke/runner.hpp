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

#ifndef LOCKE_RUNNER_HPP_
#define LOCKE_RUNNER_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locke/checker.hpp"
#include "locke/config.hpp"
#include "locke/system.hpp"
#include "locke/trace.hpp"

namespace locke {

struct RunOptions {
  // Replay these steps instead of following the delivery policy.
  std::optional<std::vector<Choice>> schedule;
  LogMode log = LogMode::kTail;
  bool check_every_step = true;
};

struct RunReport {
  std::string config;
  std::uint64_t ops = 0;
  std::uint64_t completed = 0;
  std::uint64_t steps = 0;
  std::uint64_t messages = 0;
  std::array<std::uint64_t, kMessageKindCount> by_kind{};
  std::uint64_t retries = 0;
  std::uint64_t freezes = 0;
  std::uint64_t backoffs = 0;
  std::map<std::uint32_t, std::string> memory_image;  // block -> owner's value
  std::vector<Verdict> verdicts;  // one per check, in a fixed order

  bool ok() const;
  std::uint64_t count(MessageKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
  std::string str() const;
};

struct RunResult {
  RunReport report;
  std::vector<Choice> schedule;
  // Snapshot of the failing block and the recent log, when something failed.
  std::string failure;
  std::vector<LogEntry> log;
};

RunResult run(const Config& config, const Trace& trace, const RunOptions& options = {});

struct FuzzOptions {
  int ops = 10000;
  int seeds = 20;
  std::uint64_t first_seed = 1;
  DataWord max_value = 255;
  // Where failing seeds leave trace, schedule and report; empty: nowhere.
  std::string artifact_dir;
};

struct FuzzSummary {
  std::vector<RunReport> reports;
  std::vector<std::uint64_t> failed_seeds;
  std::vector<std::string> artifacts;

  bool ok() const { return failed_seeds.empty(); }
  std::string str() const;
};

// Random ops: cpu, block and value uniform, loads and stores 50/50.
Trace random_trace(int ops, int n_l1, int blocks, DataWord max_value, std::uint64_t seed);
FuzzSummary fuzz(const Config& base, const FuzzOptions& options);

// Vertical message sequence chart of a logged run. Rows are deliveries and
// op completions; `addr` keeps only that block.
std::string dump_msc(const std::vector<LogEntry>& log, int n_l1,
                     std::optional<BlockAddr> addr = std::nullopt);

}  // namespace locke

#endif  // LOCKE_RUNNER_HPP_
