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

#ifndef LOCKE_SNAPSHOT_HPP_
#define LOCKE_SNAPSHOT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locke/message.hpp"
#include "locke/tables.hpp"
#include "locke/types.hpp"

namespace locke {

// One cache line as seen by the checker.
struct LineView {
  NodeId node;
  BlockAddr addr;
  std::optional<L1State> l1_state;  // set for L1 lines
  std::optional<L2State> l2_state;  // set for the L2 line
  std::optional<DataWord> data;
  TokenBundle tokens;
  int pending_acks = 0;
  bool has_boss = false;
  std::optional<OpKind> pending;

  std::string state_name() const {
    return l1_state ? to_string(*l1_state) : l2_state ? to_string(*l2_state) : "?";
  }
};

struct MemoryView {
  BlockAddr addr;
  TokenBundle tokens;
  std::optional<DataWord> data;
};

// Global instant at a step boundary.
struct Snapshot {
  int total_tokens = 0;
  int blocks = 0;
  std::uint64_t step = 0;
  std::vector<LineView> lines;
  std::vector<MemoryView> memory;
  std::vector<Message> in_flight;
  // Messages parked on line wait queues; still owned by the system.
  std::vector<Message> parked;

  std::string table(BlockAddr addr) const;
};

// A processor op with its timestamps. Times are a shared event counter,
// so issue/completion order across nodes is total.
struct OpRecord {
  std::uint64_t op_id = 0;
  NodeId node;
  OpKind kind = OpKind::kLoad;
  BlockAddr addr;
  DataWord value = 0;  // written value, or the value a load observed
  bool issued = false;
  bool completed = false;
  std::uint64_t issue_time = 0;
  std::uint64_t complete_time = 0;
  std::uint64_t issue_step = 0;  // delivery steps, for the progress bound
  std::uint64_t complete_step = 0;

  std::string str() const;
};

}  // namespace locke

#endif  // LOCKE_SNAPSHOT_HPP_
