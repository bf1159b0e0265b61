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

#ifndef LOCKE_L1_CONTROLLER_HPP_
#define LOCKE_L1_CONTROLLER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "locke/controller.hpp"

namespace locke {

struct L1Line : LineCore {
  L1State state = L1State::I;
  std::optional<Priority> boss;
  std::optional<PendingOp> pending;
  // State in which the pending op was last presented to the table; the op is
  // presented again whenever the line moves to a different state.
  std::optional<L1State> op_tried_in;
  std::vector<Message> stalled;
};

struct CacheGeometry {
  int sets = 1;
  int ways = 1;
};

// Set-associative frame store with per-set LRU order.
class L1Cache {
 public:
  explicit L1Cache(CacheGeometry geometry);

  L1Line* find(BlockAddr addr);
  const L1Line* find(BlockAddr addr) const;
  // Claims a free way in the block's set; nullptr when the set is full.
  L1Line* allocate(BlockAddr addr);
  void release(BlockAddr addr);
  void touch(BlockAddr addr);
  // Least recently used resident line of the block's set.
  L1Line* lru_victim(BlockAddr addr);

  int set_of(BlockAddr addr) const;
  const CacheGeometry& geometry() const { return geometry_; }
  const std::vector<int>& lru_order(int set) const { return lru_[set]; }
  const std::vector<std::optional<L1Line>>& slots() const { return slots_; }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& slot : slots_) {
      if (slot) f(*slot);
    }
  }

 private:
  int way_of(BlockAddr addr) const;

  CacheGeometry geometry_;
  std::vector<std::optional<L1Line>> slots_;  // set-major
  std::vector<std::vector<int>> lru_;         // way indices, most recent first
};

class L1Controller {
 public:
  L1Controller(std::uint16_t index, CacheGeometry geometry);

  NodeId id() const { return id_; }
  bool busy() const { return current_.has_value(); }
  const std::optional<PendingOp>& current_op() const { return current_; }
  std::optional<BlockAddr> parked_victim() const { return victim_; }
  const L1Cache& cache() const { return cache_; }
  // Latest completed-store birth seen per (block, L1 index).
  const std::map<std::pair<BlockAddr, std::uint16_t>, std::uint64_t>& completions() const {
    return done_;
  }

  // Presents a processor op: a hit or free way yields Load/Store on the line,
  // a full set yields Replacement on the LRU victim with the op parked.
  void issue(const PendingOp& op, const ProtocolEnv& env, Effects& fx);
  void receive(const Message& msg, const ProtocolEnv& env, Effects& fx);
  // Backoff expiry for a RETRY(LATER): re-broadcast if still waiting.
  void fire_backoff(const Message& request, const ProtocolEnv& env, Effects& fx);
  // True while the current op waits in IS, IM, SM or F.
  bool waiting_on_request() const;
  // Nothing more will arrive for the current op: act as on a RETRY(BC).
  void timeout(const ProtocolEnv& env, Effects& fx);
  std::uint32_t attempt() const { return attempt_; }

  L1Event classify(const L1Line& line, const Message& msg, const ProtocolEnv& env) const;
  void dispatch(L1Line& line, L1Event event, const Message* stimulus,
                const ProtocolEnv& env, Effects& fx);

 private:
  struct CellContext {
    bool acked_stimulus = false;
    std::optional<L1State> next_override;
  };

  void start_current(const ProtocolEnv& env, Effects& fx);
  void handle_ack(L1Line& line, const Message& msg, const ProtocolEnv& env, Effects& fx);
  void execute(ActionKind action, L1Line& line, const Message* stimulus,
               CellContext& ctx, const ProtocolEnv& env, Effects& fx);
  void complete(L1Line& line, DataWord value, Effects& fx);
  void enter(L1Line& line, L1State next, const ProtocolEnv& env);
  void settle(BlockAddr addr, const ProtocolEnv& env, Effects& fx);
  void request(L1Line& line, MessageKind kind, Effects& fx);
  void respecial(L1Line& line, const Message& trigger, MessageKind plain,
                 const ProtocolEnv& env, Effects& fx);
  bool stale_request(const Message& msg) const;

  NodeId id_;
  L1Cache cache_;
  std::optional<PendingOp> current_;
  std::optional<BlockAddr> victim_;
  std::optional<L1State> victim_tried_in_;
  std::map<std::pair<BlockAddr, std::uint16_t>, std::uint64_t> done_;
  std::uint32_t attempt_ = 0;
};

}  // namespace locke

#endif  // LOCKE_L1_CONTROLLER_HPP_
