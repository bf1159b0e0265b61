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

#ifndef LOCKE_L2_CONTROLLER_HPP_
#define LOCKE_L2_CONTROLLER_HPP_

#include <map>
#include <optional>
#include <vector>

#include "locke/controller.hpp"

namespace locke {

struct L2Line : LineCore {
  L2State state = L2State::I;
  std::vector<Message> stalled;
  bool replacement_stalled = false;
};

// The shared L2. Every block of the address space is resident from the start
// (state M, all tokens, data 0) and only leaves by an explicit replacement.
class L2Controller {
 public:
  L2Controller(int blocks, int total_tokens);

  NodeId id() const { return NodeId::l2(); }
  const std::map<BlockAddr, L2Line>& lines() const { return lines_; }
  const L2Line* find(BlockAddr addr) const;

  void receive(const Message& msg, const ProtocolEnv& env, Effects& fx);
  // Writeback directive: the Replacement event on `addr`.
  void replace(BlockAddr addr, const ProtocolEnv& env, Effects& fx);

  L2Event classify(const L2Line& line, const Message& msg, const ProtocolEnv& env) const;
  void dispatch(L2Line& line, L2Event event, const Message* stimulus,
                const ProtocolEnv& env, Effects& fx);

 private:
  struct CellContext {
    std::optional<L2State> next_override;
  };

  L2Line& line(BlockAddr addr);
  void execute(ActionKind action, L2Line& line, const Message* stimulus, CellContext& ctx,
               const ProtocolEnv& env, Effects& fx);
  void enter(L2Line& line, L2State next, const ProtocolEnv& env);
  void settle(L2Line& line, const ProtocolEnv& env, Effects& fx);

  std::map<BlockAddr, L2Line> lines_;
};

// Passive backing store behind the L2: keeps whatever is written back to it
// and acknowledges every payload.
class MemoryNode {
 public:
  struct Holding {
    TokenBundle tokens;
    std::optional<DataWord> data;
  };

  NodeId id() const { return NodeId::memory(); }
  const std::map<BlockAddr, Holding>& holdings() const { return holdings_; }
  void receive(const Message& msg, Effects& fx);

 private:
  std::map<BlockAddr, Holding> holdings_;
};

}  // namespace locke

#endif  // LOCKE_L2_CONTROLLER_HPP_
