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

#ifndef LOCKE_CONTROLLER_HPP_
#define LOCKE_CONTROLLER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locke/message.hpp"
#include "locke/tables.hpp"
#include "locke/types.hpp"

namespace locke {

// Deliberate protocol mutations used to check that the oracles notice.
enum class Fault : std::uint8_t {
  kNone,
  // The update on a DataOwner arrival keeps whatever the frame already held
  // instead of adopting the incoming data word.
  kStaleDataOnDataOwner,
};

struct ProtocolEnv {
  int n_l1 = 2;
  int total_tokens = 2;
  TableMode mode = TableMode::kErrata;
  std::uint64_t now = 0;
  Fault fault = Fault::kNone;
};

// One shipped payload awaiting its ACK.
struct SentRecord {
  NodeId dest;
  TokenBundle bundle;

  bool operator==(const SentRecord&) const = default;
};

// Fields shared by L1 and L2 lines.
struct LineCore {
  BlockAddr addr;
  std::optional<DataWord> data;
  TokenBundle tokens;
  std::vector<SentRecord> sent;

  int pending_acks() const { return static_cast<int>(sent.size()); }
};

struct PendingOp {
  OpKind kind = OpKind::kLoad;
  BlockAddr addr;
  DataWord value = 0;  // stores only
  Priority priority;
  std::uint64_t op_id = 0;
  bool getx_issued = false;

  bool operator==(const PendingOp&) const = default;
};

enum class Fanout : std::uint8_t {
  kUnicast,
  kRequest,  // every other L1 plus the L2
  kPeers,    // every other L1
};

struct Outgoing {
  Message msg;
  Fanout fanout = Fanout::kUnicast;
};

struct CompletedOp {
  NodeId node;
  std::uint64_t op_id = 0;
  OpKind kind = OpKind::kLoad;
  BlockAddr addr;
  DataWord value = 0;
};

// What a single table cell did, for the log and the MSC.
struct DispatchNote {
  NodeId node;
  BlockAddr addr;
  std::string before;
  std::string event;
  std::string after;
  Marker marker = Marker::kNormal;
  std::vector<ActionKind> actions;

  std::string str() const;
};

struct Effects {
  std::vector<Outgoing> out;
  std::vector<Message> timers;  // requests to re-broadcast after the backoff
  std::vector<CompletedOp> completed;
  std::vector<DispatchNote> notes;
  int freezes = 0;
};

namespace detail {

// Kind of payload message for `bundle` given the data the sender holds.
MessageKind payload_kind(const TokenBundle& bundle, bool has_data, int total_tokens);

Message make_payload(NodeId self, NodeId dest, const LineCore& line,
                     const TokenBundle& bundle, int total_tokens);

// Ships `bundle` out of `line` to `dest` and records the pending ACK.
void ship(NodeId self, NodeId dest, LineCore& line, TokenBundle bundle,
          const ProtocolEnv& env, Effects& fx);

void send_ack(NodeId self, const Message& stimulus, Effects& fx);

void send_retry(NodeId self, const Message& request, RetryKind kind,
                std::vector<NodeId> hints, Effects& fx);

// RETRY(HINT) naming the recorded destinations (owner-holding ones first
// when `owner_only`), or RETRY(BC) when there is nothing useful to name.
void inform_destinations(NodeId self, const LineCore& line, const Message& request,
                         bool owner_only, Effects& fx);

// Forwards a payload unchanged except for its destination.
void forward_payload(NodeId self, NodeId dest, const Message& stimulus, Effects& fx);

const Message& require(const Message* stimulus, const char* action);

}  // namespace detail

}  // namespace locke

#endif  // LOCKE_CONTROLLER_HPP_
