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

#ifndef LOCKE_MESSAGE_HPP_
#define LOCKE_MESSAGE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locke/types.hpp"

namespace locke {

enum class MessageKind : std::uint8_t {
  kGets,
  kGetx,
  kSpecialGets,
  kSpecialGetx,
  kDataShared,
  kDataOwner,
  kDataAllTokens,
  kTokens,
  kAck,
  kRetry,
  kComplete,
};

inline constexpr int kMessageKindCount = 11;

inline const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::kGets: return "GETS";
    case MessageKind::kGetx: return "GETX";
    case MessageKind::kSpecialGets: return "SPECIAL_GETS";
    case MessageKind::kSpecialGetx: return "SPECIAL_GETX";
    case MessageKind::kDataShared: return "DATA_SHARED";
    case MessageKind::kDataOwner: return "DATA_OWNER";
    case MessageKind::kDataAllTokens: return "DATA_ALL_TOKENS";
    case MessageKind::kTokens: return "TOKENS";
    case MessageKind::kAck: return "ACK";
    case MessageKind::kRetry: return "RETRY";
    case MessageKind::kComplete: return "COMPLETE";
  }
  return "?";
}

constexpr bool carries_tokens(MessageKind k) {
  return k == MessageKind::kDataShared || k == MessageKind::kDataOwner ||
         k == MessageKind::kDataAllTokens || k == MessageKind::kTokens;
}

constexpr bool is_request(MessageKind k) {
  return k == MessageKind::kGets || k == MessageKind::kGetx ||
         k == MessageKind::kSpecialGets || k == MessageKind::kSpecialGetx;
}

enum class RetryKind : std::uint8_t { kNone, kBroadcast, kLater, kHint };

inline const char* to_string(RetryKind k) {
  switch (k) {
    case RetryKind::kNone: return "-";
    case RetryKind::kBroadcast: return "BC";
    case RetryKind::kLater: return "LATER";
    case RetryKind::kHint: return "HINT";
  }
  return "?";
}

struct Message {
  MessageKind kind = MessageKind::kGets;
  BlockAddr addr;
  NodeId src;
  NodeId dest;
  // Node that must receive the ACK for this payload; unchanged by bounces.
  NodeId origin;
  // Destination the origin recorded when it shipped the payload. Echoed in
  // the ACK so the origin can retire the matching ledger entry.
  NodeId sent_to;
  NodeId requester;
  Priority priority;
  TokenBundle payload;
  std::optional<DataWord> data;
  RetryKind retry_kind = RetryKind::kNone;
  std::vector<NodeId> hints;  // sorted, unique
  TokenBundle acked;          // ACK only: the bundle being acknowledged
  // Request wave number of the requester; a RETRY echoes the one it answers.
  std::uint32_t attempt = 0;
  std::uint64_t seq = 0;

  std::string str() const;
};

// Canonical text of everything except seq; used for state hashing and MSCs.
std::string describe(const Message& m, bool with_seq = false);

// Structural checks from the message-kind contract; empty string when valid.
std::string check_message_shape(const Message& m, int total_tokens);

}  // namespace locke

#endif  // LOCKE_MESSAGE_HPP_
