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

#include "locke/message.hpp"

#include <sstream>

namespace locke {

std::string describe(const Message& m, bool with_seq) {
  std::ostringstream os;
  os << to_string(m.kind) << " a" << m.addr << " " << m.src << "->" << m.dest;
  if (is_request(m.kind)) {
    os << " req=" << m.requester << " pri=" << m.priority << " at=" << m.attempt;
  }
  if (carries_tokens(m.kind)) {
    os << " tok=" << m.payload << " org=" << m.origin << " to=" << m.sent_to;
    if (m.data) os << " d=" << *m.data;
  }
  switch (m.kind) {
    case MessageKind::kAck:
      os << " to=" << m.sent_to << " acked=" << m.acked;
      break;
    case MessageKind::kRetry:
      os << " " << to_string(m.retry_kind) << " at=" << m.attempt;
      if (!m.hints.empty()) {
        os << "{";
        for (std::size_t i = 0; i < m.hints.size(); ++i) {
          os << (i ? "," : "") << m.hints[i];
        }
        os << "}";
      }
      break;
    case MessageKind::kComplete:
      os << " pri=" << m.priority;
      break;
    default:
      break;
  }
  if (with_seq) os << " #" << m.seq;
  return os.str();
}

std::string Message::str() const { return describe(*this, true); }

std::string check_message_shape(const Message& m, int total_tokens) {
  if (carries_tokens(m.kind)) {
    if (m.payload.count < 1) return "token message with no tokens";
    if (!m.payload.valid(total_tokens)) return "malformed token bundle";
  } else if (!m.payload.empty()) {
    return "tokens attached to a non-payload message";
  }
  switch (m.kind) {
    case MessageKind::kDataAllTokens:
      if (m.payload.count != total_tokens || !m.payload.owner)
        return "DATA_ALL_TOKENS without every token";
      if (!m.data) return "DATA_ALL_TOKENS without data";
      break;
    case MessageKind::kDataOwner:
      if (!m.payload.owner) return "DATA_OWNER without owner token";
      if (!m.data) return "DATA_OWNER without data";
      break;
    case MessageKind::kDataShared:
      if (m.payload.owner) return "DATA_SHARED carrying the owner token";
      if (!m.data) return "DATA_SHARED without data";
      break;
    case MessageKind::kTokens:
      if (m.payload.owner) return "TOKENS carrying the owner token";
      if (m.data) return "TOKENS carrying data";
      break;
    case MessageKind::kRetry:
      if (m.retry_kind == RetryKind::kNone) return "RETRY without a kind";
      if ((m.retry_kind == RetryKind::kHint) == m.hints.empty())
        return "RETRY hint set does not match its kind";
      break;
    default:
      break;
  }
  return {};
}

}  // namespace locke
