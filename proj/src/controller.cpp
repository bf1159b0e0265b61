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

#include "locke/controller.hpp"

#include <algorithm>
#include <sstream>

namespace locke {

std::string DispatchNote::str() const {
  std::ostringstream os;
  os << node << " a" << addr << " " << before << " " << event << ": ";
  switch (marker) {
    case Marker::kStall: os << "stall"; break;
    case Marker::kIgnore: os << "ignore"; break;
    case Marker::kError: os << "error"; break;
    case Marker::kNormal:
      for (std::size_t i = 0; i < actions.size(); ++i) {
        os << (i ? " " : "") << to_string(actions[i]);
      }
      break;
  }
  os << " -> " << after;
  return os.str();
}

namespace detail {

MessageKind payload_kind(const TokenBundle& bundle, bool has_data, int total_tokens) {
  if (bundle.owner) {
    if (!has_data) throw InternalFault("owner token without data");
    return bundle.count == total_tokens ? MessageKind::kDataAllTokens
                                        : MessageKind::kDataOwner;
  }
  return has_data ? MessageKind::kDataShared : MessageKind::kTokens;
}

Message make_payload(NodeId self, NodeId dest, const LineCore& line,
                     const TokenBundle& bundle, int total_tokens) {
  Message m;
  m.kind = payload_kind(bundle, line.data.has_value(), total_tokens);
  m.addr = line.addr;
  m.src = self;
  m.dest = dest;
  m.origin = self;
  m.sent_to = dest;
  m.payload = bundle;
  if (m.kind != MessageKind::kTokens) m.data = line.data;
  return m;
}

void ship(NodeId self, NodeId dest, LineCore& line, TokenBundle bundle,
          const ProtocolEnv& env, Effects& fx) {
  if (bundle.count <= 0) return;
  if (bundle.count > line.tokens.count || (bundle.owner && !line.tokens.owner)) {
    throw InternalFault("shipping more tokens than held at " + self.str());
  }
  fx.out.push_back({make_payload(self, dest, line, bundle, env.total_tokens),
                    Fanout::kUnicast});
  line.tokens.count -= bundle.count;
  if (bundle.owner) line.tokens.owner = false;
  line.sent.push_back({dest, bundle});
}

void send_ack(NodeId self, const Message& stimulus, Effects& fx) {
  Message ack;
  ack.kind = MessageKind::kAck;
  ack.addr = stimulus.addr;
  ack.src = self;
  ack.dest = stimulus.origin;
  ack.sent_to = stimulus.sent_to;
  ack.acked = stimulus.payload;
  fx.out.push_back({ack, Fanout::kUnicast});
}

void send_retry(NodeId self, const Message& request, RetryKind kind,
                std::vector<NodeId> hints, Effects& fx) {
  std::sort(hints.begin(), hints.end());
  hints.erase(std::unique(hints.begin(), hints.end()), hints.end());
  if (kind == RetryKind::kHint && hints.empty()) kind = RetryKind::kBroadcast;
  if (kind != RetryKind::kHint) hints.clear();
  Message r;
  r.kind = MessageKind::kRetry;
  r.addr = request.addr;
  r.src = self;
  r.dest = request.requester;
  r.requester = request.requester;
  r.retry_kind = kind;
  r.attempt = request.attempt;
  r.hints = std::move(hints);
  fx.out.push_back({std::move(r), Fanout::kUnicast});
}

void inform_destinations(NodeId self, const LineCore& line, const Message& request,
                         bool owner_only, Effects& fx) {
  std::vector<NodeId> hints;
  if (owner_only) {
    for (const auto& s : line.sent) {
      if (s.bundle.owner) hints.push_back(s.dest);
    }
  }
  if (hints.empty()) {
    for (const auto& s : line.sent) hints.push_back(s.dest);
  }
  send_retry(self, request, RetryKind::kHint, std::move(hints), fx);
}

void forward_payload(NodeId self, NodeId dest, const Message& stimulus, Effects& fx) {
  if (!carries_tokens(stimulus.kind)) {
    throw InternalFault("bounce of a message without tokens");
  }
  Message m = stimulus;
  m.src = self;
  m.dest = dest;
  fx.out.push_back({std::move(m), Fanout::kUnicast});
}

const Message& require(const Message* stimulus, const char* action) {
  if (stimulus == nullptr) {
    throw InternalFault(std::string(action) + " needs a message stimulus");
  }
  return *stimulus;
}

}  // namespace detail

}  // namespace locke
