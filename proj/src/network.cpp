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

#include "locke/network.hpp"

#include <algorithm>

#include "locke/types.hpp"

namespace locke {

const char* to_string(DeliveryPolicy p) {
  switch (p) {
    case DeliveryPolicy::kFifo: return "fifo";
    case DeliveryPolicy::kRandom: return "random";
    case DeliveryPolicy::kAdversarial: return "adversarial";
  }
  return "?";
}

std::optional<DeliveryPolicy> parse_policy(std::string_view s) {
  if (s == "fifo" || s == "FIFO") return DeliveryPolicy::kFifo;
  if (s == "random" || s == "RANDOM" || s == "RANDOM_ORDER" || s == "random_order") {
    return DeliveryPolicy::kRandom;
  }
  if (s == "adversarial" || s == "ADVERSARIAL") return DeliveryPolicy::kAdversarial;
  return std::nullopt;
}

Network::Network(DeliveryPolicy policy, std::uint64_t seed) : policy_(policy), rng_(seed) {}

std::uint64_t Network::send(Message msg) {
  msg.seq = next_seq_++;
  ++sent_;
  ++sent_by_kind_[static_cast<std::size_t>(msg.kind)];
  in_flight_.push_back(std::move(msg));
  return in_flight_.back().seq;
}

void Network::broadcast(const Message& msg, const std::vector<NodeId>& dests) {
  if (carries_tokens(msg.kind)) {
    throw InternalFault("broadcast of a token-carrying message: " + msg.str());
  }
  for (const NodeId& d : dests) {
    Message copy = msg;
    copy.dest = d;
    send(std::move(copy));
  }
}

Message Network::remove_at(std::size_t i) {
  Message m = std::move(in_flight_[i]);
  in_flight_.erase(in_flight_.begin() + static_cast<std::ptrdiff_t>(i));
  ++delivered_;
  return m;
}

std::optional<std::uint64_t> Network::pick() {
  if (in_flight_.empty()) return std::nullopt;
  switch (policy_) {
    case DeliveryPolicy::kFifo:
      return in_flight_.front().seq;
    case DeliveryPolicy::kRandom: {
      std::uniform_int_distribution<std::size_t> index(0, in_flight_.size() - 1);
      return in_flight_[index(rng_)].seq;
    }
    case DeliveryPolicy::kAdversarial:
      break;
  }
  throw InternalFault("adversarial delivery needs an explicit choice");
}

std::optional<Message> Network::step() {
  const auto seq = pick();
  if (!seq) return std::nullopt;
  return take(*seq);
}

std::optional<Message> Network::take(std::uint64_t seq) {
  const auto it = std::find_if(in_flight_.begin(), in_flight_.end(),
                               [seq](const Message& m) { return m.seq == seq; });
  if (it == in_flight_.end()) return std::nullopt;
  return remove_at(static_cast<std::size_t>(it - in_flight_.begin()));
}

TokenBundle Network::in_flight_bundle(BlockAddr addr) const {
  TokenBundle total;
  for (const Message& m : in_flight_) {
    if (m.addr == addr && carries_tokens(m.kind)) total += m.payload;
  }
  return total;
}

}  // namespace locke
