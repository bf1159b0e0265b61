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

#ifndef LOCKE_NETWORK_HPP_
#define LOCKE_NETWORK_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "locke/message.hpp"

namespace locke {

enum class DeliveryPolicy : std::uint8_t { kFifo, kRandom, kAdversarial };

const char* to_string(DeliveryPolicy p);
std::optional<DeliveryPolicy> parse_policy(std::string_view s);

// Unordered point-to-point network. Nothing is lost or duplicated; the
// policy only decides which in-flight message goes next.
class Network {
 public:
  explicit Network(DeliveryPolicy policy = DeliveryPolicy::kRandom, std::uint64_t seed = 1);

  // Queues a unicast copy and returns its seq.
  std::uint64_t send(Message msg);
  // One copy per destination. Token-carrying messages are refused.
  void broadcast(const Message& msg, const std::vector<NodeId>& dests);

  // Seq of the message the policy would deliver next (advances the rng).
  std::optional<std::uint64_t> pick();
  // Next message per policy, removed from flight. Adversarial order has no
  // built-in choice; use take().
  std::optional<Message> step();
  // Removes the message with `seq`, if in flight.
  std::optional<Message> take(std::uint64_t seq);

  bool empty() const { return in_flight_.empty(); }
  const std::vector<Message>& in_flight() const { return in_flight_; }
  TokenBundle in_flight_bundle(BlockAddr addr) const;

  DeliveryPolicy policy() const { return policy_; }
  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }
  const std::array<std::uint64_t, kMessageKindCount>& sent_by_kind() const {
    return sent_by_kind_;
  }

 private:
  Message remove_at(std::size_t i);

  DeliveryPolicy policy_;
  std::mt19937_64 rng_;
  std::vector<Message> in_flight_;  // ascending seq
  std::uint64_t next_seq_ = 1;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::array<std::uint64_t, kMessageKindCount> sent_by_kind_{};
};

}  // namespace locke

#endif  // LOCKE_NETWORK_HPP_
