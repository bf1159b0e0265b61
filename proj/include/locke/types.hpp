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

#ifndef LOCKE_TYPES_HPP_
#define LOCKE_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace locke {

using DataWord = std::int32_t;

// Value a load reports when it completes against a line without valid data.
inline constexpr DataWord kNoData = -1;

// Block-granular address; there are no byte offsets anywhere in the model.
struct BlockAddr {
  std::uint32_t value = 0;

  constexpr BlockAddr() = default;
  constexpr explicit BlockAddr(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(const BlockAddr&, const BlockAddr&) = default;
  friend std::ostream& operator<<(std::ostream& os, BlockAddr a) {
    return os << a.value;
  }
};

enum class NodeKind : std::uint8_t { kL1, kL2, kMemory };

struct NodeId {
  NodeKind kind = NodeKind::kL1;
  std::uint16_t index = 0;

  static constexpr NodeId l1(std::uint16_t i) { return {NodeKind::kL1, i}; }
  static constexpr NodeId l2() { return {NodeKind::kL2, 0}; }
  static constexpr NodeId memory() { return {NodeKind::kMemory, 0}; }

  constexpr bool is_l1() const { return kind == NodeKind::kL1; }

  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;

  std::string str() const {
    switch (kind) {
      case NodeKind::kL1: return "L1." + std::to_string(index);
      case NodeKind::kL2: return "L2";
      case NodeKind::kMemory: return "MEM";
    }
    return "?";
  }
  friend std::ostream& operator<<(std::ostream& os, const NodeId& n) {
    return os << n.str();
  }
};

// Tokens for one block. The owner token is one of the counted tokens.
struct TokenBundle {
  int count = 0;
  bool owner = false;

  constexpr bool empty() const { return count == 0; }
  constexpr bool valid(int total) const {
    return count >= 0 && count <= total && (!owner || count >= 1);
  }

  TokenBundle& operator+=(const TokenBundle& o) {
    count += o.count;
    owner = owner || o.owner;
    return *this;
  }

  friend constexpr bool operator==(const TokenBundle&, const TokenBundle&) = default;
  friend std::ostream& operator<<(std::ostream& os, const TokenBundle& b) {
    return os << "{" << b.count << (b.owner ? ",own}" : "}");
  }
};

// Request priority: older birth wins, ties go to the smaller node index.
// Re-issues keep the birth of the first issue.
struct Priority {
  std::uint64_t birth = 0;
  NodeId node;

  constexpr bool beats(const Priority& o) const {
    if (birth != o.birth) return birth < o.birth;
    return node.index < o.node.index;
  }

  friend constexpr bool operator==(const Priority&, const Priority&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Priority& p) {
    return os << "(" << p.birth << "," << p.node << ")";
  }
};

enum class OpKind : std::uint8_t { kLoad, kStore };

inline const char* to_string(OpKind k) {
  return k == OpKind::kLoad ? "LD" : "ST";
}

// Raised when an "e" cell is reached or a controller detects an impossible
// stimulus. Carries enough context to name the offending (state, event).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bug in the simulator itself (e.g. shipping more tokens than held).
class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace locke

template <>
struct std::hash<locke::BlockAddr> {
  std::size_t operator()(const locke::BlockAddr& a) const noexcept {
    return std::hash<std::uint32_t>{}(a.value);
  }
};

#endif  // LOCKE_TYPES_HPP_
