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

#ifndef LOCKE_TESTS_SUPPORT_HPP_
#define LOCKE_TESTS_SUPPORT_HPP_

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "locke/controller.hpp"
#include "locke/message.hpp"
#include "locke/tables.hpp"

namespace locke::testing {

struct GoldenCell {
  std::string table;
  std::string state;
  std::string event;
  std::string text;
};

// Keeps gtest from printing the cell as raw bytes.
inline void PrintTo(const GoldenCell& c, std::ostream* os) {
  *os << c.table << "," << c.state << "," << c.event;
}

// "L1,S,Getx → sendAllTokens /PS" per line.
inline std::vector<GoldenCell> load_golden(const std::string& path) {
  std::ifstream in(path);
  std::vector<GoldenCell> out;
  std::string line;
  const std::string arrow = " \xE2\x86\x92 ";
  while (std::getline(in, line)) {
    const auto at = line.find(arrow);
    if (at == std::string::npos) continue;
    const std::string key = line.substr(0, at);
    GoldenCell c;
    c.text = line.substr(at + arrow.size());
    const auto c1 = key.find(',');
    const auto c2 = key.find(',', c1 + 1);
    c.table = key.substr(0, c1);
    c.state = key.substr(c1 + 1, c2 - c1 - 1);
    c.event = key.substr(c2 + 1);
    out.push_back(std::move(c));
  }
  return out;
}

inline std::optional<L1Event> l1_event(const std::string& name) {
  for (int e = 0; e < kL1EventCount; ++e) {
    if (name == to_string(static_cast<L1Event>(e))) return static_cast<L1Event>(e);
  }
  return std::nullopt;
}

inline std::optional<L2Event> l2_event(const std::string& name) {
  for (int e = 0; e < kL2EventCount; ++e) {
    if (name == to_string(static_cast<L2Event>(e))) return static_cast<L2Event>(e);
  }
  return std::nullopt;
}

// Table text for a golden cell, or "?" when the names do not resolve.
inline std::string lookup_text(const GoldenCell& c, TableMode mode) {
  if (c.table == "L1") {
    const auto s = parse_l1_state(c.state);
    const auto e = l1_event(c.event);
    if (!s || !e) return "?";
    return cell_text(l1_table_lookup(*s, *e, mode));
  }
  const auto s = parse_l2_state(c.state);
  const auto e = l2_event(c.event);
  if (!s || !e) return "?";
  return cell_text(l2_table_lookup(*s, *e, mode));
}

inline ProtocolEnv env2(TableMode mode = TableMode::kErrata) {
  ProtocolEnv env;
  env.n_l1 = 2;
  env.total_tokens = 2;
  env.mode = mode;
  return env;
}

inline Message request(MessageKind kind, NodeId from, NodeId to, std::uint64_t birth,
                       std::uint32_t attempt = 1) {
  Message m;
  m.kind = kind;
  m.src = from;
  m.dest = to;
  m.requester = from;
  m.priority = {birth, from};
  m.attempt = attempt;
  return m;
}

inline Message payload(MessageKind kind, NodeId from, NodeId to, TokenBundle tokens,
                       std::optional<DataWord> data) {
  Message m;
  m.kind = kind;
  m.src = from;
  m.dest = to;
  m.origin = from;
  m.sent_to = to;
  m.payload = tokens;
  m.data = data;
  return m;
}

inline Message ack_for(const Message& p, NodeId from) {
  Message a;
  a.kind = MessageKind::kAck;
  a.addr = p.addr;
  a.src = from;
  a.dest = p.origin;
  a.sent_to = p.sent_to;
  a.acked = p.payload;
  return a;
}

inline std::vector<const Message*> sent_of(const Effects& fx, MessageKind kind) {
  std::vector<const Message*> out;
  for (const Outgoing& o : fx.out) {
    if (o.msg.kind == kind) out.push_back(&o.msg);
  }
  return out;
}

}  // namespace locke::testing

#endif  // LOCKE_TESTS_SUPPORT_HPP_
