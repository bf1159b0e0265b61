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

#include "locke/checker.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace locke {

namespace {

std::string addr_str(BlockAddr a) { return "block " + std::to_string(a.value); }

bool is_payload(const Message& m) { return carries_tokens(m.kind); }

}  // namespace

std::string Verdict::str() const {
  std::string out = (ok ? "PASS " : "FAIL ") + check;
  if (addr) out += " " + addr_str(*addr);
  if (!detail.empty()) out += ": " + detail;
  return out;
}

Verdict check_conservation(const Snapshot& s, BlockAddr addr) {
  int count = 0;
  int owners = 0;
  std::ostringstream where;
  auto add = [&](const std::string& who, const TokenBundle& b) {
    if (b.count == 0 && !b.owner) return;
    count += b.count;
    owners += b.owner ? 1 : 0;
    where << " " << who << b;
  };
  for (const LineView& l : s.lines) {
    if (l.addr == addr) add(l.node.str(), l.tokens);
  }
  for (const MemoryView& m : s.memory) {
    if (m.addr == addr) add("MEM", m.tokens);
  }
  for (const Message& m : s.in_flight) {
    if (m.addr == addr && is_payload(m)) add("#" + std::to_string(m.seq), m.payload);
  }
  for (const Message& m : s.parked) {
    if (m.addr == addr && is_payload(m)) add("wait#" + std::to_string(m.seq), m.payload);
  }
  if (count != s.total_tokens || owners != 1) {
    std::ostringstream os;
    os << count << " tokens and " << owners << " owner(s), expected " << s.total_tokens
       << " and 1;" << where.str();
    return Verdict::fail("conservation", addr, os.str());
  }
  return Verdict::pass("conservation");
}

Verdict check_exclusivity(const Snapshot& s, BlockAddr addr) {
  const LineView* exclusive = nullptr;
  const LineView* owner = nullptr;
  for (const LineView& l : s.lines) {
    if (l.addr != addr) continue;
    const bool excl = (l.l1_state && (*l.l1_state == L1State::M || *l.l1_state == L1State::E)) ||
                      (l.l2_state && *l.l2_state == L2State::M);
    if (excl) {
      if (l.tokens.count != s.total_tokens) {
        return Verdict::fail("exclusivity", addr,
                             l.node.str() + " in " + l.state_name() + " holds only " +
                                 std::to_string(l.tokens.count) + " tokens");
      }
      if (exclusive) {
        return Verdict::fail("exclusivity", addr,
                             exclusive->node.str() + " and " + l.node.str() +
                                 " are both exclusive");
      }
      exclusive = &l;
    }
    if (l.tokens.owner) {
      if (owner) {
        return Verdict::fail("exclusivity", addr,
                             owner->node.str() + " and " + l.node.str() + " both hold the owner");
      }
      owner = &l;
    }
  }
  if (exclusive) {
    for (const LineView& l : s.lines) {
      if (l.addr == addr && &l != exclusive && l.tokens.count > 0) {
        return Verdict::fail("exclusivity", addr,
                             exclusive->node.str() + " is " + exclusive->state_name() +
                                 " while " + l.node.str() + " holds tokens");
      }
    }
  }
  return Verdict::pass("exclusivity");
}

Verdict check_value_coherence(const Snapshot& s, BlockAddr addr) {
  std::set<DataWord> values;
  std::ostringstream where;
  for (const LineView& l : s.lines) {
    if (l.addr == addr && l.tokens.count > 0 && l.data) {
      values.insert(*l.data);
      where << " " << l.node << "=" << *l.data;
    }
  }
  auto scan = [&](const std::vector<Message>& ms) {
    for (const Message& m : ms) {
      if (m.addr == addr && is_payload(m) && m.payload.count > 0 && m.data) {
        values.insert(*m.data);
        where << " #" << m.seq << "=" << *m.data;
      }
    }
  };
  scan(s.in_flight);
  scan(s.parked);
  if (values.size() > 1) {
    return Verdict::fail("value-coherence", addr, "divergent copies:" + where.str());
  }
  return Verdict::pass("value-coherence");
}

Verdict check_line_states(const Snapshot& s, BlockAddr addr) {
  const int T = s.total_tokens;
  for (const LineView& l : s.lines) {
    if (l.addr != addr) continue;
    std::string bad;
    if (!l.tokens.valid(T)) bad = "malformed token bundle";
    if (l.l1_state) {
      switch (*l.l1_state) {
        case L1State::S:
          if (l.tokens.count < 1 || !l.data) bad = "S without a token and data";
          break;
        case L1State::O:
          if (!l.tokens.owner || !l.data) bad = "O without the owner and data";
          break;
        case L1State::E:
        case L1State::M:
          if (l.tokens.count != T || !l.tokens.owner || !l.data) bad = "M/E without every token";
          break;
        case L1State::I:
          if (l.tokens.count != 0) bad = "I holding tokens";
          break;
        case L1State::PS:
        case L1State::PX:
        case L1State::PO:
          if (l.pending_acks == 0) bad = "control state with nothing to acknowledge";
          break;
        case L1State::F:
          if (l.pending != OpKind::kStore || !l.has_boss) bad = "F without a store and a boss";
          break;
        default:
          break;
      }
    } else if (l.l2_state) {
      switch (*l.l2_state) {
        case L2State::A:
          if (l.tokens.count < 1 || l.data) bad = "A without tokens or with data";
          break;
        case L2State::S:
          if (l.tokens.count < 1 || !l.data || l.tokens.owner) bad = "S malformed";
          break;
        case L2State::O:
          if (!l.tokens.owner || !l.data) bad = "O without the owner and data";
          break;
        case L2State::M:
          if (l.tokens.count != T || !l.tokens.owner || !l.data) bad = "M without every token";
          break;
        case L2State::I:
          if (l.tokens.count != 0) bad = "I holding tokens";
          break;
        default:
          if (l.pending_acks == 0) bad = "control state with nothing to acknowledge";
          break;
      }
    }
    if (!bad.empty()) {
      return Verdict::fail("line-state", addr,
                           l.node.str() + " " + l.state_name() + ": " + bad + " (tok=" +
                               std::to_string(l.tokens.count) + (l.tokens.owner ? ",own" : "") +
                               (l.data ? " data" : " no data") + ")");
    }
  }
  for (const Message& m : s.in_flight) {
    if (m.addr != addr) continue;
    if (const std::string why = check_message_shape(m, T); !why.empty()) {
      return Verdict::fail("line-state", addr, why + ": " + m.str());
    }
  }
  return Verdict::pass("line-state");
}

std::vector<Verdict> check_safety(const Snapshot& s) {
  std::vector<Verdict> out;
  for (int b = 0; b < s.blocks; ++b) {
    const BlockAddr a{static_cast<std::uint32_t>(b)};
    for (auto* check : {&check_conservation, &check_exclusivity, &check_value_coherence,
                        &check_line_states}) {
      Verdict v = check(s, a);
      if (!v.ok) out.push_back(std::move(v));
    }
  }
  return out;
}

Verdict check_serialization(const std::vector<OpRecord>& history, BlockAddr addr) {
  std::vector<const OpRecord*> stores;
  for (const OpRecord& r : history) {
    if (r.addr == addr && r.completed && r.kind == OpKind::kStore) stores.push_back(&r);
  }
  std::sort(stores.begin(), stores.end(), [](const OpRecord* a, const OpRecord* b) {
    return a->complete_time < b->complete_time;
  });
  for (const OpRecord& r : history) {
    if (r.addr != addr || !r.completed || r.kind != OpKind::kLoad) continue;
    DataWord before = 0;
    std::set<DataWord> legal;
    for (const OpRecord* st : stores) {
      if (st->complete_time < r.issue_time) {
        before = st->value;
      } else if (st->complete_time < r.complete_time) {
        legal.insert(st->value);
      }
    }
    legal.insert(before);
    if (!legal.contains(r.value)) {
      std::ostringstream os;
      os << r.str() << " observed " << r.value << "; legal {";
      bool first = true;
      for (DataWord v : legal) {
        os << (first ? "" : ",") << v;
        first = false;
      }
      os << "}";
      return Verdict::fail("serialization", addr, os.str());
    }
  }
  return Verdict::pass("serialization");
}

Verdict check_serialization(const std::vector<OpRecord>& history) {
  std::set<BlockAddr> addrs;
  for (const OpRecord& r : history) addrs.insert(r.addr);
  for (BlockAddr a : addrs) {
    Verdict v = check_serialization(history, a);
    if (!v.ok) return v;
  }
  return Verdict::pass("serialization");
}

Verdict check_progress(const std::vector<OpRecord>& history, std::uint64_t now,
                       std::uint64_t bound) {
  for (const OpRecord& r : history) {
    if (!r.issued) continue;
    const std::uint64_t end = r.completed ? r.complete_step : now;
    if (end - r.issue_step > bound) {
      return Verdict::fail("progress", r.addr,
                           r.str() + " outstanding for " + std::to_string(end - r.issue_step) +
                               " steps (bound " + std::to_string(bound) + ")");
    }
  }
  return Verdict::pass("progress");
}

}  // namespace locke
