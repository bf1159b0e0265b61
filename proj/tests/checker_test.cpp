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

#include <gtest/gtest.h>

#include "locke/checker.hpp"
#include "support.hpp"

namespace locke {
namespace {

const BlockAddr kB0{0};

LineView l1(std::uint16_t i, L1State s, TokenBundle t, std::optional<DataWord> d) {
  LineView v;
  v.node = NodeId::l1(i);
  v.addr = kB0;
  v.l1_state = s;
  v.tokens = t;
  v.data = d;
  return v;
}

LineView l2(L2State s, TokenBundle t, std::optional<DataWord> d) {
  LineView v;
  v.node = NodeId::l2();
  v.addr = kB0;
  v.l2_state = s;
  v.tokens = t;
  v.data = d;
  return v;
}

Snapshot snap(std::vector<LineView> lines) {
  Snapshot s;
  s.total_tokens = 2;
  s.blocks = 1;
  s.lines = std::move(lines);
  return s;
}

TEST(Conservation, CountsLinesAndFlight) {
  Snapshot s = snap({l1(0, L1State::S, {1, false}, 3), l2(L2State::I, {}, {})});
  EXPECT_FALSE(check_conservation(s, kB0).ok);
  Message m = testing::payload(MessageKind::kDataOwner, NodeId::l2(), NodeId::l1(1),
                               {1, true}, 3);
  s.in_flight.push_back(m);
  EXPECT_TRUE(check_conservation(s, kB0).ok);
  s.in_flight.clear();
  s.parked.push_back(m);
  EXPECT_TRUE(check_conservation(s, kB0).ok);
}

TEST(Conservation, TwoOwnersFail) {
  const Snapshot s = snap({l1(0, L1State::O, {1, true}, 3), l2(L2State::O, {1, true}, 3)});
  const Verdict v = check_conservation(s, kB0);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.check, "conservation");
}

TEST(Exclusivity, ModifiedBesideAHolderFails) {
  EXPECT_TRUE(check_exclusivity(snap({l1(0, L1State::M, {2, true}, 1)}), kB0).ok);
  Snapshot s = snap({l1(0, L1State::M, {2, true}, 1), l1(1, L1State::S, {1, false}, 1)});
  EXPECT_FALSE(check_exclusivity(s, kB0).ok);
  EXPECT_FALSE(check_exclusivity(snap({l1(0, L1State::E, {1, true}, 1)}), kB0).ok);
}

TEST(ValueCoherence, CopiesMustAgree) {
  Snapshot s = snap({l1(0, L1State::S, {1, false}, 4), l2(L2State::O, {1, true}, 4)});
  EXPECT_TRUE(check_value_coherence(s, kB0).ok);
  s.lines[1].data = 5;
  EXPECT_FALSE(check_value_coherence(s, kB0).ok);
  // A tokenless frame may hold anything.
  s.lines[1].tokens = {};
  EXPECT_TRUE(check_value_coherence(s, kB0).ok);
}

TEST(LineStates, Legend) {
  EXPECT_TRUE(check_line_states(snap({l1(0, L1State::S, {1, false}, 0)}), kB0).ok);
  EXPECT_FALSE(check_line_states(snap({l1(0, L1State::S, {1, false}, {})}), kB0).ok);
  EXPECT_FALSE(check_line_states(snap({l1(0, L1State::I, {1, false}, {})}), kB0).ok);
  EXPECT_FALSE(check_line_states(snap({l1(0, L1State::PX, {}, {})}), kB0).ok);
  EXPECT_FALSE(check_line_states(snap({l2(L2State::A, {1, false}, 2)}), kB0).ok);
  EXPECT_FALSE(check_line_states(snap({l1(0, L1State::F, {}, {})}), kB0).ok);
}

TEST(Safety, ReportsOnlyFailures) {
  const Snapshot good = snap({l2(L2State::M, {2, true}, 0)});
  EXPECT_TRUE(check_safety(good).empty());
  const Snapshot bad = snap({l2(L2State::M, {1, true}, 0)});
  EXPECT_FALSE(check_safety(bad).empty());
}

OpRecord op(std::uint16_t node, OpKind k, DataWord v, std::uint64_t issue,
            std::uint64_t done) {
  OpRecord r;
  r.node = NodeId::l1(node);
  r.kind = k;
  r.addr = kB0;
  r.value = v;
  r.issued = true;
  r.completed = true;
  r.issue_time = issue;
  r.complete_time = done;
  r.issue_step = issue;
  r.complete_step = done;
  return r;
}

TEST(Serialization, LoadSeesLastStoreBeforeIt) {
  const std::vector<OpRecord> h{op(0, OpKind::kStore, 7, 1, 2),
                                op(1, OpKind::kLoad, 7, 3, 4)};
  EXPECT_TRUE(check_serialization(h).ok);
}

TEST(Serialization, InitialValueIsZero) {
  EXPECT_TRUE(check_serialization({op(1, OpKind::kLoad, 0, 1, 2)}).ok);
  EXPECT_FALSE(check_serialization({op(1, OpKind::kLoad, 9, 1, 2)}).ok);
}

TEST(Serialization, StaleValueFails) {
  const std::vector<OpRecord> h{op(0, OpKind::kStore, 7, 1, 2),
                                op(0, OpKind::kStore, 8, 3, 4),
                                op(1, OpKind::kLoad, 7, 5, 6)};
  const Verdict v = check_serialization(h);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.check, "serialization");
}

TEST(Serialization, OverlappingStoreIsLegal) {
  const std::vector<OpRecord> h{op(0, OpKind::kStore, 7, 1, 2),
                                op(1, OpKind::kLoad, 8, 3, 6),
                                op(0, OpKind::kStore, 8, 4, 5)};
  EXPECT_TRUE(check_serialization(h).ok);
}

TEST(Progress, Bound) {
  OpRecord r = op(0, OpKind::kLoad, 0, 10, 30);
  EXPECT_TRUE(check_progress({r}, 40, 20).ok);
  EXPECT_FALSE(check_progress({r}, 40, 19).ok);
  r.completed = false;
  EXPECT_TRUE(check_progress({r}, 25, 20).ok);
  EXPECT_FALSE(check_progress({r}, 31, 20).ok);
}

}  // namespace
}  // namespace locke
