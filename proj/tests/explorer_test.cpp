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

#include "locke/explorer.hpp"
#include "locke/runner.hpp"

namespace locke {
namespace {

Config tiny(TableMode mode = TableMode::kErrata) {
  Config c;
  c.n_l1 = 2;
  c.tokens = 2;
  c.blocks = 1;
  c.l1 = {1, 1};
  c.l2 = {1, 1};
  c.mode = mode;
  return c;
}

TEST(Explore, NoOpsIsOneState) {
  const ExploreReport r = explore(tiny(), {});
  EXPECT_EQ(r.visited, 1u);
  EXPECT_EQ(r.terminal, 1u);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.truncated);
}

TEST(Explore, OneColdLoad) {
  const ExploreReport r = explore(tiny(), parse_trace("0 LD 0\n", 2));
  EXPECT_EQ(r.visited, 9u);
  EXPECT_EQ(r.terminal, 1u);
  EXPECT_EQ(r.depth, 5);
  EXPECT_EQ(r.first_terminal, 5);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.truncated);
}

TEST(Explore, StoreThenLoadIsSafe) {
  ExploreOptions o;
  o.max_depth = 14;
  const ExploreReport r = explore(tiny(), parse_trace("0 ST 0 1\n1 LD 0\n", 2), o);
  EXPECT_TRUE(r.ok()) << r.str();
  EXPECT_GT(r.terminal, 0u);
}

TEST(Explore, IsDeterministic) {
  ExploreOptions o;
  o.max_depth = 10;
  const Trace t = default_explore_stimuli();
  EXPECT_EQ(explore(tiny(), t, o).str(), explore(tiny(), t, o).str());
}

TEST(Explore, StrictLosesTheOwnerToken) {
  const Trace t = default_explore_stimuli();
  const ExploreReport r = explore(tiny(TableMode::kStrict), t);
  ASSERT_TRUE(r.violation);
  EXPECT_NE(r.violation->what.find("conservation"), std::string::npos) << r.violation->what;

  RunOptions ro;
  ro.schedule = r.violation->schedule;
  ro.log = LogMode::kFull;
  const RunResult replay = run(tiny(TableMode::kStrict), t, ro);
  EXPECT_FALSE(replay.report.ok());
  bool po_ack_to_i = false;
  for (const LogEntry& e : replay.log) {
    for (const DispatchNote& n : e.notes) {
      po_ack_to_i |= n.before == "PO" && n.event == "Ack" && n.after == "I";
    }
  }
  EXPECT_TRUE(po_ack_to_i);
}

System start(const Trace& t) {
  Config c = tiny();
  c.blocks = 2;
  c.l1 = {2, 1};
  c.l2 = {2, 1};
  return System(c, t);
}

TEST(CanonicalKey, IgnoresInjectionOrder) {
  const Trace t = parse_trace("0 LD 0\n1 LD 1\n", 2);
  System a = start(t);
  System b = start(t);
  a.apply(Choice::inject(0));
  a.apply(Choice::inject(1));
  b.apply(Choice::inject(1));
  b.apply(Choice::inject(0));
  EXPECT_EQ(a.canonical_key(), b.canonical_key());
}

TEST(CanonicalKey, IgnoresSeqs) {
  const Trace t = parse_trace("0 LD 0\n1 LD 1\n", 2);
  System a = start(t);
  System b = start(t);
  a.apply(Choice::inject(0));
  a.apply(Choice::inject(1));
  b.apply(Choice::inject(1));
  b.apply(Choice::inject(0));
  auto to_l2 = [](const System& s) {
    for (const Message& m : s.network().in_flight()) {
      if (m.dest == NodeId::l2() && m.addr == BlockAddr{0}) return m.seq;
    }
    return std::uint64_t{0};
  };
  const auto sa = to_l2(a);
  const auto sb = to_l2(b);
  EXPECT_NE(sa, sb);
  a.apply(Choice::deliver(sa));
  b.apply(Choice::deliver(sb));
  EXPECT_EQ(a.canonical_key(), b.canonical_key());
}

TEST(CanonicalKey, SeesTokenCounts) {
  const Trace t = parse_trace("0 LD 0\n", 2);
  System a = start(t);
  a.apply(Choice::inject(0));
  System b = a;
  for (const Message& m : b.network().in_flight()) {
    if (m.dest == NodeId::l2()) b.apply(Choice::deliver(m.seq));
  }
  System c = b;
  for (const Message& m : c.network().in_flight()) {
    if (m.dest == NodeId::l1(0)) c.apply(Choice::deliver(m.seq));
  }
  EXPECT_NE(a.canonical_key(), b.canonical_key());
  EXPECT_NE(b.canonical_key(), c.canonical_key());
}

}  // namespace
}  // namespace locke
