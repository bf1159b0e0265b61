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

#include <sstream>

#include "locke/config.hpp"
#include "locke/runner.hpp"
#include "locke/trace.hpp"

namespace locke {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

TEST(ParseTrace, StoreAndLoad) {
  const Trace t = parse_trace("0 ST 4 7\n1 LD 4", 2);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], (TraceOp{0, OpKind::kStore, BlockAddr{4}, 7, 0}));
  EXPECT_EQ(t[1], (TraceOp{1, OpKind::kLoad, BlockAddr{4}, 0, 0}));
}

TEST(ParseTrace, CommentsAndBlankLines) {
  const Trace t = parse_trace("# warmup\n\n0 LD 1   # first\n\n", 2);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].addr, BlockAddr{1});
}

TEST(ParseTrace, CpuOutOfRange) {
  try {
    parse_trace("3 LD 1", 2);
    FAIL() << "accepted cpu 3";
  } catch (const TraceError& e) {
    EXPECT_STREQ(e.what(), "cpu out of range at line 1");
  }
}

TEST(ParseTrace, FenceOpensASegment) {
  const Trace t = parse_trace("0 ST 4 7\nFENCE\n1 LD 4\n", 2);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].segment, 0);
  EXPECT_EQ(t[1].segment, 1);
  EXPECT_EQ(parse_trace(format_trace(t), 2), t);
}

TEST(ParseTrace, Malformed) {
  EXPECT_THROW(parse_trace("0 LD", 2), TraceError);
  EXPECT_THROW(parse_trace("0 ST 1", 2), TraceError);
  EXPECT_THROW(parse_trace("0 MOV 1 2", 2), TraceError);
}

TEST(ParseConfig, KeysAndErrors) {
  const Config c = parse_config("n_l1 = 3\nblocks=8 # more\nmode = strict\n");
  EXPECT_EQ(c.n_l1, 3);
  EXPECT_EQ(c.blocks, 8);
  EXPECT_EQ(c.mode, TableMode::kStrict);
  EXPECT_EQ(c.total_tokens(), 3);
  EXPECT_THROW(parse_config("colour = red\n"), ConfigError);
  EXPECT_THROW(parse_config("n_l1 = many\n"), ConfigError);
}

TEST(Schedule, RoundTrips) {
  const std::vector<Choice> s{Choice::inject(1), Choice::deliver(4), Choice::fire(2),
                              Choice::timeout(0)};
  EXPECT_EQ(parse_schedule(format_schedule(s)), s);
  EXPECT_THROW(parse_schedule("jump 3\n"), ScheduleError);
}

TEST(Run, EmptyTrace) {
  const RunResult r = run(Config{}, {});
  EXPECT_EQ(r.report.messages, 0u);
  EXPECT_TRUE(r.report.ok());
  for (const Verdict& v : r.report.verdicts) EXPECT_TRUE(v.ok) << v.str();
}

TEST(Run, FencedStoreThenLoad) {
  Config c;
  c.blocks = 8;
  const RunResult r = run(c, parse_trace("0 ST 4 7\nFENCE\n1 LD 4\n", 2), {{}, LogMode::kFull});
  ASSERT_TRUE(r.report.ok()) << r.report.str();
  DataWord seen = -1;
  for (const LogEntry& e : r.log) {
    for (const CompletedOp& op : e.completed) {
      if (op.kind == OpKind::kLoad) seen = op.value;
    }
  }
  EXPECT_EQ(seen, 7);
  EXPECT_EQ(r.report.messages, 9u);
  EXPECT_EQ(r.report.steps, 9u);
  EXPECT_EQ(r.report.count(MessageKind::kGets), 2u);
  EXPECT_EQ(r.report.count(MessageKind::kGetx), 2u);
  EXPECT_EQ(r.report.count(MessageKind::kDataShared), 1u);
  EXPECT_EQ(r.report.count(MessageKind::kDataAllTokens), 1u);
  EXPECT_EQ(r.report.count(MessageKind::kAck), 2u);
  EXPECT_EQ(r.report.count(MessageKind::kComplete), 1u);
}

TEST(Run, ScheduleReplaysTheSameRun) {
  Config c;
  c.seed = 17;
  const Trace t = random_trace(200, 2, 4, 9, 17);
  const RunResult a = run(c, t);
  RunOptions ro;
  ro.schedule = a.schedule;
  const RunResult b = run(c, t, ro);
  EXPECT_EQ(a.report.str(), b.report.str());
}

TEST(Fuzz, NoOpsPasses) {
  FuzzOptions o;
  o.ops = 0;
  o.seeds = 3;
  const FuzzSummary s = fuzz(Config{}, o);
  EXPECT_TRUE(s.ok());
  EXPECT_EQ(s.reports.size(), 3u);
}

TEST(Fuzz, SameSeedSameReport) {
  FuzzOptions o;
  o.ops = 500;
  o.seeds = 1;
  o.first_seed = 9;
  Config c;
  c.n_l1 = 4;
  EXPECT_EQ(fuzz(c, o).str(), fuzz(c, o).str());
}

TEST(Msc, SingleGets) {
  Config c;
  c.n_l1 = 1;
  const RunResult r = run(c, parse_trace("0 LD 0\n", 1), {{}, LogMode::kFull});
  const auto rows = lines_of(dump_msc(r.log, 1));
  ASSERT_EQ(rows.size(), 5u) << dump_msc(r.log, 1);
  EXPECT_EQ(rows[0].rfind("step", 0), 0u);
  EXPECT_NE(rows[1].find("GETS"), std::string::npos);
  EXPECT_NE(rows[2].find("DATA_ALL_TOKENS"), std::string::npos);
  EXPECT_NE(rows[3].find("done"), std::string::npos);
  EXPECT_NE(rows[4].find("ACK"), std::string::npos);
}

TEST(Msc, EmptyLogIsHeaderOnly) {
  EXPECT_EQ(lines_of(dump_msc({}, 2)).size(), 1u);
}

TEST(Msc, UnusedBlockIsHeaderOnly) {
  Config c;
  c.n_l1 = 1;
  const RunResult r = run(c, parse_trace("0 LD 0\n", 1), {{}, LogMode::kFull});
  EXPECT_EQ(lines_of(dump_msc(r.log, 1, BlockAddr{3})).size(), 1u);
}

}  // namespace
}  // namespace locke
