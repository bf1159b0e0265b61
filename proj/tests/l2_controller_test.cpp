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

#include "locke/l2_controller.hpp"
#include "support.hpp"

namespace locke {
namespace {

using testing::ack_for;
using testing::env2;
using testing::payload;
using testing::request;
using testing::sent_of;

const NodeId kA = NodeId::l1(0);
const NodeId kB = NodeId::l1(1);
const NodeId kL2 = NodeId::l2();

class L2Test : public ::testing::Test {
 protected:
  L2Controller l2{2, 2};
  ProtocolEnv env = env2();

  const L2Line& line(std::uint32_t a = 0) { return *l2.find(BlockAddr{a}); }

  Effects deliver(Message m) {
    m.dest = kL2;
    Effects fx;
    l2.receive(m, env, fx);
    return fx;
  }
};

TEST_F(L2Test, StartsOwningEveryBlock) {
  EXPECT_EQ(l2.lines().size(), 2u);
  EXPECT_EQ(line(1).state, L2State::M);
  EXPECT_EQ(line(1).tokens, (TokenBundle{2, true}));
  EXPECT_EQ(line(1).data, 0);
}

TEST_F(L2Test, GetxHandsOverEverythingThenInvalidates) {
  Effects fx = deliver(request(MessageKind::kGetx, kA, kL2, 1));
  EXPECT_EQ(line().state, L2State::PX);
  const auto d = sent_of(fx, MessageKind::kDataAllTokens);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0]->dest, kA);
  EXPECT_EQ(d[0]->payload, (TokenBundle{2, true}));
  deliver(ack_for(*d[0], kA));
  EXPECT_EQ(line().state, L2State::I);
  EXPECT_EQ(line().tokens, TokenBundle{});
}

TEST_F(L2Test, GetsOnModifiedHandsOverEverything) {
  const Effects fx = deliver(request(MessageKind::kGets, kA, kL2, 1));
  const auto d = sent_of(fx, MessageKind::kDataAllTokens);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(line().state, L2State::PX);
}

class L2OwnerTest : public L2Test {
 protected:
  // Empties the line, then takes back the owner token only.
  void SetUp() override {
    Effects fx = deliver(request(MessageKind::kGetx, kA, kL2, 1));
    deliver(ack_for(*sent_of(fx, MessageKind::kDataAllTokens)[0], kA));
    deliver(payload(MessageKind::kDataOwner, kA, kL2, {1, true}, 6));
  }
};

TEST_F(L2OwnerTest, HoldsTheOwner) {
  EXPECT_EQ(line().state, L2State::O);
  EXPECT_EQ(line().data, 6);
}

TEST_F(L2OwnerTest, LoneOwnerTokenIsSentWithTheData) {
  const Effects fx = deliver(request(MessageKind::kGets, kB, kL2, 2));
  const auto d = sent_of(fx, MessageKind::kDataOwner);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0]->payload, (TokenBundle{1, true}));
  EXPECT_EQ(d[0]->data, 6);
  EXPECT_EQ(line().state, L2State::PX);
}

TEST_F(L2OwnerTest, BouncedSharedCopyIsTokens) {
  const Message back = payload(MessageKind::kDataShared, kA, kL2, {1, false}, 6);
  // With the set complete it is all tokens instead.
  EXPECT_EQ(l2.classify(line(), back, env), L2Event::DataAllTokens);
  ProtocolEnv e3 = env;
  e3.total_tokens = 3;
  EXPECT_EQ(l2.classify(line(), back, e3), L2Event::Tokens);
}

TEST_F(L2Test, EmptyLineAsksForABroadcast) {
  Effects fx = deliver(request(MessageKind::kGetx, kA, kL2, 1));
  ASSERT_EQ(sent_of(fx, MessageKind::kDataAllTokens).size(), 1u);
  deliver(ack_for(*sent_of(fx, MessageKind::kDataAllTokens)[0], kA));
  ASSERT_EQ(line().state, L2State::I);
  fx = deliver(request(MessageKind::kSpecialGets, kB, kL2, 2));
  const auto r = sent_of(fx, MessageKind::kRetry);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0]->dest, kB);
}

TEST_F(L2Test, DataOwnerIsStored) {
  Effects fx = deliver(request(MessageKind::kGetx, kA, kL2, 1));
  deliver(ack_for(*sent_of(fx, MessageKind::kDataAllTokens)[0], kA));
  fx = deliver(payload(MessageKind::kDataAllTokens, kA, kL2, {2, true}, 42));
  EXPECT_EQ(line().state, L2State::M);
  EXPECT_EQ(line().data, 42);
  EXPECT_EQ(sent_of(fx, MessageKind::kAck).size(), 1u);
}

TEST_F(L2Test, PoAckKeepsTheOwnerUnderErrata) {
  for (TableMode m : {TableMode::kErrata, TableMode::kStrict}) {
    const L2Transition& c = l2_table_lookup(L2State::PO, L2Event::Ack, m);
    ASSERT_TRUE(c.next);
    EXPECT_EQ(*c.next, m == TableMode::kErrata ? L2State::O : L2State::I);
  }
}

TEST_F(L2Test, ReplacementWritesBack) {
  Effects fx;
  l2.replace(BlockAddr{1}, env, fx);
  const auto w = sent_of(fx, MessageKind::kDataAllTokens);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0]->dest, NodeId::memory());
}

TEST(Memory, KeepsAndAcks) {
  MemoryNode mem;
  Effects fx;
  mem.receive(payload(MessageKind::kDataAllTokens, kL2, NodeId::memory(), {2, true}, 7), fx);
  ASSERT_EQ(fx.out.size(), 1u);
  EXPECT_EQ(fx.out[0].msg.kind, MessageKind::kAck);
  EXPECT_EQ(fx.out[0].msg.dest, kL2);
  const auto& h = mem.holdings().at(BlockAddr{0});
  EXPECT_EQ(h.tokens, (TokenBundle{2, true}));
  EXPECT_EQ(h.data, 7);
  EXPECT_THROW(mem.receive(request(MessageKind::kGets, kA, NodeId::memory(), 1), fx),
               ProtocolError);
}

}  // namespace
}  // namespace locke
