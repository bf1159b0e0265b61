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

#include "locke/l1_controller.hpp"
#include "support.hpp"

namespace locke {
namespace {

using testing::ack_for;
using testing::env2;
using testing::payload;
using testing::request;
using testing::sent_of;

const NodeId kSelf = NodeId::l1(0);
const NodeId kPeer = NodeId::l1(1);
const NodeId kL2 = NodeId::l2();

PendingOp load(std::uint32_t addr, std::uint64_t birth = 0) {
  PendingOp op;
  op.kind = OpKind::kLoad;
  op.addr = BlockAddr{addr};
  op.priority = {birth, kSelf};
  op.op_id = 1;
  return op;
}

PendingOp store(std::uint32_t addr, DataWord v, std::uint64_t birth = 0) {
  PendingOp op = load(addr, birth);
  op.kind = OpKind::kStore;
  op.value = v;
  return op;
}

class L1Test : public ::testing::Test {
 protected:
  L1Controller c{0, {2, 1}};
  ProtocolEnv env = env2();

  const L1Line& line(std::uint32_t a = 0) { return *c.cache().find(BlockAddr{a}); }

  Effects deliver(Message m) {
    m.dest = kSelf;
    Effects fx;
    c.receive(m, env, fx);
    return fx;
  }

  // Cold load served with every token: ends in M with the load done.
  Effects fill_exclusive(DataWord v = 5) {
    Effects fx;
    c.issue(load(0), env, fx);
    Message d = payload(MessageKind::kDataAllTokens, kL2, kSelf, {2, true}, v);
    return deliver(d);
  }
};

TEST_F(L1Test, ColdLoadBroadcastsGets) {
  Effects fx;
  c.issue(load(0), env, fx);
  ASSERT_EQ(fx.out.size(), 1u);
  EXPECT_EQ(fx.out[0].msg.kind, MessageKind::kGets);
  EXPECT_EQ(fx.out[0].fanout, Fanout::kRequest);
  EXPECT_EQ(line().state, L1State::IS);
}

TEST_F(L1Test, StrictColdLoadStaysInI) {
  env.mode = TableMode::kStrict;
  Effects fx;
  c.issue(load(0), env, fx);
  EXPECT_EQ(fx.out.size(), 1u);
  EXPECT_EQ(line().state, L1State::I);
}

TEST_F(L1Test, AllTokensCompleteTheLoadAndAck) {
  const Effects fx = fill_exclusive(5);
  ASSERT_EQ(fx.completed.size(), 1u);
  EXPECT_EQ(fx.completed[0].value, 5);
  EXPECT_EQ(line().state, L1State::M);
  EXPECT_EQ(line().tokens, (TokenBundle{2, true}));
  ASSERT_EQ(sent_of(fx, MessageKind::kAck).size(), 1u);
  EXPECT_EQ(sent_of(fx, MessageKind::kAck)[0]->dest, kL2);
  EXPECT_FALSE(c.busy());
}

TEST_F(L1Test, SharedDataEndsInS) {
  Effects fx;
  c.issue(load(0), env, fx);
  fx = deliver(payload(MessageKind::kDataShared, kPeer, kSelf, {1, false}, 3));
  EXPECT_EQ(line().state, L1State::S);
  ASSERT_EQ(fx.completed.size(), 1u);
  EXPECT_EQ(fx.completed[0].value, 3);
}

TEST_F(L1Test, TokensCompletingTheSetAreDataAllTokens) {
  Effects fx;
  c.issue(load(0), env, fx);
  deliver(payload(MessageKind::kDataShared, kPeer, kSelf, {1, false}, 3));
  EXPECT_EQ(c.classify(line(), payload(MessageKind::kDataOwner, kPeer, kSelf, {1, true}, 3), env),
            L1Event::DataAllTokens);
  EXPECT_EQ(c.classify(line(), payload(MessageKind::kTokens, kPeer, kSelf, {1, false}, {}), env),
            L1Event::DataAllTokens);
}

TEST_F(L1Test, SharedGetxSendsEverythingAndWaits) {
  Effects fx;
  c.issue(load(0), env, fx);
  deliver(payload(MessageKind::kDataShared, kPeer, kSelf, {1, false}, 3));
  fx = deliver(request(MessageKind::kGetx, kPeer, kSelf, 7));
  EXPECT_EQ(line().state, L1State::PS);
  const auto data = sent_of(fx, MessageKind::kDataShared);
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data[0]->dest, kPeer);
  fx = deliver(ack_for(*data[0], kPeer));
  EXPECT_EQ(c.cache().find(BlockAddr{0}) ? line().state : L1State::I, L1State::I);
}

TEST_F(L1Test, OwnerGetsGoesThroughPo) {
  fill_exclusive();
  Effects fx = deliver(request(MessageKind::kGets, kPeer, kSelf, 9));
  EXPECT_EQ(line().state, L1State::PO);
  const auto data = sent_of(fx, MessageKind::kDataShared);
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data[0]->payload, (TokenBundle{1, false}));
  deliver(ack_for(*data[0], kPeer));
  EXPECT_EQ(line().state, L1State::O);
  EXPECT_TRUE(line().tokens.owner);
}

TEST_F(L1Test, StrictPoAckDropsTheOwner) {
  env.mode = TableMode::kStrict;
  L1Line l;
  l.addr = BlockAddr{0};
  l.state = L1State::PO;
  l.tokens = {1, true};
  l.data = 4;
  l.sent.push_back({kPeer, {1, false}});
  Message a;
  a.kind = MessageKind::kAck;
  a.src = kPeer;
  a.dest = kSelf;
  a.sent_to = kPeer;
  a.acked = {1, false};
  l.sent.clear();
  Effects fx;
  c.dispatch(l, L1Event::Ack, &a, env, fx);
  EXPECT_EQ(l.state, L1State::I);
  EXPECT_EQ(l.tokens, TokenBundle{});
}

TEST_F(L1Test, StoreHitOnEDirtiesTheLine) {
  L1Line l;
  l.addr = BlockAddr{0};
  l.state = L1State::E;
  l.tokens = {2, true};
  l.data = 1;
  l.pending = store(0, 9);
  Effects fx;
  c.dispatch(l, L1Event::Store, nullptr, env, fx);
  EXPECT_EQ(l.state, L1State::M);
  EXPECT_EQ(l.data, 9);
}

TEST_F(L1Test, OlderGetxFreezesAYoungerStore) {
  Effects fx;
  c.issue(store(0, 1, 10), env, fx);
  EXPECT_EQ(line().state, L1State::IM);
  const Message older = request(MessageKind::kGetx, kPeer, kSelf, 4);
  EXPECT_EQ(c.classify(line(), older, env), L1Event::FreezeGETX);
  fx = deliver(older);
  EXPECT_EQ(line().state, L1State::F);
  EXPECT_EQ(fx.freezes, 1);
  ASSERT_TRUE(line().boss);
  EXPECT_EQ(line().boss->node, kPeer);

  Message done;
  done.kind = MessageKind::kComplete;
  done.src = kPeer;
  done.priority = {4, kPeer};
  fx = deliver(done);
  EXPECT_EQ(line().state, L1State::IM);
  EXPECT_EQ(sent_of(fx, MessageKind::kGetx).size(), 1u);
  EXPECT_FALSE(line().boss);
}

TEST_F(L1Test, YoungerGetxIsPlainGetx) {
  Effects fx;
  c.issue(store(0, 1, 3), env, fx);
  EXPECT_EQ(c.classify(line(), request(MessageKind::kGetx, kPeer, kSelf, 8), env), L1Event::Getx);
}

TEST_F(L1Test, FrozenLineBouncesDataToBoss) {
  Effects fx;
  c.issue(store(0, 1, 10), env, fx);
  deliver(request(MessageKind::kGetx, kPeer, kSelf, 4));
  fx = deliver(payload(MessageKind::kDataAllTokens, kL2, kSelf, {2, true}, 0));
  const auto out = sent_of(fx, MessageKind::kDataAllTokens);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0]->dest, kPeer);
  EXPECT_EQ(out[0]->origin, kL2);
  EXPECT_EQ(line().state, L1State::F);
}

TEST_F(L1Test, ErrorCellThrows) {
  fill_exclusive();
  EXPECT_THROW(deliver(payload(MessageKind::kDataShared, kPeer, kSelf, {1, false}, 2)),
               ProtocolError);
}

TEST_F(L1Test, ColdLineBouncesStrayData) {
  Message d = payload(MessageKind::kDataOwner, kPeer, kSelf, {1, true}, 2);
  d.addr = BlockAddr{1};
  const Effects fx = deliver(d);
  const auto out = sent_of(fx, MessageKind::kDataOwner);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0]->dest, kL2);
  EXPECT_EQ(out[0]->origin, kPeer);
  EXPECT_EQ(c.cache().find(BlockAddr{1}), nullptr);
}

TEST_F(L1Test, StallQueuesAndReplays) {
  Effects fx;
  c.issue(load(0), env, fx);
  L1Line l = line();
  c.dispatch(l, L1Event::Replacement, nullptr, env, fx);
  EXPECT_EQ(l.state, L1State::IS);
  Message g = request(MessageKind::kGets, kPeer, kSelf, 1);
  l.state = L1State::PX;
  l.tokens = {};
  l.sent.push_back({kPeer, {2, true}});
  c.dispatch(l, L1Event::Load, nullptr, env, fx);
  EXPECT_EQ(l.state, L1State::PX);
  (void)g;
}

TEST_F(L1Test, StaleRetryIsDropped) {
  Effects fx;
  c.issue(load(0), env, fx);
  Message r;
  r.kind = MessageKind::kRetry;
  r.src = kPeer;
  r.requester = kSelf;
  r.retry_kind = RetryKind::kBroadcast;
  r.attempt = c.attempt() + 5;
  fx = deliver(r);
  EXPECT_TRUE(fx.out.empty());
  r.attempt = c.attempt();
  fx = deliver(r);
  EXPECT_EQ(sent_of(fx, MessageKind::kGets).size(), 1u);
}

TEST_F(L1Test, ReplacementParksTheOp) {
  L1Controller small{0, {1, 1}};
  Effects fx;
  small.issue(load(0), env, fx);
  Message d = payload(MessageKind::kDataAllTokens, kL2, kSelf, {2, true}, 5);
  fx = {};
  small.receive(d, env, fx);
  fx = {};
  small.issue(load(1), env, fx);
  EXPECT_EQ(small.parked_victim(), BlockAddr{0});
  const auto out = sent_of(fx, MessageKind::kDataAllTokens);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0]->dest, kL2);
}

TEST(L1Cache, LruOrder) {
  L1Cache cache({1, 2});
  ASSERT_NE(cache.allocate(BlockAddr{0}), nullptr);
  ASSERT_NE(cache.allocate(BlockAddr{1}), nullptr);
  EXPECT_EQ(cache.allocate(BlockAddr{2}), nullptr);
  EXPECT_EQ(cache.lru_victim(BlockAddr{2})->addr, BlockAddr{0});
  cache.touch(BlockAddr{0});
  EXPECT_EQ(cache.lru_victim(BlockAddr{2})->addr, BlockAddr{1});
  cache.release(BlockAddr{1});
  EXPECT_NE(cache.allocate(BlockAddr{2}), nullptr);
}

}  // namespace
}  // namespace locke
