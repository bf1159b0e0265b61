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

#include "locke/l2_controller.hpp"

#include <algorithm>
#include <sstream>

namespace locke {

namespace {

bool is_waiting(L2State s) {
  return s == L2State::PA || s == L2State::PT || s == L2State::PX || s == L2State::PO;
}

}  // namespace

L2Controller::L2Controller(int blocks, int total_tokens) {
  for (int b = 0; b < blocks; ++b) {
    L2Line l;
    l.addr = BlockAddr{static_cast<std::uint32_t>(b)};
    l.state = L2State::M;
    l.tokens = {total_tokens, true};
    l.data = 0;
    lines_.emplace(l.addr, std::move(l));
  }
}

const L2Line* L2Controller::find(BlockAddr addr) const {
  const auto it = lines_.find(addr);
  return it == lines_.end() ? nullptr : &it->second;
}

L2Line& L2Controller::line(BlockAddr addr) {
  const auto it = lines_.find(addr);
  if (it == lines_.end()) {
    throw InternalFault("block " + std::to_string(addr.value) + " outside the L2");
  }
  return it->second;
}

L2Event L2Controller::classify(const L2Line& line, const Message& msg,
                               const ProtocolEnv& env) const {
  switch (msg.kind) {
    case MessageKind::kGets: return L2Event::L1_Gets;
    case MessageKind::kGetx: return L2Event::L1_Getx;
    case MessageKind::kSpecialGets: return L2Event::SpecialGETS;
    case MessageKind::kSpecialGetx: return L2Event::SpecialGETX;
    case MessageKind::kTokens: return L2Event::Tokens;
    case MessageKind::kDataShared:
    case MessageKind::kDataOwner:
    case MessageKind::kDataAllTokens:
      if (line.tokens.count + msg.payload.count == env.total_tokens) {
        return L2Event::DataAllTokens;
      }
      if (msg.kind != MessageKind::kDataShared) return L2Event::DataOwner;
      // The owner already has the data; a bounced shared copy only
      // brings tokens back.
      return line.tokens.owner ? L2Event::Tokens : L2Event::DataShared;
    case MessageKind::kAck: return L2Event::Ack;
    case MessageKind::kRetry:
    case MessageKind::kComplete:
      break;
  }
  throw ProtocolError("L2 received " + msg.str() + ", which is never routed to it");
}

void L2Controller::receive(const Message& msg, const ProtocolEnv& env, Effects& fx) {
  L2Line& l = line(msg.addr);
  if (msg.kind == MessageKind::kAck) {
    const auto it =
        std::find(l.sent.begin(), l.sent.end(), SentRecord{msg.sent_to, msg.acked});
    if (it == l.sent.end()) {
      throw ProtocolError("L2: ACK matches no pending send: " + msg.str());
    }
    l.sent.erase(it);
    if (!l.sent.empty()) {
      fx.notes.push_back({id(), l.addr, to_string(l.state), "Ack", to_string(l.state),
                          Marker::kNormal, {}});
    } else {
      dispatch(l, L2Event::Ack, &msg, env, fx);
    }
  } else {
    dispatch(l, classify(l, msg, env), &msg, env, fx);
  }
  settle(l, env, fx);
}

void L2Controller::replace(BlockAddr addr, const ProtocolEnv& env, Effects& fx) {
  L2Line& l = line(addr);
  const std::size_t stalled = l.stalled.size();
  dispatch(l, L2Event::Replacement, nullptr, env, fx);
  if (l.stalled.size() != stalled) l.replacement_stalled = true;
  settle(l, env, fx);
}

void L2Controller::dispatch(L2Line& line, L2Event event, const Message* stimulus,
                            const ProtocolEnv& env, Effects& fx) {
  const L2Transition& cell = l2_table_lookup(line.state, event, env.mode);
  DispatchNote note{id(), line.addr, to_string(line.state), to_string(event), {},
                    cell.marker, cell.actions};
  switch (cell.marker) {
    case Marker::kError: {
      std::ostringstream os;
      os << "error cell reached: L2 block " << line.addr << " (" << to_string(line.state)
         << ", " << to_string(event) << ")";
      if (stimulus) os << " on " << stimulus->str();
      throw ProtocolError(os.str());
    }
    case Marker::kIgnore:
      break;
    case Marker::kStall:
      if (stimulus) {
        line.stalled.push_back(*stimulus);
      } else {
        line.replacement_stalled = true;
      }
      break;
    case Marker::kNormal: {
      CellContext ctx;
      for (ActionKind a : cell.actions) execute(a, line, stimulus, ctx, env, fx);
      const auto next = ctx.next_override ? ctx.next_override : cell.next;
      if (next) enter(line, *next, env);
      break;
    }
  }
  note.after = to_string(line.state);
  fx.notes.push_back(std::move(note));
}

void L2Controller::enter(L2Line& line, L2State next, const ProtocolEnv& env) {
  // Stable states follow the tokens actually held.
  const bool holding = next == L2State::A || next == L2State::S || next == L2State::O ||
                       next == L2State::M;
  if (holding && line.tokens.count == 0) next = L2State::I;
  if (next == L2State::O && line.tokens.count == env.total_tokens) next = L2State::M;
  line.state = next;
  if (next == L2State::I) {
    line.tokens = {};
    line.data.reset();
  } else if (next == L2State::A) {
    line.data.reset();
  }
}

void L2Controller::execute(ActionKind action, L2Line& line, const Message* stimulus,
                           CellContext& ctx, const ProtocolEnv& env, Effects& fx) {
  using detail::require;
  const NodeId self = id();
  switch (action) {
    case ActionKind::sendAllTokens:
    case ActionKind::sendTokens: {
      const Message& req = require(stimulus, to_string(action));
      detail::ship(self, req.requester, line, line.tokens, env, fx);
      return;
    }
    case ActionKind::send1Token:
    case ActionKind::sendToken: {
      const Message& req = require(stimulus, to_string(action));
      if (line.tokens.count == 0) throw InternalFault("L2: send1Token with no tokens");
      if (line.tokens.count == 1 && line.tokens.owner) {
        detail::ship(self, req.requester, line, line.tokens, env, fx);
        ctx.next_override = L2State::PX;
        return;
      }
      detail::ship(self, req.requester, line, TokenBundle{1, false}, env, fx);
      return;
    }
    case ActionKind::storeData: {
      const Message& m = require(stimulus, "storeData");
      line.tokens += m.payload;
      if (m.data) line.data = *m.data;
      return;
    }
    case ActionKind::updateNumTokens:
      line.tokens += require(stimulus, "updateNumTokens").payload;
      return;
    case ActionKind::sendAck:
      detail::send_ack(self, require(stimulus, "sendAck"), fx);
      return;
    case ActionKind::issueWriteback:
      detail::ship(self, NodeId::memory(), line, line.tokens, env, fx);
      return;
    case ActionKind::askToRetryBC:
      detail::send_retry(self, require(stimulus, "askToRetryBC"), RetryKind::kBroadcast, {},
                         fx);
      return;
    case ActionKind::askToRetryLater:
      detail::send_retry(self, require(stimulus, "askToRetryLater"), RetryKind::kLater, {},
                         fx);
      return;
    case ActionKind::informTokenDest:
    case ActionKind::informTokensDest:
      detail::inform_destinations(self, line, require(stimulus, to_string(action)), false, fx);
      return;
    case ActionKind::informOwnerDest:
      detail::inform_destinations(self, line, require(stimulus, "informOwnerDest"), true, fx);
      return;
    default:
      break;
  }
  throw InternalFault(std::string("L1-only action at the L2: ") + to_string(action));
}

void L2Controller::settle(L2Line& line, const ProtocolEnv& env, Effects& fx) {
  for (int guard = 0; guard < 256; ++guard) {
    if (is_waiting(line.state) && line.sent.empty()) {
      dispatch(line, L2Event::Ack, nullptr, env, fx);
      continue;
    }
    if (!is_waiting(line.state) && line.replacement_stalled) {
      line.replacement_stalled = false;
      dispatch(line, L2Event::Replacement, nullptr, env, fx);
      continue;
    }
    if (!line.stalled.empty() && !is_waiting(line.state)) {
      std::vector<Message> queued;
      queued.swap(line.stalled);
      for (const Message& m : queued) dispatch(line, classify(line, m, env), &m, env, fx);
      continue;
    }
    return;
  }
  throw InternalFault("L2 line " + std::to_string(line.addr.value) + " did not settle");
}

void MemoryNode::receive(const Message& msg, Effects& fx) {
  if (!carries_tokens(msg.kind)) {
    throw ProtocolError("memory received " + msg.str());
  }
  Holding& h = holdings_[msg.addr];
  h.tokens += msg.payload;
  if (msg.data) h.data = *msg.data;
  detail::send_ack(id(), msg, fx);
}

}  // namespace locke
