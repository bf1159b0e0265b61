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

#include "locke/l1_controller.hpp"

#include <algorithm>
#include <sstream>

namespace locke {

namespace {

bool is_waiting(L1State s) {
  return s == L1State::PS || s == L1State::PX || s == L1State::PO;
}

bool is_stable(L1State s) {
  return s == L1State::S || s == L1State::O || s == L1State::E || s == L1State::M;
}

std::string where(NodeId node, const L1Line& line, L1Event ev, const Message* msg) {
  std::ostringstream os;
  os << node << " block " << line.addr << " (" << to_string(line.state) << ", "
     << to_string(ev) << ")";
  if (msg) os << " on " << msg->str();
  return os.str();
}

}  // namespace

L1Cache::L1Cache(CacheGeometry geometry)
    : geometry_(geometry),
      slots_(static_cast<std::size_t>(geometry.sets * geometry.ways)),
      lru_(static_cast<std::size_t>(geometry.sets)) {
  for (auto& order : lru_) {
    for (int w = 0; w < geometry_.ways; ++w) order.push_back(w);
  }
}

int L1Cache::set_of(BlockAddr addr) const {
  return static_cast<int>(addr.value % static_cast<std::uint32_t>(geometry_.sets));
}

int L1Cache::way_of(BlockAddr addr) const {
  const int base = set_of(addr) * geometry_.ways;
  for (int w = 0; w < geometry_.ways; ++w) {
    const auto& slot = slots_[base + w];
    if (slot && slot->addr == addr) return w;
  }
  return -1;
}

L1Line* L1Cache::find(BlockAddr addr) {
  const int w = way_of(addr);
  return w < 0 ? nullptr : &*slots_[set_of(addr) * geometry_.ways + w];
}

const L1Line* L1Cache::find(BlockAddr addr) const {
  const int w = way_of(addr);
  return w < 0 ? nullptr : &*slots_[set_of(addr) * geometry_.ways + w];
}

L1Line* L1Cache::allocate(BlockAddr addr) {
  if (L1Line* hit = find(addr)) return hit;
  const int base = set_of(addr) * geometry_.ways;
  for (int w = 0; w < geometry_.ways; ++w) {
    auto& slot = slots_[base + w];
    if (!slot) {
      slot.emplace();
      slot->addr = addr;
      touch(addr);
      return &*slot;
    }
  }
  return nullptr;
}

void L1Cache::release(BlockAddr addr) {
  const int w = way_of(addr);
  if (w >= 0) slots_[set_of(addr) * geometry_.ways + w].reset();
}

void L1Cache::touch(BlockAddr addr) {
  const int w = way_of(addr);
  if (w < 0) return;
  auto& order = lru_[set_of(addr)];
  std::erase(order, w);
  order.insert(order.begin(), w);
}

L1Line* L1Cache::lru_victim(BlockAddr addr) {
  const int set = set_of(addr);
  const auto& order = lru_[set];
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto& slot = slots_[set * geometry_.ways + *it];
    if (slot) return &*slot;
  }
  return nullptr;
}

L1Controller::L1Controller(std::uint16_t index, CacheGeometry geometry)
    : id_(NodeId::l1(index)), cache_(geometry) {}

void L1Controller::issue(const PendingOp& op, const ProtocolEnv& env, Effects& fx) {
  if (current_) throw InternalFault(id_.str() + " already has an outstanding op");
  current_ = op;
  start_current(env, fx);
}

void L1Controller::start_current(const ProtocolEnv& env, Effects& fx) {
  const BlockAddr addr = current_->addr;
  L1Line* line = cache_.allocate(addr);
  if (line == nullptr) {
    L1Line* victim = cache_.lru_victim(addr);
    if (victim == nullptr) throw InternalFault("full set without a victim");
    victim_ = victim->addr;
    victim_tried_in_ = victim->state;
    const BlockAddr vaddr = victim->addr;
    dispatch(*victim, L1Event::Replacement, nullptr, env, fx);
    settle(vaddr, env, fx);
    return;
  }
  cache_.touch(addr);
  line->pending = current_;
  line->op_tried_in = line->state;
  dispatch(*line,
           current_->kind == OpKind::kLoad ? L1Event::Load : L1Event::Store,
           nullptr, env, fx);
  settle(addr, env, fx);
}

bool L1Controller::stale_request(const Message& msg) const {
  const auto it = done_.find({msg.addr, msg.requester.index});
  return it != done_.end() && msg.priority.birth <= it->second;
}

L1Event L1Controller::classify(const L1Line& line, const Message& msg,
                               const ProtocolEnv& env) const {
  switch (msg.kind) {
    case MessageKind::kGets:
      return L1Event::Gets;
    case MessageKind::kGetx: {
      const auto& op = line.pending;
      const bool competing = op && op->kind == OpKind::kStore && op->getx_issued &&
                             msg.requester != id_ &&
                             msg.priority.beats(op->priority) && !stale_request(msg);
      return competing ? L1Event::FreezeGETX : L1Event::Getx;
    }
    case MessageKind::kSpecialGets:
      return L1Event::SpecialGETS;
    case MessageKind::kSpecialGetx:
      return L1Event::SpecialGETX;
    case MessageKind::kDataShared:
    case MessageKind::kDataOwner:
    case MessageKind::kDataAllTokens:
    case MessageKind::kTokens: {
      // An arrival that leaves the line with every token is the
      // DataAllTokens event whatever its wire kind.
      if (line.tokens.count + msg.payload.count == env.total_tokens) {
        return L1Event::DataAllTokens;
      }
      if (msg.kind == MessageKind::kDataOwner || msg.kind == MessageKind::kDataAllTokens) {
        return L1Event::DataOwner;
      }
      return L1Event::DataShared;
    }
    case MessageKind::kAck:
      return L1Event::Ack;
    case MessageKind::kRetry:
      return L1Event::Retry;
    case MessageKind::kComplete:
      return L1Event::Complete;
  }
  throw InternalFault("unknown message kind");
}

void L1Controller::receive(const Message& msg, const ProtocolEnv& env, Effects& fx) {
  if (msg.kind == MessageKind::kComplete) {
    auto& seen = done_[{msg.addr, msg.src.index}];
    seen = std::max(seen, msg.priority.birth);
  }
  L1Line* line = cache_.find(msg.addr);
  if (line == nullptr) {
    if (msg.kind == MessageKind::kAck) {
      throw ProtocolError(id_.str() + ": ACK for block " + std::to_string(msg.addr.value) +
                          " with nothing pending: " + msg.str());
    }
    L1Line scratch;
    scratch.addr = msg.addr;
    dispatch(scratch, classify(scratch, msg, env), &msg, env, fx);
    if (scratch.state != L1State::I || !scratch.sent.empty()) {
      throw InternalFault("unallocated line left state I at " + id_.str());
    }
    return;
  }

  if (msg.kind == MessageKind::kAck) {
    handle_ack(*line, msg, env, fx);
  } else if (msg.kind == MessageKind::kRetry && msg.attempt != attempt_) {
    // Answer to a request wave that has since been superseded.
    fx.notes.push_back({id_, line->addr, to_string(line->state), "Retry", to_string(line->state),
                        Marker::kIgnore, {}});
  } else {
    const L1Event ev = classify(*line, msg, env);
    if (ev == L1Event::FreezeGETX && (!line->boss || msg.priority.beats(*line->boss))) {
      line->boss = msg.priority;
    }
    const std::size_t stalled_before = line->stalled.size();
    dispatch(*line, ev, &msg, env, fx);
    if (msg.kind == MessageKind::kComplete && line->stalled.size() == stalled_before &&
        line->boss && line->boss->node == msg.src &&
        line->boss->birth <= msg.priority.birth) {
      line->boss.reset();
    }
  }
  settle(msg.addr, env, fx);
}

void L1Controller::handle_ack(L1Line& line, const Message& msg, const ProtocolEnv& env,
                              Effects& fx) {
  const auto it = std::find(line.sent.begin(), line.sent.end(),
                            SentRecord{msg.sent_to, msg.acked});
  if (it == line.sent.end()) {
    throw ProtocolError(id_.str() + ": ACK matches no pending send: " + msg.str());
  }
  line.sent.erase(it);
  if (!line.sent.empty()) {
    fx.notes.push_back({id_, line.addr, to_string(line.state), "Ack", to_string(line.state),
                        Marker::kNormal, {}});
    return;
  }
  dispatch(line, L1Event::Ack, &msg, env, fx);
}

void L1Controller::fire_backoff(const Message& request, const ProtocolEnv& env,
                                Effects& fx) {
  (void)env;
  const L1Line* line = cache_.find(request.addr);
  const bool waiting = line && line->pending && request.attempt == attempt_ &&
                       (line->state == L1State::IS || line->state == L1State::IM ||
                        line->state == L1State::SM);
  fx.notes.push_back({id_, request.addr, line ? to_string(line->state) : "I", "Backoff",
                      line ? to_string(line->state) : "I", waiting ? Marker::kNormal
                                                                   : Marker::kIgnore,
                      {}});
  if (waiting) fx.out.push_back({request, Fanout::kRequest});
}

bool L1Controller::waiting_on_request() const {
  if (!current_) return false;
  const L1Line* line = cache_.find(current_->addr);
  if (!line || !line->pending || !line->sent.empty()) return false;
  // A stalled RETRY or COMPLETE gets replayed on the next state change.
  for (const Message& m : line->stalled) {
    if (m.kind == MessageKind::kRetry || m.kind == MessageKind::kComplete) return false;
  }
  return line->state == L1State::IS || line->state == L1State::IM ||
         line->state == L1State::SM || line->state == L1State::F;
}

void L1Controller::timeout(const ProtocolEnv& env, Effects& fx) {
  if (!waiting_on_request()) throw InternalFault(id_.str() + ": timeout with nothing waiting");
  Message r;
  r.kind = MessageKind::kRetry;
  r.addr = current_->addr;
  r.src = id_;
  r.dest = id_;
  r.requester = id_;
  r.retry_kind = RetryKind::kBroadcast;
  r.attempt = attempt_;
  receive(r, env, fx);
}

void L1Controller::dispatch(L1Line& line, L1Event event, const Message* stimulus,
                            const ProtocolEnv& env, Effects& fx) {
  const L1Transition& cell = l1_table_lookup(line.state, event, env.mode);
  DispatchNote note{id_, line.addr, to_string(line.state), to_string(event), {},
                    cell.marker, cell.actions};
  Marker marker = cell.marker;
  // A frozen line re-issues only after every payload it shipped is acked;
  // until then its Retry/Complete wait on the line.
  if (marker == Marker::kNormal && line.state == L1State::F &&
      (event == L1Event::Retry || event == L1Event::Complete) && !line.sent.empty()) {
    marker = Marker::kStall;
    note.marker = marker;
    note.actions.clear();
  }

  switch (marker) {
    case Marker::kError:
      throw ProtocolError("error cell reached: " + where(id_, line, event, stimulus));
    case Marker::kIgnore:
      break;
    case Marker::kStall:
      if (stimulus) line.stalled.push_back(*stimulus);
      break;
    case Marker::kNormal: {
      CellContext ctx;
      for (ActionKind a : cell.actions) execute(a, line, stimulus, ctx, env, fx);
      const auto next = ctx.next_override ? ctx.next_override : cell.next;
      if (next) {
        if (*next == L1State::F && line.state != L1State::F) ++fx.freezes;
        enter(line, *next, env);
      }
      break;
    }
  }
  note.after = to_string(line.state);
  fx.notes.push_back(std::move(note));
}

void L1Controller::enter(L1Line& line, L1State next, const ProtocolEnv& env) {
  // Stable states follow the tokens actually held.
  if (is_stable(next) && line.tokens.count == 0) next = L1State::I;
  if (next == L1State::O && line.tokens.count == env.total_tokens) next = L1State::M;
  line.state = next;
  if (next == L1State::I) {
    // Not allocated: whatever the frame held is gone.
    line.tokens = {};
    line.data.reset();
  }
}

void L1Controller::complete(L1Line& line, DataWord value, Effects& fx) {
  if (!line.pending) throw InternalFault("completion without a pending op");
  fx.completed.push_back(
      {id_, line.pending->op_id, line.pending->kind, line.addr, value});
  line.pending.reset();
  line.op_tried_in.reset();
  line.boss.reset();
  current_.reset();
}

void L1Controller::request(L1Line& line, MessageKind kind, Effects& fx) {
  if (!line.pending) throw InternalFault(id_.str() + ": request without a pending op");
  Message m;
  m.kind = kind;
  m.addr = line.addr;
  m.src = id_;
  m.requester = id_;
  m.priority = line.pending->priority;
  m.attempt = ++attempt_;
  if (kind == MessageKind::kGetx || kind == MessageKind::kSpecialGetx) {
    line.pending->getx_issued = true;
  }
  fx.out.push_back({std::move(m), Fanout::kRequest});
}

void L1Controller::respecial(L1Line& line, const Message& trigger, MessageKind plain,
                             const ProtocolEnv& env, Effects& fx) {
  (void)env;
  if (!line.pending) throw InternalFault(id_.str() + ": re-issue without a pending op");
  std::vector<NodeId> hints;
  RetryKind kind = RetryKind::kHint;
  if (trigger.kind == MessageKind::kComplete) {
    hints.push_back(trigger.src);
  } else {
    kind = trigger.retry_kind;
    hints = trigger.hints;
  }
  if (kind == RetryKind::kHint && std::find(hints.begin(), hints.end(), id_) != hints.end()) {
    // The tokens are already on their way here.
    return;
  }
  if (kind == RetryKind::kHint && hints.empty()) kind = RetryKind::kBroadcast;

  switch (kind) {
    case RetryKind::kHint: {
      const std::uint32_t wave = ++attempt_;
      const MessageKind special = plain == MessageKind::kGets ? MessageKind::kSpecialGets
                                                              : MessageKind::kSpecialGetx;
      for (const NodeId& h : hints) {
        Message m;
        m.kind = special;
        m.addr = line.addr;
        m.src = id_;
        m.dest = h;
        m.requester = id_;
        m.priority = line.pending->priority;
        m.attempt = wave;
        fx.out.push_back({std::move(m), Fanout::kUnicast});
      }
      if (plain == MessageKind::kGetx) line.pending->getx_issued = true;
      break;
    }
    case RetryKind::kBroadcast:
    case RetryKind::kNone:
      request(line, plain, fx);
      break;
    case RetryKind::kLater: {
      Message m;
      m.kind = plain;
      m.addr = line.addr;
      m.src = id_;
      m.requester = id_;
      m.priority = line.pending->priority;
      m.attempt = ++attempt_;
      if (plain == MessageKind::kGetx) line.pending->getx_issued = true;
      fx.timers.push_back(std::move(m));
      break;
    }
  }
}

void L1Controller::execute(ActionKind action, L1Line& line, const Message* stimulus,
                           CellContext& ctx, const ProtocolEnv& env, Effects& fx) {
  using detail::require;
  const int total = env.total_tokens;
  switch (action) {
    case ActionKind::sendGETS:
      request(line, MessageKind::kGets, fx);
      return;
    case ActionKind::sendGETX:
      request(line, MessageKind::kGetx, fx);
      return;

    case ActionKind::doLoad:
      if (!line.pending || line.pending->kind != OpKind::kLoad) {
        throw InternalFault(id_.str() + ": doLoad without a pending load");
      }
      complete(line, line.tokens.count >= 1 && line.data ? *line.data : kNoData, fx);
      return;

    case ActionKind::doStore: {
      if (!line.pending || line.pending->kind != OpKind::kStore) {
        throw InternalFault(id_.str() + ": doStore without a pending store");
      }
      if (line.tokens.count != total || !line.tokens.owner) {
        throw InternalFault(id_.str() + ": store without every token");
      }
      const PendingOp op = *line.pending;
      line.data = op.value;
      if (op.getx_issued) {
        Message c;
        c.kind = MessageKind::kComplete;
        c.addr = line.addr;
        c.src = id_;
        c.requester = id_;
        c.priority = op.priority;
        fx.out.push_back({std::move(c), Fanout::kPeers});
      }
      complete(line, op.value, fx);
      return;
    }

    case ActionKind::replace: {
      const TokenBundle bundle = line.tokens;
      if (bundle.count == 0) return;
      Message m = detail::make_payload(id_, NodeId::l2(), line, bundle, total);
      if (!bundle.owner) {
        // Clean copies go back as tokens only.
        m.kind = MessageKind::kTokens;
        m.data.reset();
      }
      fx.out.push_back({std::move(m), Fanout::kUnicast});
      line.sent.push_back({NodeId::l2(), bundle});
      line.tokens = {};
      return;
    }

    case ActionKind::send1Token:
    case ActionKind::sendToken: {
      const Message& req = require(stimulus, to_string(action));
      if (line.tokens.count == 0) {
        throw InternalFault(id_.str() + ": send1Token with no tokens");
      }
      if (line.tokens.count == 1 && line.tokens.owner) {
        // The only token left is the owner: it goes whole, and the line
        // no longer keeps ownership.
        detail::ship(id_, req.requester, line, line.tokens, env, fx);
        ctx.next_override = L1State::PX;
        return;
      }
      detail::ship(id_, req.requester, line, TokenBundle{1, false}, env, fx);
      return;
    }

    case ActionKind::sendAllTokens: {
      const Message& req = require(stimulus, "sendAllTokens");
      detail::ship(id_, req.requester, line, line.tokens, env, fx);
      return;
    }

    case ActionKind::update: {
      const Message& m = require(stimulus, "update");
      line.tokens += m.payload;
      if (m.data) {
        const bool stale = env.fault == Fault::kStaleDataOnDataOwner &&
                           m.kind == MessageKind::kDataOwner;
        line.data = stale ? line.data.value_or(0) : *m.data;
      }
      return;
    }

    case ActionKind::sendAck:
      detail::send_ack(id_, require(stimulus, "sendAck"), fx);
      ctx.acked_stimulus = true;
      return;

    case ActionKind::bounceData:
    case ActionKind::bounceL2:
    case ActionKind::bounceToBoss: {
      const Message& m = require(stimulus, to_string(action));
      NodeId dest = NodeId::l2();
      if (action == ActionKind::bounceToBoss) {
        if (!line.boss) throw InternalFault(id_.str() + ": bounceToBoss without a boss");
        dest = line.boss->node;
      }
      if (ctx.acked_stimulus) {
        // Already acknowledged to the origin: this line now answers for the
        // payload and waits for its own ACK.
        Message fwd = m;
        fwd.src = id_;
        fwd.dest = dest;
        fwd.origin = id_;
        fwd.sent_to = dest;
        fx.out.push_back({std::move(fwd), Fanout::kUnicast});
        line.sent.push_back({dest, m.payload});
      } else {
        detail::forward_payload(id_, dest, m, fx);
      }
      return;
    }

    case ActionKind::askToRetryBC:
      detail::send_retry(id_, require(stimulus, "askToRetryBC"), RetryKind::kBroadcast, {}, fx);
      return;
    case ActionKind::askToRetryLater:
      detail::send_retry(id_, require(stimulus, "askToRetryLater"), RetryKind::kLater, {}, fx);
      return;
    case ActionKind::informTokenDest:
    case ActionKind::informTokensDest:
      detail::inform_destinations(id_, line, require(stimulus, to_string(action)), false, fx);
      return;
    case ActionKind::informOwnerDest:
      detail::inform_destinations(id_, line, require(stimulus, "informOwnerDest"), true, fx);
      return;
    case ActionKind::retryWithBoss: {
      const Message& req = require(stimulus, "retryWithBoss");
      std::vector<NodeId> hints;
      if (line.boss) hints.push_back(line.boss->node);
      detail::send_retry(id_, req, RetryKind::kHint, std::move(hints), fx);
      return;
    }

    case ActionKind::sendSpecialGETS:
      respecial(line, require(stimulus, "sendSpecialGETS"), MessageKind::kGets, env, fx);
      return;
    case ActionKind::sendSpecialGETX:
      respecial(line, require(stimulus, "sendSpecialGETX"), MessageKind::kGetx, env, fx);
      return;

    case ActionKind::sendTokens:
    case ActionKind::storeData:
    case ActionKind::updateNumTokens:
    case ActionKind::issueWriteback:
      break;
  }
  throw InternalFault(std::string("L2-only action at an L1: ") + to_string(action));
}

void L1Controller::settle(BlockAddr addr, const ProtocolEnv& env, Effects& fx) {
  for (int guard = 0; guard < 256; ++guard) {
    L1Line* line = cache_.find(addr);
    if (line == nullptr) return;

    if (is_waiting(line->state) && line->sent.empty()) {
      // Nothing left to be acknowledged: take the Ack edge now.
      dispatch(*line, L1Event::Ack, nullptr, env, fx);
      continue;
    }
    if (line->pending && line->op_tried_in != line->state) {
      line->op_tried_in = line->state;
      dispatch(*line, line->pending->kind == OpKind::kLoad ? L1Event::Load : L1Event::Store,
               nullptr, env, fx);
      continue;
    }
    if (!line->stalled.empty()) {
      std::vector<Message> queued;
      queued.swap(line->stalled);
      bool consumed = false;
      for (const Message& m : queued) {
        const std::size_t before = line->stalled.size();
        dispatch(*line, classify(*line, m, env), &m, env, fx);
        if (m.kind == MessageKind::kComplete && line->stalled.size() == before &&
            line->boss && line->boss->node == m.src &&
            line->boss->birth <= m.priority.birth) {
          line->boss.reset();
        }
        consumed = consumed || line->stalled.size() == before;
      }
      if (consumed) continue;
    }
    if (victim_ && *victim_ == addr) {
      if (line->state == L1State::I && !line->pending && line->sent.empty()) {
        // falls through to release below, then restarts the parked op
      } else if (is_stable(line->state) && victim_tried_in_ != line->state) {
        victim_tried_in_ = line->state;
        dispatch(*line, L1Event::Replacement, nullptr, env, fx);
        continue;
      }
    }
    if (line->state == L1State::I && !line->pending && line->sent.empty() &&
        line->stalled.empty()) {
      cache_.release(addr);
      if (victim_ && *victim_ == addr) {
        victim_.reset();
        victim_tried_in_.reset();
        start_current(env, fx);
      }
    }
    return;
  }
  throw InternalFault(id_.str() + ": line " + std::to_string(addr.value) +
                      " did not settle");
}

}  // namespace locke
