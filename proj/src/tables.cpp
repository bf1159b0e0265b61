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

#include "locke/tables.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace locke {

namespace {

using A = ActionKind;

template <class State>
Transition<State> act(std::initializer_list<ActionKind> actions,
                      std::optional<State> next = std::nullopt) {
  return {Marker::kNormal, std::vector<ActionKind>(actions), next};
}

template <class State>
Transition<State> go(State next) {
  return {Marker::kNormal, {}, next};
}

template <class State>
Transition<State> mark(Marker m) {
  return {m, {}, std::nullopt};
}

using L1Row = std::array<L1Transition, kL1EventCount>;
using L2Row = std::array<L2Transition, kL2EventCount>;
using L1Table = std::array<L1Row, kL1StateCount>;
using L2Table = std::array<L2Row, kL2StateCount>;

// Transcription of the L1 controller table. Columns:
// Load Store Replacement Gets Getx FreezeGETX SpecialGETS SpecialGETX
// DataShared DataOwner DataAllTokens Ack Retry Complete
L1Table make_l1_strict() {
  using S = L1State;
  const auto z = mark<S>(Marker::kStall);
  const auto i = mark<S>(Marker::kIgnore);
  const auto e = mark<S>(Marker::kError);
  const auto a = [](std::initializer_list<ActionKind> acts,
                    std::optional<S> next = std::nullopt) {
    return act<S>(acts, next);
  };
  const auto upd = [&](std::optional<S> next = std::nullopt) {
    return a({A::update, A::sendAck}, next);
  };

  L1Table t{};
  t[static_cast<int>(S::I)] = {
      a({A::sendGETS}), a({A::sendGETX}), e, i, i, i,
      a({A::askToRetryBC}), a({A::askToRetryBC}),
      a({A::bounceData}), a({A::bounceData}), a({A::bounceData}),
      e, i, i};
  t[static_cast<int>(S::S)] = {
      a({A::doLoad}), a({A::sendGETX}), a({A::replace}, S::PS), i,
      a({A::sendAllTokens}, S::PS), a({A::sendAllTokens}, S::PX),
      a({A::askToRetryBC}), a({A::sendAllTokens}, S::PS),
      upd(), upd(S::O), upd(S::M), e, i, i};
  t[static_cast<int>(S::O)] = {
      a({A::doLoad}), a({A::sendGETX}), a({A::replace}, S::PX),
      a({A::send1Token}, S::PO), a({A::sendAllTokens}, S::PX),
      a({A::sendAllTokens}, S::PX), a({A::send1Token}, S::PO),
      a({A::sendAllTokens}, S::PX), upd(), upd(), upd(S::M), e, i, i};
  const L1Row exclusive = {
      a({A::doLoad}), a({A::doStore}), a({A::replace}, S::PX),
      a({A::send1Token}, S::PO), a({A::sendAllTokens}, S::PX),
      a({A::sendAllTokens}, S::PX), a({A::send1Token}, S::PO),
      a({A::sendAllTokens}, S::PX), e, e, e, e, i, i};
  t[static_cast<int>(S::E)] = exclusive;
  t[static_cast<int>(S::M)] = exclusive;
  t[static_cast<int>(S::IS)] = {
      z, z, z, i, i, i, a({A::askToRetryBC}), a({A::askToRetryBC}),
      upd(S::S), upd(S::O), upd(S::M), e, a({A::sendSpecialGETS}), i};
  t[static_cast<int>(S::IM)] = {
      z, z, z, i, i, a({A::sendAllTokens}, S::F),
      a({A::askToRetryBC}), a({A::askToRetryBC}),
      upd(S::SM), upd(S::SM), upd(S::M), e,
      a({A::sendSpecialGETX}), a({A::sendSpecialGETX})};
  t[static_cast<int>(S::SM)] = {
      z, z, z, a({A::askToRetryLater}), i, a({A::sendAllTokens}, S::F),
      a({A::askToRetryLater}), a({A::askToRetryLater}),
      upd(), upd(), upd(S::M), e,
      a({A::sendSpecialGETX}), a({A::sendSpecialGETX})};
  t[static_cast<int>(S::PS)] = {
      z, z, z, i, a({A::informTokenDest}), a({A::informTokenDest}),
      a({A::askToRetryBC}), a({A::informTokenDest}),
      a({A::sendAck, A::bounceL2}), a({A::sendAck, A::bounceL2}, S::PX),
      a({A::sendAck, A::bounceL2}, S::PX), go(S::I), i, i};
  t[static_cast<int>(S::PX)] = {
      z, z, z, a({A::informOwnerDest}), a({A::informTokensDest}),
      a({A::informTokensDest}), a({A::informOwnerDest}),
      a({A::informTokensDest}), a({A::bounceL2}), a({A::bounceL2}),
      a({A::bounceL2}), go(S::I), i, i};
  t[static_cast<int>(S::PO)] = {
      z, z, z, a({A::send1Token}),
      a({A::informTokensDest, A::sendAllTokens}, S::PX),
      a({A::informTokensDest, A::sendAllTokens}, S::PX), a({A::sendToken}),
      a({A::informTokensDest, A::sendAllTokens}, S::PX),
      upd(), upd(), upd(), go(S::I), i, i};
  t[static_cast<int>(S::F)] = {
      z, z, z, a({A::retryWithBoss}), a({A::retryWithBoss}),
      a({A::retryWithBoss}), i, i, a({A::bounceToBoss}),
      a({A::bounceToBoss}), a({A::bounceToBoss}), go(S::F),
      a({A::sendGETX}), a({A::sendGETX})};
  return t;
}

// Transcription of the L2 controller table. Columns:
// Replacement L1_Gets L1_Getx SpecialGETS SpecialGETX DataShared DataOwner
// DataAllTokens Tokens Ack
L2Table make_l2_strict() {
  using S = L2State;
  const auto z = mark<S>(Marker::kStall);
  const auto i = mark<S>(Marker::kIgnore);
  const auto e = mark<S>(Marker::kError);
  const auto a = [](std::initializer_list<ActionKind> acts,
                    std::optional<S> next = std::nullopt) {
    return act<S>(acts, next);
  };
  const auto store = [&](std::optional<S> next = std::nullopt) {
    return a({A::storeData, A::sendAck}, next);
  };
  const auto count = [&](std::optional<S> next = std::nullopt) {
    return a({A::updateNumTokens, A::sendAck}, next);
  };

  L2Table t{};
  t[static_cast<int>(S::I)] = {
      e, i, i, a({A::askToRetryBC}), a({A::askToRetryBC}),
      store(S::S), store(S::O), store(S::M), count(S::A), e};
  t[static_cast<int>(S::A)] = {
      a({A::issueWriteback}, S::PX), i, a({A::sendTokens}, S::PX),
      a({A::askToRetryBC}), a({A::sendTokens}, S::PX),
      store(S::S), store(S::O), store(S::M), count(), e};
  t[static_cast<int>(S::S)] = {
      a({A::issueWriteback}, S::PX), i, a({A::sendAllTokens}, S::PX),
      a({A::askToRetryBC}), a({A::sendAllTokens}, S::PX),
      count(), count(S::O), count(S::M), count(), e};
  t[static_cast<int>(S::O)] = {
      a({A::issueWriteback}, S::PX), a({A::send1Token}, S::PO),
      a({A::sendAllTokens}, S::PX), a({A::send1Token}, S::PO),
      a({A::sendAllTokens}, S::PX), e, count(), count(S::M), count(), e};
  t[static_cast<int>(S::M)] = {
      a({A::issueWriteback}, S::PX), a({A::sendAllTokens}, S::PX),
      a({A::sendAllTokens}, S::PX), a({A::sendAllTokens}, S::PX),
      a({A::sendAllTokens}, S::PX), e, e, e, e, e};
  t[static_cast<int>(S::PA)] = {
      z, a({A::informOwnerDest}),
      a({A::sendAllTokens, A::informTokensDest}, S::PX),
      a({A::askToRetryBC}), a({A::sendAllTokens}, S::PX),
      store(S::PT), store(S::PO), store(S::PO), count(), go(S::A)};
  t[static_cast<int>(S::PT)] = {
      z, a({A::informOwnerDest}),
      a({A::sendAllTokens, A::informTokenDest}), a({A::askToRetryBC}),
      a({A::informTokenDest, A::sendAllTokens}), store(), count(S::PO),
      count(S::PO), count(), go(S::S)};
  t[static_cast<int>(S::PX)] = {
      z, a({A::informOwnerDest}), a({A::informTokensDest}),
      a({A::informOwnerDest}), a({A::informTokensDest}), store(S::PT),
      store(S::PO), store(S::PO), count(S::PA), go(S::I)};
  t[static_cast<int>(S::PO)] = {
      z, a({A::send1Token}),
      a({A::informTokensDest, A::sendAllTokens}, S::PX),
      a({A::sendAllTokens}, S::PX),
      a({A::informTokensDest, A::sendAllTokens}, S::PX), e, count(),
      count(), count(), go(S::I)};
  return t;
}

// The errata override list. Every entry fixes a cell whose literal reading
// either makes a documented state unreachable or destroys tokens.
L1Table make_l1_errata() {
  using S = L1State;
  L1Table t = make_l1_strict();
  auto cell = [&t](S s, L1Event e) -> L1Transition& {
    return t[static_cast<int>(s)][static_cast<int>(e)];
  };
  cell(S::I, L1Event::Load).next = S::IS;
  cell(S::I, L1Event::Store).next = S::IM;
  cell(S::S, L1Event::Store).next = S::SM;
  cell(S::PO, L1Event::Ack).next = S::O;
  cell(S::E, L1Event::Store).next = S::M;
  cell(S::F, L1Event::Retry).next = S::IM;
  cell(S::F, L1Event::Complete).next = S::IM;
  return t;
}

L2Table make_l2_errata() {
  L2Table t = make_l2_strict();
  t[static_cast<int>(L2State::PO)][static_cast<int>(L2Event::Ack)].next =
      L2State::O;
  return t;
}

const L1Table& l1_table(TableMode mode) {
  static const L1Table strict = make_l1_strict();
  static const L1Table errata = make_l1_errata();
  return mode == TableMode::kStrict ? strict : errata;
}

const L2Table& l2_table(TableMode mode) {
  static const L2Table strict = make_l2_strict();
  static const L2Table errata = make_l2_errata();
  return mode == TableMode::kStrict ? strict : errata;
}

// Cells whose source spelling differs from the action they are encoded as.
const std::vector<AliasUse>& alias_uses() {
  static const std::vector<AliasUse> uses = {
      {{"L1", "S", "Getx"}, "sendAllToken", "sendAllTokens"},
      {{"L1", "S", "FreezeGETX"}, "sendAllToken", "sendAllTokens"},
      {{"L1", "S", "SpecialGETX"}, "sendAllToken", "sendAllTokens"},
      {{"L1", "PS", "SpecialGETS"}, "askRetryBC", "askToRetryBC"},
      {{"L1", "PO", "SpecialGETS"}, "sendToken", "send1Token"},
      {{"L2", "S", "L1_Getx"}, "sendAllToken", "sendAllTokens"},
      {{"L2", "S", "SpecialGETX"}, "sendAllToken", "sendAllTokens"},
      {{"L2", "PT", "SpecialGETS"}, "askRetryBC", "askToRetryBC"},
  };
  return uses;
}

bool is_action_name(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(A::issueWriteback); ++k) {
    if (name == to_string(static_cast<A>(k))) return true;
  }
  return false;
}

}  // namespace

const std::vector<ErrataOverride>& errata_overrides() {
  static const std::vector<ErrataOverride> list = {
      {1, "I enters IS/IM on Load/Store", {{"L1", "I", "Load"}, {"L1", "I", "Store"}}},
      {2, "S enters SM on Store", {{"L1", "S", "Store"}}},
      {3, "PO keeps the owner on its last Ack", {{"L1", "PO", "Ack"}, {"L2", "PO", "Ack"}}},
      {4, "E becomes M on Store", {{"L1", "E", "Store"}}},
      {5, "F re-issues into IM", {{"L1", "F", "Retry"}, {"L1", "F", "Complete"}}},
  };
  return list;
}

namespace {

template <class State>
std::string render(const Transition<State>& t) {
  switch (t.marker) {
    case Marker::kStall: return "stall";
    case Marker::kIgnore: return "ignore";
    case Marker::kError: return "error";
    case Marker::kNormal: break;
  }
  std::string out;
  for (ActionKind a : t.actions) {
    if (!out.empty()) out += ' ';
    out += to_string(a);
  }
  if (t.next) {
    if (!out.empty()) out += ' ';
    out += '/';
    out += to_string(*t.next);
  }
  return out;
}

bool has_action(const L1Transition& t, ActionKind a) {
  return std::find(t.actions.begin(), t.actions.end(), a) != t.actions.end();
}

}  // namespace

const char* to_string(L1State s) {
  static constexpr const char* kNames[] = {"I",  "S",  "O",  "E",  "M",  "IS",
                                           "IM", "SM", "PS", "PX", "PO", "F"};
  return kNames[static_cast<int>(s)];
}

const char* to_string(L2State s) {
  static constexpr const char* kNames[] = {"I",  "A",  "S",  "O", "M",
                                           "PA", "PT", "PX", "PO"};
  return kNames[static_cast<int>(s)];
}

const char* to_string(L1Event e) {
  static constexpr const char* kNames[] = {
      "Load",        "Store",       "Replacement", "Gets",       "Getx",
      "FreezeGETX",  "SpecialGETS", "SpecialGETX", "DataShared", "DataOwner",
      "DataAllTokens", "Ack",       "Retry",       "Complete"};
  return kNames[static_cast<int>(e)];
}

const char* to_string(L2Event e) {
  static constexpr const char* kNames[] = {
      "Replacement", "L1_Gets",   "L1_Getx",       "SpecialGETS", "SpecialGETX",
      "DataShared",  "DataOwner", "DataAllTokens", "Tokens",      "Ack"};
  return kNames[static_cast<int>(e)];
}

const char* to_string(ActionKind a) {
  static constexpr const char* kNames[] = {
      "sendGETS",        "sendGETX",         "doLoad",
      "doStore",         "replace",          "send1Token",
      "sendToken",       "sendAllTokens",    "sendTokens",
      "update",          "sendAck",          "bounceData",
      "bounceL2",        "bounceToBoss",     "askToRetryBC",
      "askToRetryLater", "informTokenDest",  "informTokensDest",
      "informOwnerDest", "retryWithBoss",    "sendSpecialGETS",
      "sendSpecialGETX", "storeData",        "updateNumTokens",
      "issueWriteback"};
  return kNames[static_cast<int>(a)];
}

const char* to_string(TableMode m) {
  return m == TableMode::kStrict ? "strict" : "errata";
}

std::optional<L1State> parse_l1_state(std::string_view s) {
  for (int i = 0; i < kL1StateCount; ++i) {
    if (s == to_string(static_cast<L1State>(i))) return static_cast<L1State>(i);
  }
  return std::nullopt;
}

std::optional<L2State> parse_l2_state(std::string_view s) {
  for (int i = 0; i < kL2StateCount; ++i) {
    if (s == to_string(static_cast<L2State>(i))) return static_cast<L2State>(i);
  }
  return std::nullopt;
}

std::optional<TableMode> parse_table_mode(std::string_view s) {
  if (s == "strict") return TableMode::kStrict;
  if (s == "errata") return TableMode::kErrata;
  return std::nullopt;
}

const L1Transition& l1_table_lookup(L1State state, L1Event event, TableMode mode) {
  return l1_table(mode)[static_cast<int>(state)][static_cast<int>(event)];
}

const L2Transition& l2_table_lookup(L2State state, L2Event event, TableMode mode) {
  return l2_table(mode)[static_cast<int>(state)][static_cast<int>(event)];
}

std::string cell_text(const L1Transition& t) { return render(t); }
std::string cell_text(const L2Transition& t) { return render(t); }

std::string dump_tables(TableMode mode) {
  std::ostringstream os;
  for (int s = 0; s < kL1StateCount; ++s) {
    for (int e = 0; e < kL1EventCount; ++e) {
      const auto st = static_cast<L1State>(s);
      const auto ev = static_cast<L1Event>(e);
      os << "L1," << to_string(st) << "," << to_string(ev) << " → "
         << cell_text(l1_table_lookup(st, ev, mode)) << "\n";
    }
  }
  for (int s = 0; s < kL2StateCount; ++s) {
    for (int e = 0; e < kL2EventCount; ++e) {
      const auto st = static_cast<L2State>(s);
      const auto ev = static_cast<L2Event>(e);
      os << "L2," << to_string(st) << "," << to_string(ev) << " → "
         << cell_text(l2_table_lookup(st, ev, mode)) << "\n";
    }
  }
  return os.str();
}

std::vector<L1State> states_holding_pending_getx(TableMode mode) {
  const auto& table = l1_table(mode);
  const auto store_cell = [&](L1State s) -> const L1Transition& {
    return table[static_cast<int>(s)][static_cast<int>(L1Event::Store)];
  };
  // A state keeps an issued store pending if its Store cell stalls or
  // re-sends the request without moving.
  const auto holds = [&](L1State s) {
    const auto& c = store_cell(s);
    return c.marker == Marker::kStall ||
           (c.marker == Marker::kNormal && has_action(c, ActionKind::sendGETX) &&
            !c.next);
  };
  // Where a pending store lands once the line enters `s`.
  const auto settle = [&](L1State s) -> std::optional<L1State> {
    if (holds(s)) return s;
    const auto& c = store_cell(s);
    if (c.marker == Marker::kNormal && has_action(c, ActionKind::sendGETX)) {
      const L1State t = c.next.value_or(s);
      if (holds(t)) return t;
    }
    return std::nullopt;
  };

  std::set<L1State> seen;
  std::vector<L1State> work;
  for (int s = 0; s < kL1StateCount; ++s) {
    const auto st = static_cast<L1State>(s);
    const auto& c = store_cell(st);
    if (c.marker != Marker::kNormal || !has_action(c, ActionKind::sendGETX)) continue;
    if (auto t = settle(c.next.value_or(st)); t && seen.insert(*t).second) {
      work.push_back(*t);
    }
  }
  while (!work.empty()) {
    const L1State s = work.back();
    work.pop_back();
    for (int e = 0; e < kL1EventCount; ++e) {
      const auto ev = static_cast<L1Event>(e);
      if (ev == L1Event::Load || ev == L1Event::Store || ev == L1Event::Replacement)
        continue;
      const auto& c = table[static_cast<int>(s)][e];
      if (c.marker != Marker::kNormal || !c.next) continue;
      if (auto t = settle(*c.next); t && seen.insert(*t).second) {
        work.push_back(*t);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

ValidationReport validate_tables() {
  ValidationReport r;
  for (int s = 0; s < kL1StateCount; ++s) {
    for (int e = 0; e < kL1EventCount; ++e) {
      const auto st = static_cast<L1State>(s);
      const auto ev = static_cast<L1Event>(e);
      const auto& strict = l1_table_lookup(st, ev, TableMode::kStrict);
      const auto& errata = l1_table_lookup(st, ev, TableMode::kErrata);
      const CellRef ref{"L1", to_string(st), to_string(ev)};
      const bool defined = strict.marker != Marker::kNormal ||
                           !strict.actions.empty() || strict.next.has_value();
      if (defined) {
        ++r.l1_cells_defined;
      } else {
        r.missing.push_back(ref);
      }
      if (!(strict == errata)) {
        r.errata_diff.push_back({ref, cell_text(strict), cell_text(errata)});
      }
    }
  }
  for (int s = 0; s < kL2StateCount; ++s) {
    for (int e = 0; e < kL2EventCount; ++e) {
      const auto st = static_cast<L2State>(s);
      const auto ev = static_cast<L2Event>(e);
      const auto& strict = l2_table_lookup(st, ev, TableMode::kStrict);
      const auto& errata = l2_table_lookup(st, ev, TableMode::kErrata);
      const CellRef ref{"L2", to_string(st), to_string(ev)};
      const bool defined = strict.marker != Marker::kNormal ||
                           !strict.actions.empty() || strict.next.has_value();
      if (defined) {
        ++r.l2_cells_defined;
      } else {
        r.missing.push_back(ref);
      }
      if (!(strict == errata)) {
        r.errata_diff.push_back({ref, cell_text(strict), cell_text(errata)});
      }
    }
  }
  for (const ErrataOverride& o : errata_overrides()) {
    bool applied = false;
    for (const CellRef& c : o.cells) {
      const bool differs = std::any_of(r.errata_diff.begin(), r.errata_diff.end(),
                                       [&c](const CellDiff& d) { return d.cell == c; });
      if (differs) {
        applied = true;
      } else {
        r.unapplied.push_back(c);
      }
    }
    if (applied) r.overrides.push_back(o);
  }
  for (const CellDiff& d : r.errata_diff) {
    const bool listed = std::any_of(
        errata_overrides().begin(), errata_overrides().end(), [&d](const ErrataOverride& o) {
          return std::find(o.cells.begin(), o.cells.end(), d.cell) != o.cells.end();
        });
    if (!listed) r.unlisted.push_back(d.cell);
  }

  r.aliases = alias_uses();
  for (const AliasUse& a : r.aliases) {
    if (is_action_name(a.written)) {
      r.variants.push_back(a);
      continue;
    }
    auto it = std::find_if(r.alias_groups.begin(), r.alias_groups.end(),
                           [&a](const AliasGroup& g) { return g.written == a.written; });
    if (it == r.alias_groups.end()) {
      r.alias_groups.push_back({a.written, a.normalized, {}});
      it = std::prev(r.alias_groups.end());
    }
    it->cells.push_back(a.cell);
  }

  for (TableMode mode : {TableMode::kStrict, TableMode::kErrata}) {
    const auto holding = states_holding_pending_getx(mode);
    auto& out = mode == TableMode::kStrict ? r.unreachable_strict : r.unreachable_errata;
    for (int s = 0; s < kL1StateCount; ++s) {
      const auto st = static_cast<L1State>(s);
      if (std::find(holding.begin(), holding.end(), st) == holding.end()) {
        out.push_back({"L1", to_string(st), to_string(L1Event::FreezeGETX)});
      }
    }
  }
  return r;
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  os << "cells: L1 " << l1_cells_defined << "/" << kL1StateCount * kL1EventCount
     << ", L2 " << l2_cells_defined << "/" << kL2StateCount * kL2EventCount
     << ", missing " << missing.size() << "\n";
  for (const auto& m : missing) os << "  missing " << m.str() << "\n";
  os << "errata overrides: " << overrides.size() << " (" << errata_diff.size() << " cells)\n";
  for (const ErrataOverride& o : overrides) {
    os << "  #" << o.number << " " << o.summary << "\n";
    for (const CellRef& c : o.cells) {
      const auto d = std::find_if(errata_diff.begin(), errata_diff.end(),
                                  [&c](const CellDiff& x) { return x.cell == c; });
      if (d == errata_diff.end()) continue;
      os << "     " << c.str() << ": " << d->strict_text << " => " << d->errata_text << "\n";
    }
  }
  for (const CellRef& c : unlisted) os << "  UNLISTED " << c.str() << "\n";
  for (const CellRef& c : unapplied) os << "  NOT APPLIED " << c.str() << "\n";
  os << "alias normalizations: " << alias_groups.size() << "\n";
  for (const AliasGroup& g : alias_groups) {
    os << "  " << g.written << " => " << g.normalized << ":";
    for (const CellRef& c : g.cells) os << " " << c.str();
    os << "\n";
  }
  for (const AliasUse& v : variants) {
    os << "kept as its own action: " << v.written << " at " << v.cell.str() << ", runs as "
       << v.normalized << "\n";
  }
  const auto list = [&os](const char* label, const std::vector<CellRef>& cells) {
    os << label << ":";
    for (const auto& c : cells) os << " " << c.state;
    os << "\n";
  };
  list("FreezeGETX unreachable by classification (strict)", unreachable_strict);
  list("FreezeGETX unreachable by classification (errata)", unreachable_errata);
  return os.str();
}

}  // namespace locke
