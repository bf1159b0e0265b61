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

#ifndef LOCKE_TABLES_HPP_
#define LOCKE_TABLES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace locke {

enum class L1State : std::uint8_t { I, S, O, E, M, IS, IM, SM, PS, PX, PO, F };
enum class L2State : std::uint8_t { I, A, S, O, M, PA, PT, PX, PO };

inline constexpr int kL1StateCount = 12;
inline constexpr int kL2StateCount = 9;

// Column order matches the L1 table.
enum class L1Event : std::uint8_t {
  Load,
  Store,
  Replacement,
  Gets,
  Getx,
  FreezeGETX,
  SpecialGETS,
  SpecialGETX,
  DataShared,
  DataOwner,
  DataAllTokens,
  Ack,
  Retry,
  Complete,
};

// Column order matches the L2 table. There is no FreezeGETX, Retry or
// Complete column at the L2.
enum class L2Event : std::uint8_t {
  Replacement,
  L1_Gets,
  L1_Getx,
  SpecialGETS,
  SpecialGETX,
  DataShared,
  DataOwner,
  DataAllTokens,
  Tokens,
  Ack,
};

inline constexpr int kL1EventCount = 14;
inline constexpr int kL2EventCount = 10;

enum class ActionKind : std::uint8_t {
  sendGETS,
  sendGETX,
  doLoad,
  doStore,
  replace,
  send1Token,
  sendToken,
  sendAllTokens,
  sendTokens,
  update,
  sendAck,
  bounceData,
  bounceL2,
  bounceToBoss,
  askToRetryBC,
  askToRetryLater,
  informTokenDest,
  informTokensDest,
  informOwnerDest,
  retryWithBoss,
  sendSpecialGETS,
  sendSpecialGETX,
  storeData,
  updateNumTokens,
  issueWriteback,
};

enum class Marker : std::uint8_t { kNormal, kStall, kIgnore, kError };

enum class TableMode : std::uint8_t { kStrict, kErrata };

template <class State>
struct Transition {
  Marker marker = Marker::kNormal;
  std::vector<ActionKind> actions;  // executed left to right
  std::optional<State> next;        // absent: stay in the current state

  bool operator==(const Transition&) const = default;
};

using L1Transition = Transition<L1State>;
using L2Transition = Transition<L2State>;

const char* to_string(L1State s);
const char* to_string(L2State s);
const char* to_string(L1Event e);
const char* to_string(L2Event e);
const char* to_string(ActionKind a);
const char* to_string(TableMode m);

std::optional<L1State> parse_l1_state(std::string_view s);
std::optional<L2State> parse_l2_state(std::string_view s);
std::optional<TableMode> parse_table_mode(std::string_view s);

// Total over every (state, event) pair; "e" cells come back with
// Marker::kError rather than failing.
const L1Transition& l1_table_lookup(L1State state, L1Event event, TableMode mode);
const L2Transition& l2_table_lookup(L2State state, L2Event event, TableMode mode);

// "sendAllTokens /PS", "/I", "stall", ...
std::string cell_text(const L1Transition& t);
std::string cell_text(const L2Transition& t);

// One line per cell, "L1,S,Getx -> sendAllTokens /PS", L1 rows first.
std::string dump_tables(TableMode mode);

struct CellRef {
  std::string table;  // "L1" or "L2"
  std::string state;
  std::string event;

  std::string str() const { return table + "," + state + "," + event; }
  bool operator==(const CellRef&) const = default;
};

struct CellDiff {
  CellRef cell;
  std::string strict_text;
  std::string errata_text;
};

struct AliasUse {
  CellRef cell;
  std::string written;     // spelling in the source table
  std::string normalized;  // action it is encoded as
};

// One numbered entry of the errata list and the cells it touches.
struct ErrataOverride {
  int number = 0;
  std::string summary;
  std::vector<CellRef> cells;
};

const std::vector<ErrataOverride>& errata_overrides();

// All cells where one misspelling was read as one action.
struct AliasGroup {
  std::string written;
  std::string normalized;
  std::vector<CellRef> cells;
};

struct ValidationReport {
  int l1_cells_defined = 0;
  int l2_cells_defined = 0;
  std::vector<CellRef> missing;
  std::vector<CellDiff> errata_diff;
  // Listed overrides that actually differ between the two modes.
  std::vector<ErrataOverride> overrides;
  // Differences no override accounts for, and listed cells that do not differ.
  std::vector<CellRef> unlisted;
  std::vector<CellRef> unapplied;
  std::vector<AliasUse> aliases;
  std::vector<AliasGroup> alias_groups;
  // Spellings kept as their own action rather than folded into another.
  std::vector<AliasUse> variants;
  // FreezeGETX cells per mode that event classification can never produce.
  std::vector<CellRef> unreachable_strict;
  std::vector<CellRef> unreachable_errata;

  bool complete() const { return missing.empty(); }
  bool errata_accounted() const { return unlisted.empty() && unapplied.empty(); }
  std::string str() const;
};

ValidationReport validate_tables();

// L1 states in which a pending store whose GETX has been issued can sit
// while other messages arrive, derived from the table for `mode`.
std::vector<L1State> states_holding_pending_getx(TableMode mode);

}  // namespace locke

#endif  // LOCKE_TABLES_HPP_
