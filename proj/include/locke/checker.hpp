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

#ifndef LOCKE_CHECKER_HPP_
#define LOCKE_CHECKER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locke/snapshot.hpp"

namespace locke {

struct Verdict {
  bool ok = true;
  std::string check;
  std::optional<BlockAddr> addr;
  std::string detail;

  static Verdict pass(std::string check) { return {true, std::move(check), {}, {}}; }
  static Verdict fail(std::string check, std::optional<BlockAddr> addr, std::string detail) {
    return {false, std::move(check), addr, std::move(detail)};
  }
  std::string str() const;
};

// Tokens held anywhere plus tokens in flight sum to T, with one owner.
Verdict check_conservation(const Snapshot& s, BlockAddr addr);
// M/E (and L2 M) lines hold every token, and never beside another holder.
Verdict check_exclusivity(const Snapshot& s, BlockAddr addr);
// Every data copy backed by at least one token agrees.
Verdict check_value_coherence(const Snapshot& s, BlockAddr addr);
// Per-state legend invariants of individual lines, plus message shapes.
Verdict check_line_states(const Snapshot& s, BlockAddr addr);

// All of the above over every block; the failures, empty when safe.
std::vector<Verdict> check_safety(const Snapshot& s);

// Loads return the last store completed before they issued, the initial 0,
// or a store that completed while they were outstanding.
Verdict check_serialization(const std::vector<OpRecord>& history, BlockAddr addr);
Verdict check_serialization(const std::vector<OpRecord>& history);
// Every issued op completes within `bound` delivery steps of its issue.
Verdict check_progress(const std::vector<OpRecord>& history, std::uint64_t now,
                       std::uint64_t bound);

}  // namespace locke

#endif  // LOCKE_CHECKER_HPP_
