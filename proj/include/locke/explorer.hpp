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

#ifndef LOCKE_EXPLORER_HPP_
#define LOCKE_EXPLORER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locke/config.hpp"
#include "locke/system.hpp"
#include "locke/trace.hpp"

namespace locke {

struct ExploreOptions {
  // The space is unbounded once stale requests can sit in the network
  // indefinitely, so the search is depth-bounded.
  int max_depth = 24;
  std::uint64_t max_states = 5'000'000;
  // Stuck states kept in the report (all are counted).
  std::size_t keep_stuck = 5;
};

struct Counterexample {
  std::string what;
  std::vector<Choice> schedule;
};

struct ExploreReport {
  std::uint64_t visited = 0;
  std::uint64_t transitions = 0;
  std::uint64_t terminal = 0;  // every op done and nothing left in flight
  int depth = 0;               // deepest level reached
  int first_terminal = -1;     // depth of the shallowest terminal state
  int last_terminal = -1;      // depth of the deepest terminal state
  bool truncated = false;      // frontier cut off by the depth or state bound
  std::optional<Counterexample> violation;
  std::uint64_t stuck_count = 0;
  std::vector<Counterexample> stuck;

  bool ok() const { return !violation && stuck_count == 0; }
  std::string str() const;
};

// Breadth-first search over every interleaving of injections, deliveries
// and timer expiries. Stops at the first safety violation, which is then a
// shortest one.
ExploreReport explore(const Config& config, const Trace& stimuli,
                      const ExploreOptions& options = {});

// Two processors storing to block 0 at the same time.
Trace default_explore_stimuli();

}  // namespace locke

#endif  // LOCKE_EXPLORER_HPP_
