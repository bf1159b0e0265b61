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

#include "locke/explorer.hpp"

#include <deque>
#include <sstream>
#include <unordered_set>

#include "locke/checker.hpp"

namespace locke {

Trace default_explore_stimuli() {
  return parse_trace("0 ST 0 1\n1 ST 0 0\n", 2);
}

std::string ExploreReport::str() const {
  std::ostringstream os;
  os << "visited " << visited << " states, " << transitions << " transitions, depth " << depth
     << ", " << terminal << " terminal" << (truncated ? ", truncated" : "") << "\n";
  if (terminal > 0) {
    os << "terminal states between depth " << first_terminal << " and " << last_terminal << "\n";
  }
  os << "stuck states: " << stuck_count << "\n";
  for (const Counterexample& s : stuck) {
    os << "  stuck after " << s.schedule.size() << " steps: " << s.what << "\n";
  }
  if (violation) {
    os << "violation after " << violation->schedule.size() << " steps: " << violation->what
       << "\nschedule:\n"
       << format_schedule(violation->schedule);
  } else {
    os << "no violations\n";
  }
  return os.str();
}

ExploreReport explore(const Config& config, const Trace& stimuli, const ExploreOptions& options) {
  ExploreReport rep;
  System root(config, stimuli, LogMode::kNone);
  std::unordered_set<std::string> seen;
  seen.insert(root.canonical_key());
  rep.visited = 1;

  std::deque<System> level;
  level.push_back(std::move(root));
  for (int depth = 0; !level.empty(); ++depth) {
    rep.depth = depth;
    std::deque<System> next;
    for (System& s : level) {
      const std::vector<Choice> choices = s.enabled();
      if (choices.empty()) {
        if (s.ops_done()) {
          ++rep.terminal;
          if (rep.first_terminal < 0) rep.first_terminal = depth;
          rep.last_terminal = depth;
        } else {
          ++rep.stuck_count;
          if (rep.stuck.size() < options.keep_stuck) {
            std::string what;
            for (const L1Controller& c : s.l1s()) {
              if (c.current_op()) {
                what += c.id().str() + " waits on " + to_string(c.current_op()->kind) + " a" +
                        std::to_string(c.current_op()->addr.value) + "; ";
              }
            }
            rep.stuck.push_back({what + "key " + s.canonical_key(), s.schedule()});
          }
        }
        continue;
      }
      if (depth >= options.max_depth) {
        rep.truncated = true;
        continue;
      }
      for (const Choice& c : choices) {
        System child = s;
        ++rep.transitions;
        std::string what;
        try {
          child.apply(c);
          const auto bad = check_safety(child.snapshot());
          if (!bad.empty()) what = bad.front().str();
        } catch (const ProtocolError& e) {
          what = std::string("protocol: ") + e.what();
        } catch (const InternalFault& e) {
          what = std::string("internal fault: ") + e.what();
        }
        if (!what.empty()) {
          std::vector<Choice> path = s.schedule();
          path.push_back(c);
          rep.violation = Counterexample{what, std::move(path)};
          rep.depth = depth + 1;
          return rep;
        }
        if (!seen.insert(child.canonical_key()).second) continue;
        ++rep.visited;
        if (rep.visited >= options.max_states) {
          rep.truncated = true;
          return rep;
        }
        next.push_back(std::move(child));
      }
    }
    level.swap(next);
  }
  return rep;
}

}  // namespace locke
