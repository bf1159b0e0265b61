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

#ifndef LOCKE_TRACE_HPP_
#define LOCKE_TRACE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "locke/types.hpp"

namespace locke {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TraceOp {
  int cpu = 0;
  OpKind kind = OpKind::kLoad;
  BlockAddr addr;
  DataWord value = 0;
  // Ops in a later segment wait for every op of earlier segments; FENCE
  // lines open a new segment.
  int segment = 0;

  bool operator==(const TraceOp&) const = default;
};

using Trace = std::vector<TraceOp>;

// `<cpu> LD <addr>`, `<cpu> ST <addr> <value>`, `FENCE`, `#` comments.
Trace parse_trace(std::string_view text, int n_l1);
std::string format_trace(const Trace& trace);

}  // namespace locke

#endif  // LOCKE_TRACE_HPP_
