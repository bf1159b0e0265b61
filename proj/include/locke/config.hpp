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

#ifndef LOCKE_CONFIG_HPP_
#define LOCKE_CONFIG_HPP_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "locke/controller.hpp"
#include "locke/l1_controller.hpp"
#include "locke/network.hpp"
#include "locke/tables.hpp"

namespace locke {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  int n_l1 = 2;
  int tokens = 0;  // 0: one per L1, at least 2
  CacheGeometry l1{4, 2};
  CacheGeometry l2{4, 4};
  int blocks = 4;
  TableMode mode = TableMode::kErrata;
  DeliveryPolicy policy = DeliveryPolicy::kRandom;
  std::uint64_t seed = 1;
  std::uint64_t progress_bound = 10000;
  std::uint64_t backoff = 10;
  Fault fault = Fault::kNone;

  int total_tokens() const { return tokens > 0 ? tokens : std::max(n_l1, 2); }
  // Throws ConfigError naming the first bad field.
  void validate() const;
  std::string str() const;
};

// Flat `key = value` lines, `#` comments. Unknown keys are errors.
Config parse_config(std::string_view text, Config base = {});
// Applies one `key=value` assignment.
void set_config_value(Config& c, std::string_view key, std::string_view value);

}  // namespace locke

#endif  // LOCKE_CONFIG_HPP_
