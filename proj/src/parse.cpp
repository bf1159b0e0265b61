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

#include <charconv>
#include <sstream>

#include "locke/config.hpp"
#include "locke/trace.hpp"

namespace locke {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto h = s.find('#');
  return h == std::string_view::npos ? s : s.substr(0, h);
}

template <class Int>
bool to_int(std::string_view s, Int& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

template <class Int>
Int config_int(std::string_view key, std::string_view v) {
  Int out{};
  if (!to_int(v, out)) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

void Config::validate() const {
  if (n_l1 < 1) throw ConfigError("n_l1 must be at least 1");
  if (n_l1 > 64) throw ConfigError("n_l1 must be at most 64");
  if (total_tokens() < 2) throw ConfigError("tokens must be at least 2");
  if (l1.sets < 1 || l1.ways < 1) throw ConfigError("l1 geometry must be positive");
  if (l2.sets < 1 || l2.ways < 1) throw ConfigError("l2 geometry must be positive");
  if (blocks < 1) throw ConfigError("blocks must be at least 1");
  if (l2.sets * l2.ways < blocks) {
    throw ConfigError("l2 must hold every block (l2_sets * l2_ways >= blocks)");
  }
  if (progress_bound < 1) throw ConfigError("progress_bound must be positive");
}

std::string Config::str() const {
  std::ostringstream os;
  os << "n_l1=" << n_l1 << " tokens=" << total_tokens() << " l1=" << l1.sets << "x"
     << l1.ways << " l2=" << l2.sets << "x" << l2.ways << " blocks=" << blocks
     << " mode=" << to_string(mode) << " policy=" << to_string(policy) << " seed=" << seed
     << " K=" << progress_bound << " backoff=" << backoff;
  if (fault != Fault::kNone) os << " fault=stale_data_owner";
  return os.str();
}

void set_config_value(Config& c, std::string_view key, std::string_view value) {
  if (key == "n_l1") {
    c.n_l1 = config_int<int>(key, value);
  } else if (key == "tokens" || key == "tokens_T") {
    c.tokens = config_int<int>(key, value);
  } else if (key == "l1_sets") {
    c.l1.sets = config_int<int>(key, value);
  } else if (key == "l1_ways") {
    c.l1.ways = config_int<int>(key, value);
  } else if (key == "l2_sets") {
    c.l2.sets = config_int<int>(key, value);
  } else if (key == "l2_ways") {
    c.l2.ways = config_int<int>(key, value);
  } else if (key == "blocks") {
    c.blocks = config_int<int>(key, value);
  } else if (key == "mode") {
    const auto m = parse_table_mode(value);
    if (!m) throw ConfigError("bad mode '" + std::string(value) + "'");
    c.mode = *m;
  } else if (key == "policy") {
    const auto p = parse_policy(value);
    if (!p) throw ConfigError("bad policy '" + std::string(value) + "'");
    c.policy = *p;
  } else if (key == "seed") {
    c.seed = config_int<std::uint64_t>(key, value);
  } else if (key == "progress_bound" || key == "K") {
    c.progress_bound = config_int<std::uint64_t>(key, value);
  } else if (key == "backoff") {
    c.backoff = config_int<std::uint64_t>(key, value);
  } else if (key == "fault") {
    if (value == "none") {
      c.fault = Fault::kNone;
    } else if (value == "stale_data_owner") {
      c.fault = Fault::kStaleDataOnDataOwner;
    } else {
      throw ConfigError("bad fault '" + std::string(value) + "'");
    }
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

Config parse_config(std::string_view text, Config base) {
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected key=value at line " + std::to_string(lineno));
    }
    try {
      set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " at line " + std::to_string(lineno));
    }
  }
  return base;
}

Trace parse_trace(std::string_view text, int n_l1) {
  Trace out;
  int segment = 0;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const auto w = words(trim(strip_comment(raw)));
    if (w.empty()) continue;
    const std::string at = " at line " + std::to_string(lineno);
    if (w.size() == 1 && (w[0] == "FENCE" || w[0] == "fence")) {
      ++segment;
      continue;
    }
    TraceOp op;
    op.segment = segment;
    std::uint32_t addr = 0;
    if (w.size() < 3 || !to_int(w[0], op.cpu) || !to_int(w[2], addr)) {
      throw TraceError("malformed op" + at);
    }
    op.addr = BlockAddr{addr};
    if (w[1] == "LD") {
      if (w.size() != 3) throw TraceError("malformed load" + at);
      op.kind = OpKind::kLoad;
    } else if (w[1] == "ST") {
      if (w.size() != 4 || !to_int(w[3], op.value) || op.value < 0) {
        throw TraceError("malformed store" + at);
      }
      op.kind = OpKind::kStore;
    } else {
      throw TraceError("unknown op '" + std::string(w[1]) + "'" + at);
    }
    if (op.cpu < 0 || op.cpu >= n_l1) throw TraceError("cpu out of range" + at);
    out.push_back(op);
  }
  return out;
}

std::string format_trace(const Trace& trace) {
  std::ostringstream os;
  int segment = 0;
  for (const TraceOp& op : trace) {
    while (segment < op.segment) {
      os << "FENCE\n";
      ++segment;
    }
    os << op.cpu << ' ' << to_string(op.kind) << ' ' << op.addr;
    if (op.kind == OpKind::kStore) os << ' ' << op.value;
    os << '\n';
  }
  return os.str();
}

}  // namespace locke
