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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locke/config.hpp"
#include "locke/explorer.hpp"
#include "locke/runner.hpp"
#include "locke/tables.hpp"
#include "locke/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw UsageError("cannot write " + path);
}

struct Common {
  std::string config_file;
  std::vector<std::string> sets;
  std::string mode;
  std::string policy;
  long long seed = -1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_file, "key=value config file");
  cmd->add_option("--set", c.sets, "override one config key (key=value)");
  cmd->add_option("--mode", c.mode, "table mode: strict or errata");
  cmd->add_option("--policy", c.policy, "delivery order: fifo, random or adversarial");
  cmd->add_option("--seed", c.seed, "rng seed");
}

locke::Config build_config(const Common& c, locke::Config base) {
  if (!c.config_file.empty()) base = locke::parse_config(slurp(c.config_file), base);
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    locke::set_config_value(base, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!c.mode.empty()) locke::set_config_value(base, "mode", c.mode);
  if (!c.policy.empty()) locke::set_config_value(base, "policy", c.policy);
  if (c.seed >= 0) base.seed = static_cast<std::uint64_t>(c.seed);
  base.validate();
  return base;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locke-sim: LOCKE token coherence simulator and checker"};
  app.require_subcommand(1);

  Common run_opts;
  std::string trace_file;
  std::string schedule_file;
  std::string schedule_out;
  bool msc = false;
  long long msc_addr = -1;
  auto* run_cmd = app.add_subcommand("run", "run a trace and check every step");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--trace", trace_file, "trace file")->required();
  run_cmd->add_option("--schedule", schedule_file, "replay this step schedule");
  run_cmd->add_option("--schedule-out", schedule_out, "write the executed schedule here");
  run_cmd->add_flag("--msc", msc, "print a message sequence chart");
  run_cmd->add_option("--addr", msc_addr, "restrict the chart to one block");

  Common fuzz_opts;
  locke::FuzzOptions fz;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "random workloads over many seeds");
  add_common(fuzz_cmd, fuzz_opts);
  fuzz_cmd->add_option("--ops", fz.ops, "ops per seed")->check(CLI::NonNegativeNumber);
  fuzz_cmd->add_option("--seeds", fz.seeds, "number of seeds")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--first-seed", fz.first_seed, "first seed");
  fuzz_cmd->add_option("--artifacts", fz.artifact_dir, "directory for failing seeds");

  Common explore_opts;
  locke::ExploreOptions ex;
  std::string explore_trace;
  std::string cex_out;
  auto* explore_cmd = app.add_subcommand("explore", "exhaustive search of a tiny system");
  add_common(explore_cmd, explore_opts);
  explore_cmd->add_option("--depth", ex.max_depth, "maximum depth")->check(CLI::PositiveNumber);
  explore_cmd->add_option("--states", ex.max_states, "state budget");
  explore_cmd->add_option("--trace", explore_trace, "stimuli (default: two racing cpus)");
  explore_cmd->add_option("--schedule-out", cex_out,
                           "write the counterexample (or first stuck) schedule here");

  bool dump = false;
  bool validate = false;
  std::string tables_mode = "strict";
  auto* tables_cmd = app.add_subcommand("tables", "print or validate the transition tables");
  tables_cmd->add_flag("--dump", dump, "one line per cell");
  tables_cmd->add_flag("--validate", validate, "completeness and errata report");
  tables_cmd->add_option("--mode", tables_mode, "strict or errata");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) {
      const locke::Config cfg = build_config(run_opts, {});
      const locke::Trace trace = locke::parse_trace(slurp(trace_file), cfg.n_l1);
      locke::RunOptions ro;
      ro.log = msc ? locke::LogMode::kFull : locke::LogMode::kTail;
      if (!schedule_file.empty()) ro.schedule = locke::parse_schedule(slurp(schedule_file));
      if (!ro.schedule && cfg.policy == locke::DeliveryPolicy::kAdversarial) {
        throw UsageError("the adversarial policy needs --schedule");
      }
      const locke::RunResult r = locke::run(cfg, trace, ro);
      if (msc) {
        std::optional<locke::BlockAddr> a;
        if (msc_addr >= 0) a = locke::BlockAddr{static_cast<std::uint32_t>(msc_addr)};
        std::cout << locke::dump_msc(r.log, cfg.n_l1, a) << "\n";
      }
      std::cout << r.report.str();
      if (!schedule_out.empty()) spill(schedule_out, locke::format_schedule(r.schedule));
      if (!r.report.ok()) {
        std::cerr << r.failure;
        return kExitViolation;
      }
      return kExitOk;
    }

    if (*fuzz_cmd) {
      locke::Config base;
      base.n_l1 = 4;
      const locke::Config cfg = build_config(fuzz_opts, base);
      if (fuzz_opts.seed >= 0) fz.first_seed = cfg.seed;
      const locke::FuzzSummary s = locke::fuzz(cfg, fz);
      std::cout << s.str();
      return s.ok() ? kExitOk : kExitViolation;
    }

    if (*explore_cmd) {
      locke::Config base;
      base.n_l1 = 2;
      base.tokens = 2;
      base.blocks = 1;
      base.l1 = {1, 1};
      base.l2 = {1, 1};
      const locke::Config cfg = build_config(explore_opts, base);
      const locke::Trace stimuli = explore_trace.empty()
                                       ? locke::default_explore_stimuli()
                                       : locke::parse_trace(slurp(explore_trace), cfg.n_l1);
      const locke::ExploreReport rep = locke::explore(cfg, stimuli, ex);
      std::cout << "config: " << cfg.str() << "\n" << rep.str();
      if (!cex_out.empty()) {
        if (rep.violation) {
          spill(cex_out, locke::format_schedule(rep.violation->schedule));
        } else if (!rep.stuck.empty()) {
          spill(cex_out, locke::format_schedule(rep.stuck.front().schedule));
        }
      }
      return rep.ok() ? kExitOk : kExitViolation;
    }

    if (*tables_cmd) {
      if (dump == validate) throw UsageError("tables needs exactly one of --dump, --validate");
      if (dump) {
        const auto mode = locke::parse_table_mode(tables_mode);
        if (!mode) throw UsageError("bad mode '" + tables_mode + "'");
        std::cout << locke::dump_tables(*mode);
        return kExitOk;
      }
      const locke::ValidationReport rep = locke::validate_tables();
      std::cout << rep.str();
      return rep.complete() && rep.errata_accounted() ? kExitOk : kExitViolation;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const locke::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const locke::TraceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const locke::ScheduleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
