// SPDX-License-Identifier: Apache-2.0
//
// ucalos: line-of-sight MIMO link simulator for uniform circular arrays
// Copyright (C) 2026 The ucalos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <ucalos/experiments.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_config = 2;
constexpr int exit_capacity = 3;

struct Options {
  std::string config;
  std::string out = ".";
  unsigned workers = 1;
};

int run(ucalos::ExperimentKind expected, const Options &opt) {
  try {
    const auto cfg = ucalos::load_config(opt.config);
    if (cfg.kind != expected)
      throw ucalos::ConfigError("config describes a '" + std::string(ucalos::to_string(cfg.kind)) +
                                "' experiment but the subcommand expects '" +
                                std::string(ucalos::to_string(expected)) + "'");
    const auto outputs = ucalos::run_experiment(cfg, opt.workers);
    ucalos::write_outputs(opt.out, outputs);
    for (const auto &o : outputs)
      std::cout << opt.out << "/" << o.name << "\n";
    return exit_ok;
  } catch (const ucalos::ConfigError &e) {
    std::cerr << opt.config << ": " << e.what() << "\n";
    return exit_config;
  } catch (const ucalos::ArgumentError &e) {
    std::cerr << opt.config << ": " << e.what() << "\n";
    return exit_config;
  } catch (const ucalos::CapacityError &e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return exit_capacity;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"UCA line-of-sight MIMO link simulator"};
  app.require_subcommand(1);

  struct Sub {
    const char *name;
    const char *help;
    ucalos::ExperimentKind kind;
  };
  const Sub subs[] = {
      {"channel", "Channel matrix, circulant check, subchannel gain profile", ucalos::ExperimentKind::Channel},
      {"sweep-variance", "Subchannel gain variance versus array radius", ucalos::ExperimentKind::VarianceSweep},
      {"spacing", "Largest antenna count under a variance threshold", ucalos::ExperimentKind::Spacing},
      {"ber", "Monte Carlo bit error rate", ucalos::ExperimentKind::Ber},
      {"complexity", "Detector operation counts", ucalos::ExperimentKind::Complexity},
  };

  Options opt;
  int rc = exit_ok;
  for (const auto &s : subs) {
    auto *cmd = app.add_subcommand(s.name, s.help);
    cmd->add_option("--config", opt.config, "Experiment config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
    cmd->add_option("--workers", opt.workers, "Worker threads for Monte Carlo runs")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1024u));
    const auto kind = s.kind;
    cmd->callback([&opt, &rc, kind] { rc = run(kind, opt); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }
  return rc;
}
