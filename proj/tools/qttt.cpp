// Copyright 2026 The qttt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qttt train|tournament|qi-fixed|qi-sweep|serve|emit-plots --config FILE
//      [--seed N] [--out DIR]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qttt/harness.hpp"
#include "qttt/service.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> port;
  std::optional<std::string> ui_dir;
  bool exact = false;
};

void add_common(CLI::App* sub, Options& o, bool config_required) {
  auto* c = sub->add_option("--config", o.config, "experiment config (JSON) or manifest.json");
  if (config_required) c->required();
  sub->add_option("--seed", o.seed, "override the config seed");
  sub->add_option("--out", o.out, "output directory (default: $QTTT_OUT or ./qttt-out)");
}

}  // namespace

int main(int argc, char** argv) {
  using qttt::harness::Command;
  CLI::App app{"qttt: classical, quantum and hybrid tic-tac-toe engines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qttt::harness::kVersion);

  Options o;
  const std::pair<const char*, const char*> commands[] = {
      {"train", "train engines by self-play and write checkpoints"},
      {"tournament", "round-robin Elo tournament"},
      {"qi-fixed", "noise patterns A/B/C at a fixed channel distance"},
      {"qi-sweep", "ratings against channel distance (pattern B)"},
      {"serve", "HTTP play service over trained checkpoints"},
      {"emit-plots", "tidy plot tables from a results directory"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    const std::string n = name;
    add_common(sub, o, n != "serve" && n != "emit-plots");
    if (n == "serve") {
      sub->add_option("--port", o.port, "listen port (0 picks one)");
      sub->add_option("--ui-dir", o.ui_dir, "static UI directory");
      sub->add_flag("--exact", o.exact, "exact expectations instead of shot sampling");
    }
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    qttt::harness::ExperimentConfig cfg;
    if (!o.config.empty()) cfg = qttt::harness::load_config(o.config);
    cfg.command = qttt::harness::parse_command(name);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.output_dir = *o.out;
    if (cfg.command == Command::Serve) {
      if (o.port) cfg.serve.port = *o.port;
      if (o.ui_dir) cfg.serve.ui_dir = *o.ui_dir;
      if (o.exact) cfg.serve.exact = true;
      qttt::service::serve(cfg);
      return 0;
    }
    const auto summary = qttt::harness::run(cfg);
    for (const auto& p : summary.artifacts) std::cout << p.string() << '\n';
    return 0;
  } catch (const qttt::ConfigError& e) {
    std::cerr << "qttt " << name << ": config error: " << e.what() << '\n';
    return 2;
  } catch (const qttt::IoError& e) {
    std::cerr << "qttt " << name << ": io error: " << e.what() << '\n';
    return 3;
  } catch (const qttt::MissingData& e) {
    std::cerr << "qttt " << name << ": missing data: " << e.what() << '\n';
    return 4;
  } catch (const qttt::PortInUse& e) {
    std::cerr << "qttt " << name << ": " << e.what() << '\n';
    return 5;
  } catch (const qttt::NoCheckpoints& e) {
    std::cerr << "qttt " << name << ": " << e.what() << '\n';
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "qttt " << name << ": " << e.what() << '\n';
    return 1;
  }
}
