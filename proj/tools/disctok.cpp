// Copyright 2026 The disctok Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// disctok: train, encode and measure discrete speech token corpora.
//
//   disctok synth         --config run.ini
//   disctok train-kmeans  --config run.ini --k 500
//   disctok train-subword --config run.ini
//   disctok encode        --config run.ini --set reduction.dedup=true
//   disctok stats         --config run.ini --report stats.txt
//   disctok eval          --config run.ini
//
// Exit status: 0 success, 2 configuration error, 3 data error,
// 4 I/O error, 1 anything else.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "disctok/binary_io.hpp"
#include "disctok/config.hpp"
#include "disctok/error.hpp"
#include "disctok/kernels.hpp"
#include "disctok/pipeline.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

int ExitCodeFor(disctok::ErrorCategory c) {
  switch (c) {
    case disctok::ErrorCategory::kConfig: return kExitConfig;
    case disctok::ErrorCategory::kData: return kExitData;
    case disctok::ErrorCategory::kIo: return kExitIo;
  }
  return kExitOther;
}

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint32_t> k;
  std::string report;
  bool key_value = false;
};

}  // namespace

int main(int argc, char** argv) {
  using disctok::PipelineConfig;
  using disctok::Report;

  CLI::App app{"Discrete speech token toolkit"};
  app.require_subcommand(1);

  const std::map<std::string, std::function<Report(const PipelineConfig&)>> commands = {
      {"synth", disctok::CmdSynth},
      {"train-kmeans", disctok::CmdTrainKMeans},
      {"train-subword", disctok::CmdTrainSubword},
      {"encode", disctok::CmdEncode},
      {"stats", disctok::CmdStats},
      {"eval", disctok::CmdEval},
  };
  const std::map<std::string, std::string> help = {
      {"synth", "Write a synthetic clustered feature corpus"},
      {"train-kmeans", "Train the k-means codebook"},
      {"train-subword", "Train the unigram subword model over tokens"},
      {"encode", "Write packed token files for the corpus"},
      {"stats", "Report storage size and sequence length statistics"},
      {"eval", "Report phone purity, token purity and PNMI"},
  };

  CommonOptions opts;
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("-c,--config", opts.config, "INI configuration file");
    sub->add_option("-s,--set", opts.overrides, "Override a setting, section.key=value")
        ->take_all();
    sub->add_option("--k", opts.k, "Shorthand for --set kmeans.k=N");
    sub->add_option("-r,--report", opts.report, "Also write the report to this file");
    sub->add_flag("--kv", opts.key_value, "Print key=value lines instead of the table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (opts.k) opts.overrides.push_back("kmeans.k=" + std::to_string(*opts.k));
    const PipelineConfig cfg = opts.config.empty()
                                   ? disctok::ParseConfig("", opts.overrides)
                                   : disctok::LoadConfig(opts.config, opts.overrides);
    if (cfg.runtime.threads > 0) disctok::kernels::SetThreads(cfg.runtime.threads);

    const Report report = commands.at(name)(cfg);
    std::cout << (opts.key_value ? report.ToKeyValue() : report.ToText());
    if (!opts.report.empty()) {
      disctok::WriteTextAtomic(opts.report, report.ToText() + "\n" + report.ToKeyValue());
    }
  } catch (const disctok::Error& e) {
    std::cerr << "disctok " << name << ": " << e.what() << "\n";
    return ExitCodeFor(e.category());
  } catch (const std::exception& e) {
    std::cerr << "disctok " << name << ": " << e.what() << "\n";
    return kExitOther;
  }
  return 0;
}
