// Copyright 2026 The Authors.
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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quantsel/errors.hpp"
#include "quantsel/experiment.hpp"
#include "quantsel/quantization.hpp"
#include "quantsel/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitVerifyFailure = 2;

struct RunOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int budget = 50;
};

struct ConstantsOptions {
  bool regenerate = false;
  std::string out_path;
};

int run_command(const RunOptions& opts) {
  quantsel::ExperimentConfig cfg = quantsel::parse_config(opts.config_path);
  for (const std::string& assignment : opts.overrides) {
    quantsel::apply_override(cfg, assignment);
  }
  quantsel::validate_config(cfg);

  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) {
    throw quantsel::ConfigError("cannot create output directory '" +
                                opts.out_dir + "': " + ec.message());
  }

  const quantsel::ResultTable table = quantsel::run_experiment(cfg);

  const std::filesystem::path out(opts.out_dir);
  quantsel::emit_csv(table, (out / "results.csv").string());
  quantsel::write_config(cfg, (out / "config.txt").string());
  quantsel::emit_plot(table, cfg, (out / "results").string());

  std::cout << "wrote " << (out / "results.csv").string() << " ("
            << table.rows.size() << " rows)\n";
  return kExitOk;
}

int verify_command(const VerifyOptions& opts) {
  if (opts.budget < 1) {
    throw quantsel::ConfigError("verification budget must be positive");
  }
  const quantsel::VerifyReport report =
      quantsel::verify_theorems(opts.seed, opts.budget);
  quantsel::write_report(std::cout, report);
  return report.all_pass() ? kExitOk : kExitVerifyFailure;
}

int constants_command(const ConstantsOptions& opts) {
  if (!opts.regenerate) {
    throw quantsel::ConfigError("constants requires --regenerate");
  }
  if (opts.out_path.empty()) {
    quantsel::write_beta_table(std::cout, "quantsel constants --regenerate");
    return kExitOk;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) {
    throw quantsel::ConfigError("cannot open '" + opts.out_path +
                                "' for writing");
  }
  quantsel::write_beta_table(out, "quantsel constants --regenerate");
  out.flush();
  if (!out) {
    throw quantsel::ConfigError("failed to write '" + opts.out_path + "'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Antenna selection simulator for base stations with "
               "low-resolution ADCs");
  app.require_subcommand(1);

  RunOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Run an experiment sweep");
  run->add_option("--config", run_opts.config_path, "Experiment config file")
      ->required();
  run->add_option("--override", run_opts.overrides,
                  "Config override as key=value (repeatable)");
  run->add_option("--out", run_opts.out_dir, "Output directory")->required();

  VerifyOptions verify_opts;
  CLI::App* verify =
      app.add_subcommand("verify", "Check analytic properties numerically");
  verify->add_option("--seed", verify_opts.seed, "Base seed");
  verify->add_option("--budget", verify_opts.budget,
                     "Random instances per check");

  ConstantsOptions constants_opts;
  CLI::App* constants =
      app.add_subcommand("constants", "Emit the quantizer distortion table");
  constants->add_flag("--regenerate", constants_opts.regenerate,
                      "Recompute the table from the Lloyd-Max solver");
  constants->add_option("--out", constants_opts.out_path,
                        "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->parsed()) {
      return run_command(run_opts);
    }
    if (verify->parsed()) {
      return verify_command(verify_opts);
    }
    return constants_command(constants_opts);
  } catch (const quantsel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
