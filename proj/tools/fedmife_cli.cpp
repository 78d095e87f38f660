/*
 * Copyright 2026 The FedMife Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// fedmife: simulate | bench | group

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedmife/fedmife.hpp"

namespace {

namespace ha = fedmife;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTrainingFailed = 3;

template <typename T>
std::vector<T> ParseList(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      ha::Fail(ha::ErrorCode::kConfig,
               std::string("bad ") + what + " list entry '" + item + "'");
    }
  }
  return out;
}

std::filesystem::path PrepareOutDir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) ha::Fail(ha::ErrorCode::kIo, "cannot create " + out + ": " + ec.message());
  return dir;
}

struct SimulateArgs {
  std::string scenario;
  std::string out = "run";
  std::optional<std::uint64_t> seed;
  std::optional<int> precision;
  std::optional<int> epochs;
  std::string mode;
  std::string baseline;
  bool trace = false;
};

int Simulate(const SimulateArgs& args) {
  ha::Scenario s = ha::LoadScenario(args.scenario);
  if (args.seed) s.config.seed = *args.seed;
  if (args.precision) s.config.precision = *args.precision;
  if (args.epochs) s.config.epochs = *args.epochs;
  if (!args.mode.empty()) s.config.mode = ha::ParseNonceMode(args.mode);
  if (!args.baseline.empty()) s.config.privacy = ha::ParsePrivacyMode(args.baseline);
  const ha::PreparedRun run = ha::PrepareRun(s);
  const auto dir = PrepareOutDir(args.out);
  try {
    const ha::TrainingResult result = ha::RunTraining(
        s.config, run.arch, run.initial, run.participants, s.schedule, &run.test);
    ha::WriteTextFile((dir / "metrics.csv").string(), ha::MetricsCsv(result.metrics));
    ha::WriteTextFile((dir / "timings.csv").string(), ha::TimingsCsv(result.metrics));
    ha::WriteTextFile((dir / "final_model.txt").string(), ha::ModelText(result.model));
    if (args.trace) {
      ha::WriteTextFile((dir / "trace.txt").string(), ha::FormatTrace(result.trace));
    }
    const auto& last = result.metrics.back();
    std::cout << "epochs completed " << result.completed_epochs() << "/"
              << result.metrics.size() << ", final f1 " << ha::FormatDouble(last.f1, "%.4f")
              << ", outputs in " << dir.string() << "\n";
  } catch (const ha::TrainingFailedError& e) {
    ha::WriteTextFile((dir / "metrics.csv").string(), ha::MetricsCsv(e.metrics()));
    ha::WriteTextFile((dir / "timings.csv").string(), ha::TimingsCsv(e.metrics()));
    std::cerr << "training failed: " << e.what() << "\n";
    return kExitTrainingFailed;
  }
  return kExitOk;
}

struct BenchArgs {
  std::string out = "bench";
  std::string participants = "2,4,8,16";
  std::string precision = "6";
  std::size_t dim = 1000;
  std::string mode = "fresh";
  std::string operation = "end-to-end";
  int repetitions = 3;
  int bits = 512;
  std::uint64_t seed = 1;
  double range = 0.01;
};

int Bench(const BenchArgs& args) {
  ha::BenchSpec spec;
  spec.operation = ha::ParseBenchOperation(args.operation);
  spec.participants = ParseList<std::size_t>(args.participants, "participants");
  spec.precisions = ParseList<int>(args.precision, "precision");
  spec.dim = args.dim;
  spec.mode = ha::ParseNonceMode(args.mode);
  spec.repetitions = args.repetitions;
  spec.security_bits = args.bits;
  spec.seed = args.seed;
  spec.value_range = args.range;
  spec.Validate();
  const auto dir = PrepareOutDir(args.out);
  const auto rows = ha::RunBench(spec);
  const std::string csv = ha::BenchCsv(rows);
  ha::WriteTextFile((dir / "bench.csv").string(), csv);
  ha::WriteTextFile((dir / "bench_meta.json").string(), ha::BenchMetaJson(spec));
  std::cout << csv;
  return kExitOk;
}

int Group(int bits, std::optional<std::uint64_t> seed, const std::string& out) {
  const ha::GroupParams group = ha::GroupSetup(bits, seed);
  if (out.empty()) {
    std::cout << ha::GroupToJson(group);
  } else {
    ha::SaveGroup(group, out);
    std::cout << "wrote " << ha::BitLength(group.modulus) << "-bit group to " << out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning with functional-encryption secure aggregation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a scenario end to end");
  simulate->add_option("--scenario", sim.scenario, "scenario JSON file")->required();
  simulate->add_option("--out", sim.out, "output directory")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "override the scenario seed");
  simulate->add_option("--precision", sim.precision, "decimal digits of fixed point");
  simulate->add_option("--epochs", sim.epochs, "override the epoch count");
  simulate->add_option("--mode", sim.mode, "nonce mode")
      ->check(CLI::IsMember({"fresh", "shared"}));
  simulate->add_option("--baseline", sim.baseline, "privacy baseline")
      ->check(CLI::IsMember({"none", "local-dp", "no-dp", "dp"}));
  simulate->add_flag("--trace", sim.trace, "also write the message trace");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "encryption/decryption micro-benchmarks");
  bench_cmd->add_option("--out", bench.out, "output directory")->capture_default_str();
  bench_cmd->add_option("--participants", bench.participants, "comma list, may be empty")
      ->capture_default_str();
  bench_cmd->add_option("--precision", bench.precision, "comma list")->capture_default_str();
  bench_cmd->add_option("--dim", bench.dim, "vector length")->capture_default_str();
  bench_cmd->add_option("--mode", bench.mode, "nonce mode")
      ->check(CLI::IsMember({"fresh", "shared"}))
      ->capture_default_str();
  bench_cmd->add_option("--operation", bench.operation, "enc|dec|dlog|end-to-end")
      ->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions, "median over this many runs")
      ->capture_default_str();
  bench_cmd->add_option("--bits", bench.bits, "modulus size")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "group and data seed")->capture_default_str();
  bench_cmd->add_option("--range", bench.range, "plaintext magnitude bound")
      ->capture_default_str();

  int group_bits = ha::kDefaultSecurityBits;
  std::optional<std::uint64_t> group_seed;
  std::string group_out;
  auto* group = app.add_subcommand("group", "generate or print a group context file");
  group->add_option("--bits", group_bits, "modulus size")->capture_default_str();
  group->add_option("--seed", group_seed, "generate deterministically from this seed");
  group->add_option("--out", group_out, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) return Simulate(sim);
    if (*bench_cmd) return Bench(bench);
    if (*group) return Group(group_bits, group_seed, group_out);
  } catch (const ha::Error& e) {
    std::cerr << "error [" << ha::ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ha::ErrorCode::kConfig || e.code() == ha::ErrorCode::kIo ||
                   e.code() == ha::ErrorCode::kInvalidArgument
               ? kExitConfig
               : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
