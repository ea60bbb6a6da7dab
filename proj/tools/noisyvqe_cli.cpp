// Copyright 2026 The noisyvqe Authors
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


// Command-line front end: train one problem, run a perturbation sweep, run the
// built-in verification suites, or report local surjectivity ranks.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure,
// 3 training diverged.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "noisyvqe/config.hpp"
#include "noisyvqe/errors.hpp"
#include "noisyvqe/verify.hpp"

namespace {

using namespace noisyvqe;

constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitDiverged = 3;

// Writes to `path`, or to stdout when it is empty or "-".
template <typename Fn>
void with_output(const std::string &path, Fn &&fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file " + path);
  fn(out);
  if (!out) throw ValidationError("failed writing " + path);
}

int run_train(const std::string &config_path, const std::string &out_path,
              std::optional<std::uint64_t> seed) {
  TrainConfig cfg = parse_train_config(load_json_file(config_path));
  if (seed) cfg.init_seed = *seed;
  const auto theta0 = initial_parameters(cfg.problem.circuit.total_params(), cfg.init_seed);
  const TrainingTrace trace = train(cfg.problem, theta0, cfg.optimizer);
  const std::string path = out_path.empty() ? cfg.output_path : out_path;
  with_output(path, [&](std::ostream &os) { write_trace(os, trace, cfg.snapshot_every); });
  auto &log = (path.empty() || path == "-") ? std::cerr : std::cout;
  log << std::setprecision(10) << "final cost " << trace.final_cost << " after "
      << trace.iterations_run << " iterations (" << to_string(trace.stop_reason) << ")\n";
  return 0;
}

int run_sweep_cmd(const std::string &config_path, const std::string &out_path,
                  std::optional<std::uint64_t> seed) {
  SweepConfig cfg = parse_sweep_config(load_json_file(config_path));
  if (seed) cfg.shared_init_seed = *seed;
  const auto records = noisyvqe::run_sweep(cfg);
  const std::string path = out_path.empty() ? cfg.output_path : out_path;
  with_output(path, [&](std::ostream &os) { write_sweep_csv(os, records); });
  auto &log = (path.empty() || path == "-") ? std::cerr : std::cout;
  try {
    const SlopeFit fit = fit_loglog_slope(records);
    log << std::setprecision(6) << "log-log slope " << fit.slope << ", r^2 "
        << fit.r_squared << " over " << fit.n_points << " points (" << fit.excluded
        << " excluded)\n";
  } catch (const ValidationError &e) {
    log << "no slope fit: " << e.what() << '\n';
  }
  return 0;
}

int run_verify(std::optional<std::uint64_t> seed, bool corrupt) {
  VerifyOptions opts;
  if (seed) opts.seed = *seed;
  opts.inject_corrupt_channel = corrupt;
  const VerifyReport report = verify_all(opts);
  print_report(std::cout, report);
  return report.all_passed() ? 0 : kExitVerifyFailed;
}

int run_surjectivity(const std::string &config_path, const std::string &out_path,
                     std::optional<std::uint64_t> seed) {
  SurjectivityConfig cfg = parse_surjectivity_config(load_json_file(config_path));
  if (seed) cfg.seed = *seed;
  const auto full = static_cast<std::size_t>(cfg.circuit.dim() * cfg.circuit.dim() - 1);
  with_output(out_path, [&](std::ostream &os) {
    os << "sample,rank,full_rank,locally_surjective\n";
    for (int s = 0; s < cfg.samples; ++s) {
      const auto theta = initial_parameters(cfg.circuit.total_params(),
                                            cfg.seed + static_cast<std::uint64_t>(s));
      const auto rank = local_surjectivity_rank(cfg.circuit, theta);
      os << s << ',' << rank << ',' << full << ',' << (rank == full ? "yes" : "no") << '\n';
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Noisy variational circuit simulator and trainer"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool corrupt = false;

  auto add_common = [&](CLI::App *cmd, bool needs_config) {
    if (needs_config) cmd->add_option("--config", config, "JSON config file")->required();
    cmd->add_option("--out", out, "output file (default: config output_path or stdout)");
    cmd->add_option("--seed", seed, "override the config seed");
  };
  auto *train_cmd = app.add_subcommand("train", "train one problem and write its trace");
  add_common(train_cmd, true);
  auto *sweep_cmd = app.add_subcommand("sweep", "run a perturbation sweep and write CSV");
  add_common(sweep_cmd, true);
  auto *verify_cmd = app.add_subcommand("verify", "run the built-in verification suites");
  verify_cmd->add_option("--seed", seed, "seed for the random instances");
  verify_cmd->add_flag("--inject-corrupt-channel", corrupt,
                       "add a suite that must fail, to exercise failure reporting");
  auto *surj_cmd = app.add_subcommand("surjectivity", "report local surjectivity ranks");
  add_common(surj_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*train_cmd) return run_train(config, out, seed);
    if (*sweep_cmd) return run_sweep_cmd(config, out, seed);
    if (*verify_cmd) return run_verify(seed, corrupt);
    if (*surj_cmd) return run_surjectivity(config, out, seed);
  } catch (const DivergenceError &e) {
    std::cerr << "error: " << e.what() << " (iteration " << e.iteration() << ")\n";
    return kExitDiverged;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
