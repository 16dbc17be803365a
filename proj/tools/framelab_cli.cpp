// Batch analyzer for frames and fusion frames: reads a JSON run file,
// dispatches the requested tasks, and emits a JSON report with
// re-verifiable certificates.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "framelab/report.hpp"

namespace {

struct CommonOpts {
  std::string input;
  std::string mode;
  double eps = -1;
  long long trials = -1;
  long long samples = -1;
  long long seed = -1;
  int jobs = 0;
  int max_subset_bits = 0;
};

void apply_overrides(framelab::RunConfig& config, const CommonOpts& o) {
  if (o.mode == "exact") config.mode = framelab::Mode::Exact;
  else if (o.mode == "float") config.mode = framelab::Mode::Float;
  if (o.eps > 0) config.eps = o.eps;
  if (o.trials >= 0) config.trials = std::uint64_t(o.trials);
  if (o.samples >= 0) config.samples = std::uint64_t(o.samples);
  if (o.seed >= 0) config.seed = std::uint64_t(o.seed);
  if (o.jobs > 0) config.jobs = o.jobs;
  if (o.max_subset_bits > 0) config.max_subset_bits = o.max_subset_bits;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--input", o.input, "JSON run file")->required();
  cmd->add_option("--mode", o.mode, "exact|float (overrides the input file)")
      ->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--eps", o.eps, "float tolerance");
  cmd->add_option("--trials", o.trials, "falsifier trial budget");
  cmd->add_option("--samples", o.samples, "experiment sample count");
  cmd->add_option("--seed", o.seed, "sampling seed (fully determines all sampling)");
  cmd->add_option("--jobs", o.jobs, "worker count (speed only, never output bytes)");
  cmd->add_option("--max-subset-bits", o.max_subset_bits,
                  "raise the exponential-sweep cap beyond 24");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic phase/norm retrieval analyzer"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  bool pretty = false;
  bool timings = false;
  auto* run_cmd = app.add_subcommand("run", "run the tasks in a JSON input file");
  add_common(run_cmd, run_opts);
  run_cmd->add_flag("--pretty", pretty, "also print a human-readable summary to stderr");
  run_cmd->add_flag("--timings", timings,
                    "include per-task timings (breaks byte-determinism across runs)");

  CommonOpts verify_opts;
  std::string report_path;
  auto* verify_cmd =
      app.add_subcommand("verify", "re-verify the certificates of a previous report");
  add_common(verify_cmd, verify_opts);
  verify_cmd->add_option("--report", report_path, "report JSON produced by `run`")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      framelab::RunConfig config = framelab::parse_input(run_opts.input);
      apply_overrides(config, run_opts);
      config.timings = timings;
      const auto res = framelab::run(config);
      std::cout << res.report.dump(2) << "\n";
      if (pretty) std::cerr << framelab::pretty_report(res.report);
      return res.exit_code;
    }
    framelab::RunConfig config = framelab::parse_input(verify_opts.input);
    apply_overrides(config, verify_opts);
    std::ifstream in(report_path);
    if (!in) {
      std::cerr << "cannot open report: " << report_path << "\n";
      return 3;
    }
    nlohmann::ordered_json report;
    in >> report;
    std::string why;
    if (framelab::verify_report(config, report, &why)) {
      std::cout << "all certificates verified\n";
      return 0;
    }
    std::cerr << "certificate verification failed: " << why << "\n";
    return 1;
  } catch (const framelab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
