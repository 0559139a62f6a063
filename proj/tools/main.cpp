#include <iostream>

#include <CLI11.hpp>

#include "harness.hpp"
#include "kschan/greedy_sampler.hpp"

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2, kRuntime = 3 };

}  // namespace

int main(int argc, char** argv) {
  using namespace kschan::harness;

  CLI::App app{"Simulate a qubit channel with the Kochen-Specker model and one-shot "
               "greedy rejection sampling."};
  app.set_version_flag("--version", KSCHAN_VERSION);
  app.require_subcommand(1);

  RunConfig config;
  std::string state, meas, dots, format = "json", out, trials_out;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--trials", config.trials, "Number of trials (per cell where applicable)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "Master seed");
    sub->add_option("--workers", config.workers, "Worker threads; 0 uses all cores");
    sub->add_option("--out", out, "Write the report to this file instead of stdout");
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* verify = app.add_subcommand("verify", "Check Born statistics of the KS model");
  CLI::App* simulate = app.add_subcommand("simulate", "Run the full one-shot protocol");
  CLI::App* mi = app.add_subcommand("mi", "Exact and Monte Carlo mutual information");
  CLI::App* cost = app.add_subcommand("cost", "Communication cost of the one-shot protocol");
  for (CLI::App* sub : {verify, simulate, mi, cost}) add_common(sub);

  for (CLI::App* sub : {verify, simulate, cost}) {
    sub->add_option("--state", state, "Bloch vector x,y,z (normalized)");
    sub->add_option("--meas", meas, "Measurement direction x,y,z (normalized)");
  }
  mi->add_option("--state", state, "State for the KL divergence, x,y,z");
  for (CLI::App* sub : {verify, simulate}) {
    sub->add_option("--dots", dots, "Comma-separated v.m values to test");
  }
  for (CLI::App* sub : {simulate, cost}) {
    sub->add_option("--bins", config.bins, "Number of z bins (even)");
    sub->add_option("--trials-out", trials_out, "Write per-trial CSV here");
  }
  verify->add_option("--angles", config.angles, "Number of polar angles in [0, pi]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (verify->parsed()) config.command = Command::kVerify;
    if (simulate->parsed()) config.command = Command::kSimulate;
    if (mi->parsed()) config.command = Command::kMi;
    if (cost->parsed()) config.command = Command::kCost;
    if (!state.empty()) config.state = parse_vector(state);
    if (!meas.empty()) config.meas = parse_vector(meas);
    if (!dots.empty()) config.dots = parse_list(dots);
    if (!out.empty()) config.output_path = out;
    if (!trials_out.empty()) config.trials_path = trials_out;
    config.format = format == "csv" ? Format::kCsv : Format::kJson;
    config = validated(config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const Report report = run(config);
    emit(report, config, std::cout);
    if (!report.passed) {
      std::cerr << command_name(config.command) << ": checks failed\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
