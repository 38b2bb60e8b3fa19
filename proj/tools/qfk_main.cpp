#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfk/presets.hpp"

namespace {

std::string resolve_out_dir(const std::string& cli_out, const std::string& config_out) {
  if (!cli_out.empty()) return cli_out;
  if (!config_out.empty()) return config_out;
  if (const char* env = std::getenv("QFK_OUT_DIR")) return env;
  return ".";
}

void print_report(const qfk::RunReport& report) {
  for (const qfk::CheckRecord& c : report.checks) {
    std::printf("[%s] %-36s observed=%-14.6g target=%.6g\n", c.pass ? "PASS" : "FAIL",
                c.check.c_str(), c.observed, c.target);
  }
  for (const qfk::OrderRow& row : report.orders) {
    if (std::isnan(row.order))
      std::printf("  %-30s h=%-8g error=%-12.6g order=exact/first rung\n", row.study.c_str(),
                  row.h, row.error);
    else
      std::printf("  %-30s h=%-8g error=%-12.6g order=%.3f\n", row.study.c_str(), row.h,
                  row.error, row.order);
  }
  std::printf("%s\n", report.all_pass() ? "all checks passed" : "CHECK FAILURES PRESENT");
}

int finish(const qfk::RunReport& report, const std::string& out_dir) {
  qfk::write_report_files(report, out_dir);
  print_report(report);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vacuum-adapted quantum stochastic flow laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, ladder_text;
  std::uint64_t seed_override = 0;
  bool seed_given = false;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a preset's check suite");
  run_cmd->add_option("--config", config_path, "key=value config file")->required();
  run_cmd->add_option("--seed", seed_override, "seed override")->each([&](const std::string&) {
    seed_given = true;
  });
  run_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* conv_cmd = app.add_subcommand("convergence", "error-vs-h ladder study");
  conv_cmd->add_option("--config", config_path, "key=value config file")->required();
  conv_cmd->add_option("--ladder", ladder_text, "comma-separated halving step sizes")
      ->required();
  conv_cmd->add_option("--seed", seed_override, "seed override")->each([&](const std::string&) {
    seed_given = true;
  });
  conv_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* list_cmd = app.add_subcommand("list-presets", "list experiment presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (qfk::Preset p : qfk::all_presets()) std::printf("%s\n", qfk::preset_name(p).c_str());
      return 0;
    }

    qfk::ExperimentConfig config = qfk::parse_config_file(config_path);
    if (seed_given) config.seed = seed_override;

    if (run_cmd->parsed()) {
      const qfk::RunReport report = qfk::run_experiment(config);
      return finish(report, resolve_out_dir(out_dir, config.out_dir));
    }

    std::vector<double> ladder;
    std::stringstream ss(ladder_text);
    std::string item;
    while (std::getline(ss, item, ',')) ladder.push_back(std::stod(item));
    const qfk::RunReport report = qfk::run_convergence(config, ladder);
    return finish(report, resolve_out_dir(out_dir, config.out_dir));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
