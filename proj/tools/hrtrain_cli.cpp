// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/error.hpp"
#include "hrtrain/io.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

using hrtrain::io::CommandOptions;
using hrtrain::io::Json;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::string mode = "compressed";
  long long mc = 0;
  long long kthin = 0;
  double rel_tol = 0.0;
  unsigned long long seed = 0;
  unsigned long long mem_budget = 0;
  double scenario = 0.0;
  std::vector<std::string> rules;
  std::vector<long long> mc_sweep;
  std::vector<std::string> manifests;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "working directory for artifacts");
  sub->add_option("--seed", f.seed, "seed recorded in manifests");
  sub->add_option("--mem-budget", f.mem_budget, "byte limit for dense solution-manifold assembly");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured-compression training of empirical quadrature and cubature rules"};
  app.require_subcommand(1);
  Flags f;

  using Command = std::function<Json(const CommandOptions&)>;
  std::vector<std::pair<CLI::App*, Command>> commands;

  auto* gen = app.add_subcommand("gen-snapshots", "run the FOM for the training scenarios and build the POD basis");
  add_common(gen, f);
  commands.emplace_back(gen, hrtrain::io::cmd_gen_snapshots);

  auto* assemble = app.add_subcommand("assemble", "build the factorized training dataset");
  add_common(assemble, f);
  commands.emplace_back(assemble, hrtrain::io::cmd_assemble);

  auto* compress = app.add_subcommand("compress", "structured compression of the dataset");
  add_common(compress, f);
  auto* kthin = compress->add_option("--kthin", f.kthin, "compression rank")->check(CLI::PositiveNumber);
  compress->add_option("--rel-tol", f.rel_tol, "relative singular value cutoff (default 1e-6)")
      ->excludes(kthin)
      ->check(CLI::PositiveNumber);
  commands.emplace_back(compress, hrtrain::io::cmd_compress);

  auto* train = app.add_subcommand("train", "OMP training on the standard or compressed problem");
  add_common(train, f);
  train->add_option("--mode", f.mode, "standard or compressed")
      ->check(CLI::IsMember({"standard", "compressed"}));
  train->add_option("--mc", f.mc, "number of rule terms")->required()->check(CLI::PositiveNumber);
  commands.emplace_back(train, hrtrain::io::cmd_train);

  auto* bound = app.add_subcommand("bound", "evaluate error bounds for trained rules");
  add_common(bound, f);
  bound->add_option("--rule", f.rules, "rule JSON file")->required()->check(CLI::ExistingFile);
  commands.emplace_back(bound, hrtrain::io::cmd_bound);

  auto* crom = app.add_subcommand("crom-eval", "space-time errors of ROM and CROM against the FOM");
  add_common(crom, f);
  crom->add_option("--rule", f.rules, "rule JSON file")->check(CLI::ExistingFile);
  crom->add_option("--mc", f.mc_sweep, "truncate each rule to these sizes")->delimiter(',');
  crom->add_option("--scenario", f.scenario, "parameter C (default: config test scenario)");
  commands.emplace_back(crom, hrtrain::io::cmd_crom_eval);

  auto* report = app.add_subcommand("report", "aggregate train reports into report.csv");
  add_common(report, f);
  report->add_option("manifests", f.manifests, "train_*.json files")->required()->check(CLI::ExistingFile);
  commands.emplace_back(report, hrtrain::io::cmd_report);

  CLI11_PARSE(app, argc, argv);

  CommandOptions o;
  o.out = f.out;
  if (!f.config.empty()) o.config = f.config;
  o.mode = f.mode;
  o.mc = f.mc;
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) o.seed = f.seed;
    if (sub->count("--mem-budget")) o.mem_budget = f.mem_budget;
    if (sub->get_name() == "compress") {
      if (sub->count("--kthin")) o.kthin = f.kthin;
      if (sub->count("--rel-tol")) o.rel_tol = f.rel_tol;
    }
    if (sub->get_name() == "crom-eval" && sub->count("--scenario")) o.scenario = f.scenario;
  }
  for (const auto& r : f.rules) o.rules.emplace_back(r);
  for (auto mc : f.mc_sweep) o.mc_sweep.push_back(mc);
  for (const auto& m : f.manifests) o.manifests.emplace_back(m);

  try {
    for (const auto& [sub, run] : commands)
      if (sub->parsed()) {
        const Json result = run(o);
        if (result.contains("rows"))
          std::cout << result["rows"].dump(2) << "\n";
        else
          std::cout << result.dump(2) << "\n";
      }
  } catch (const hrtrain::Error& e) {
    std::cerr << "hrtrain: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hrtrain: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
