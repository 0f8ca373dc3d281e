// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "delsarte/scenarios.hpp"

#include <cstdlib>
#include <future>
#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

namespace {

using delsarte::ScenarioOptions;
using delsarte::ScenarioResult;
namespace fs = std::filesystem;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("delsarte");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("DELSARTE_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

ScenarioResult run_one(const std::string& name, const fs::path& config, ScenarioOptions opt) {
  const auto cfg = delsarte::io::read_json(config);
  opt.base = config.parent_path();
  spdlog::info("running {} with {}", name, config.string());
  ScenarioResult r = delsarte::run_scenario(name, cfg, opt);
  for (const auto& row : r.rows)
    spdlog::debug("{} {} residual={} threshold={} {}", r.name, row.check, delsarte::format_number(row.residual),
                  delsarte::format_number(row.threshold), row.pass ? "pass" : "FAIL");
  if (r.details.contains("error")) spdlog::error("{}: {}", r.name, r.details["error"].get<std::string>());
  return r;
}

void write_outputs(const ScenarioResult& r, const fs::path& out, bool svg) {
  fs::create_directories(out);
  std::ofstream(out / (r.name + ".csv")) << delsarte::to_csv(r.rows);
  delsarte::io::json j{{"scenario", r.name}, {"rows", delsarte::to_json(r.rows)}, {"details", r.details}};
  std::ofstream(out / (r.name + ".json")) << j.dump(2) << "\n";
  if (svg)
    for (const auto& [stem, plot] : r.plots) std::ofstream(out / (r.name + "-" + stem + ".svg")) << delsarte::to_svg(plot);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"delsarte: transmutation and generalized de Rham complex experiments"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list the available scenarios");

  std::string scenario, config, out;
  bool svg = false, timing = false, parallel = false;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "run a scenario, or 'all' with --config naming a directory of <scenario>.json");
  run->add_option("scenario", scenario, "scenario name or 'all'")->required();
  run->add_option("--config", config, "JSON config file (directory for 'all')")->required();
  run->add_option("--out", out, "directory for CSV, JSON and SVG output");
  run->add_flag("--svg", svg, "also write SVG profile plots (needs --out)");
  auto* seed_opt = run->add_option("--seed", seed, "random seed overriding the config");
  run->add_flag("--timing", timing, "record wall time per row in the ms column");
  run->add_flag("--parallel", parallel, "run scenarios concurrently with 'all'");

  CLI11_PARSE(app, argc, argv);

  if (*list) {
    for (const auto& s : delsarte::scenario_registry()) std::cout << s.name << "\t" << s.description << "\n";
    return 0;
  }

  ScenarioOptions opt;
  opt.timing = timing;
  if (*seed_opt) {
    opt.seed = seed;
    opt.seed_override = true;
  }

  try {
    std::vector<std::pair<std::string, fs::path>> jobs;
    if (scenario == "all") {
      if (!fs::is_directory(config)) throw delsarte::ParseError("'run all' needs --config to name a directory");
      for (const auto& s : delsarte::scenario_registry()) {
        const fs::path p = fs::path(config) / (std::string(s.name) + ".json");
        if (!fs::exists(p)) throw delsarte::ParseError("missing config " + p.string());
        jobs.emplace_back(s.name, p);
      }
    } else {
      delsarte::find_scenario(scenario);
      jobs.emplace_back(scenario, config);
    }

    std::vector<ScenarioResult> results;
    if (parallel && jobs.size() > 1) {
      std::vector<std::future<ScenarioResult>> fut;
      for (const auto& [name, path] : jobs) fut.push_back(std::async(std::launch::async, run_one, name, path, opt));
      for (auto& f : fut) results.push_back(f.get());
    } else {
      for (const auto& [name, path] : jobs) results.push_back(run_one(name, path, opt));
    }

    std::vector<delsarte::ReportRow> all;
    bool ok = true;
    for (const auto& r : results) {
      if (!out.empty()) write_outputs(r, out, svg);
      all.insert(all.end(), r.rows.begin(), r.rows.end());
      ok = ok && r.passed();
    }
    std::cout << delsarte::to_csv(all);
    if (svg && out.empty()) spdlog::warn("--svg ignored without --out");
    return ok ? 0 : 1;
  } catch (const delsarte::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
