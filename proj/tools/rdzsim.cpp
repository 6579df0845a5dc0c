#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rdz/harness.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const std::string& policies_csv,
            const std::string& out_dir, std::uint64_t seed, int trials,
            int steps) {
  rdz::Scenario scenario = rdz::Scenario::load(scenario_path);
  if (seed != 0) scenario.seed = seed;
  if (trials > 0) scenario.trials = trials;
  if (steps > 0) scenario.steps_per_trial = steps;

  std::vector<rdz::Policy> policies = scenario.policies;
  if (!policies_csv.empty()) {
    policies.clear();
    std::stringstream ss(policies_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      policies.push_back(rdz::Policy::parse(item));
  }
  if (policies.empty())
    throw std::invalid_argument("no policies given (flag or scenario file)");

  const rdz::ExperimentReport report =
      rdz::run_and_write(scenario, policies, out_dir);

  std::ifstream rep(out_dir + "/report.txt");
  std::cout << rep.rdbuf();
  std::cout << "\nwrote " << out_dir << "/steps.csv, summary.csv, report.txt ("
            << report.trials.size() << " trials)\n";
  return 0;
}

int cmd_plan_trace(const std::string& scenario_path,
                   const std::string& snapshot_path) {
  const rdz::Scenario scenario = rdz::Scenario::load(scenario_path);
  auto grid = scenario.build_grid();
  rdz::RfModel rf = scenario.make_rf_model(grid);
  const rdz::RdzDomain domain = rdz::build_domain(rf);

  rdz::RdzState state = scenario.initial_state(grid);
  if (!snapshot_path.empty()) {
    std::ifstream in(snapshot_path);
    if (!in) throw std::runtime_error("cannot open snapshot: " + snapshot_path);
    std::stringstream buf;
    buf << in.rdbuf();
    state = rdz::state_from_json(buf.str(), grid);
  }

  const auto result =
      rdz::htn::find_plan(state, rdz::maintenance_goal(), domain);
  if (!result.found()) {
    std::cout << "no plan ("
              << (result.status == rdz::htn::PlanStatus::depth_limit
                      ? "depth limit exceeded"
                      : "no valid decomposition")
              << ")\n";
    return 1;
  }
  std::cout << rdz::htn::render_trace<rdz::DomainArg>(result.plan,
                                                      rdz::format_arg);
  std::cout << "\nplan:\n";
  for (const auto& step : result.plan.actions)
    std::cout << "  " << rdz::to_string(rdz::action_from_task(step)) << "\n";
  return 0;
}

int cmd_map(const std::string& scenario_path, const std::string& out_path,
            double freq) {
  const rdz::Scenario scenario = rdz::Scenario::load(scenario_path);
  auto grid = scenario.build_grid();
  const rdz::RdzState state = scenario.initial_state(grid);

  std::vector<rdz::Transmitter> sources;
  for (const auto& tx : state.fleet)
    if (rdz::is_test_role(tx.role)) sources.push_back(tx);

  const auto map = rdz::compute_map(
      sources, freq > 0 ? std::optional<double>(freq) : std::nullopt,
      scenario.config.probe_height_m, scenario.config.probe_gain_dbi,
      scenario.model, *grid);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write map: " + out_path);
  rdz::write_map_csv(out, map);
  std::cout << "wrote " << out_path << " (" << grid->width() << "x"
            << grid->height() << " dBm raster)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radio dynamic zone simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", policies_csv, snapshot_path,
              map_out = "map.csv";
  std::uint64_t seed = 0;
  int trials = 0, steps = 0;
  double freq = 0.0;

  auto* run = app.add_subcommand("run", "run an experiment");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--policies", policies_csv,
                  "comma list: htn,htn-0.1,random,naive (default: scenario)");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "master seed override");
  run->add_option("--trials", trials, "trial count override");
  run->add_option("--steps", steps, "steps per trial override");

  auto* trace = app.add_subcommand("plan-trace", "render one planning step");
  trace->add_option("--scenario", scenario_path, "scenario file")->required();
  trace->add_option("--step-state", snapshot_path, "state snapshot JSON");

  auto* map = app.add_subcommand("map", "dump the aggregate RF map as CSV");
  map->add_option("--scenario", scenario_path, "scenario file")->required();
  map->add_option("--out", map_out, "output CSV path");
  map->add_option("--freq", freq, "restrict to one frequency (MHz)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(scenario_path, policies_csv, out_dir, seed, trials, steps);
    if (trace->parsed()) return cmd_plan_trace(scenario_path, snapshot_path);
    if (map->parsed()) return cmd_map(scenario_path, map_out, freq);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
