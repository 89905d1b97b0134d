#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mzi/scenario.hpp"
#include "mzi/scenario_io.hpp"

namespace {

// A scenario argument is a built-in name first, a file path second.
mzi::Scenario resolve_scenario(const std::string& ref) {
  const auto& builtins = mzi::builtin_scenarios();
  if (auto it = builtins.find(ref); it != builtins.end()) return it->second;
  return mzi::load_scenario_file(ref);
}

void print_warnings(const mzi::Scenario& scenario) {
  for (const auto& w : scenario.warnings()) std::cerr << "warning: " << w << "\n";
}

void print_scenario_error(const std::string& path, const mzi::ScenarioError& e) {
  const char* kind = dynamic_cast<const mzi::ScenarioSyntaxError*>(&e) ? "syntax" : "semantic";
  std::cerr << path;
  if (e.line() > 0) {
    std::cerr << ":" << e.line();
    if (e.column() > 0) std::cerr << ":" << e.column();
  }
  std::cerr << ": " << kind << " error: " << e.what() << "\n";
}

int run_list() {
  for (const auto& [name, scenario] : mzi::builtin_scenarios())
    std::printf("%-10s %s\n", name.c_str(), scenario.description.c_str());
  return 0;
}

int run_weak_values(const std::string& ref, const std::string& out_path) {
  mzi::Scenario scenario = resolve_scenario(ref);
  mzi::WeakValueReport report = scenario.network ? mzi::weak_value_report(*scenario.network)
                                                 : mzi::weak_value_report(scenario.paths);
  std::string note;
  if (!report.defined)
    note = "orthogonal postselection: the summed route amplitude vanishes, weak values undefined";
  const std::string text = mzi::to_report_text(report, note);
  if (out_path.empty())
    std::cout << text;
  else
    mzi::write_text_file(out_path, text);
  return 0;
}

int run_simulate(const std::string& ref, const mzi::RunOptions& options) {
  mzi::Scenario scenario = resolve_scenario(ref);
  print_warnings(scenario);
  mzi::RunArtifacts art = mzi::run_scenario(scenario, options);

  std::printf("scenario %s: %s\n", scenario.name.empty() ? ref.c_str() : scenario.name.c_str(),
              scenario.description.c_str());
  if (!art.note.empty()) std::printf("note: %s\n", art.note.c_str());
  std::printf("%-8s %9s %16s %16s %8s\n", "mirror", "freq_hz", "predicted_pow", "simulated_pow",
              "ratio");
  for (const auto& row : art.peaks) {
    char predicted[32] = "-", ratio[32] = "-";
    if (!std::isnan(row.predicted_power))
      std::snprintf(predicted, sizeof predicted, "%.6e", row.predicted_power);
    if (!std::isnan(row.ratio)) std::snprintf(ratio, sizeof ratio, "%.4f", row.ratio);
    std::printf("%-8s %9g %16s %16.6e %8s%s\n", row.mirror.c_str(), row.frequency_hz, predicted,
                row.simulated_power, ratio, row.flagged ? "  <- off prediction" : "");
  }

  for (const std::string& path :
       {options.series_path, options.spectrum_path, options.weak_report_path, options.plot_path})
    if (!path.empty()) std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_validate(const std::string& path) {
  try {
    mzi::Scenario scenario = mzi::load_scenario_file(path);
    print_warnings(scenario);
    std::printf("ok: %zu routes, %zu mirrors\n", scenario.paths.size(), scenario.mirrors.size());
    return 0;
  } catch (const mzi::ScenarioError& e) {
    print_scenario_error(path, e);
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested-interferometer simulator: weak values, spectra, scenario files"};
  app.require_subcommand(1);

  app.add_subcommand("list-scenarios", "list the built-in scenarios");

  std::string weak_ref, weak_out;
  CLI::App* weak = app.add_subcommand("weak-values", "two-state weak values for a scenario");
  weak->add_option("scenario", weak_ref, "built-in name or scenario file")->required();
  weak->add_option("--out", weak_out, "write the report to this file instead of stdout");

  std::string sim_ref;
  mzi::RunOptions options;
  std::uint64_t seed = 0;
  CLI::App* sim = app.add_subcommand("simulate", "simulate a scenario and report spectrum peaks");
  sim->add_option("scenario", sim_ref, "built-in name or scenario file")->required();
  sim->add_option("--out-series", options.series_path, "write the detector time series (CSV)");
  sim->add_option("--out-spectrum", options.spectrum_path, "write the smoothed spectrum (CSV)");
  sim->add_option("--out-weak", options.weak_report_path, "write the weak-value report");
  sim->add_option("--plot", options.plot_path, "write an SVG plot of the spectrum");
  sim->add_option("--window", options.window, "spectrum smoothing window (bins)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI::Option* seed_opt =
      sim->add_option("--noise-seed", seed, "add seeded detector noise (1% of peak signal)");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a scenario file, report diagnostics");
  validate->add_option("file", validate_path, "scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-scenarios")) return run_list();
    if (app.got_subcommand(weak)) return run_weak_values(weak_ref, weak_out);
    if (app.got_subcommand(sim)) {
      if (*seed_opt) options.noise_seed = seed;
      return run_simulate(sim_ref, options);
    }
    if (app.got_subcommand(validate)) return run_validate(validate_path);
  } catch (const mzi::ScenarioError& e) {
    print_scenario_error(app.got_subcommand(weak) ? weak_ref : sim_ref, e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
