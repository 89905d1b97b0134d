#include "mzi/scenario.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mzi/scenario_io.hpp"
#include "mzi/svg_plot.hpp"

namespace mzi {

std::vector<OpticalPath> Scenario::effective_paths() const {
  std::vector<OpticalPath> scaled = paths;
  const double factor = std::sqrt(attenuation);
  for (auto& p : scaled) p.amplitude *= factor;
  return scaled;
}

VibrationMap Scenario::vibrations() const {
  VibrationMap map;
  for (const auto& [id, settings] : mirrors) map[id] = settings.vibration;
  return map;
}

std::vector<std::string> Scenario::warnings() const {
  std::vector<std::string> notes;
  for (const auto& [id, settings] : mirrors) {
    const double ratio = settings.vibration.displacement_um / 1e3 / beam.waist_mm;
    if (ratio > 1e-2)
      notes.push_back("mirror \"" + id + "\": displacement/waist = " + format_double(ratio) +
                      " is outside the small-deflection regime (expected <= 1e-2)");
  }
  return notes;
}

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

// Shared experimental parameters: 1.2 mm beam waist, 0.6 um mirror throw,
// one vibration frequency per mirror, 2500 Hz sampling for one second.
VibrationSpec vib_for(const std::string& mirror) {
  static const std::map<std::string, double> freqs{
      {"A", 282.0}, {"B", 296.0}, {"C", 307.0}, {"E", 318.0}, {"F", 332.0}};
  return {freqs.at(mirror), 0.6, 0.0};
}

// Plain two-arm interferometer. Mirror B carries the alignment phase: pi makes
// both routes arrive in phase at the detector output.
OpticalNetwork simple_interferometer(double phase_b) {
  OpticalNetwork net;
  net.add_source("src");
  net.add_beam_splitter("split", 0.5);
  net.add_mirror("A", 0.0, vib_for("A"));
  net.add_mirror("B", phase_b, vib_for("B"));
  net.add_beam_splitter("merge", 0.5);
  net.add_detector("det");
  net.connect("src.out", "split.a");
  net.connect("split.t", "A.in");
  net.connect("split.r", "B.in");
  net.connect("A.out", "merge.a");
  net.connect("B.out", "merge.b");
  net.connect("merge.t", "det.in");
  return net;
}

// The same geometry with the input sent straight to mirror B; mirror A still
// faces the recombiner but its feed is dark (a block stands in for the
// removed input beam).
OpticalNetwork one_armed_interferometer() {
  OpticalNetwork net;
  net.add_source("src");
  net.add_mirror("A", 0.0, vib_for("A"));
  net.add_mirror("B", 0.0, vib_for("B"));
  net.add_block("dark_feed");
  net.add_beam_splitter("merge", 0.5);
  net.add_detector("det");
  net.connect("src.out", "B.in");
  net.connect("dark_feed.out", "A.in");
  net.connect("A.out", "merge.a");
  net.connect("B.out", "merge.b");
  net.connect("merge.t", "det.in");
  return net;
}

// Nested interferometer: an inner two-arm loop (E -> A/B -> F) sits in one arm
// of an outer loop whose other arm holds mirror C. A third of the input power
// takes the C arm. The quarter-wave static phases on E and F make every route
// amplitude real: (C, EAF, EBF) = (1/3, 1/3, -1/3) for phase_b = 0, where the
// inner loop interferes destructively toward F, and (1/3, 1/3, 1/3) for
// phase_b = pi, where it is bright toward F.
OpticalNetwork nested_interferometer(double phase_b) {
  OpticalNetwork net;
  net.add_source("src");
  net.add_beam_splitter("outer_split", 2.0 / 3.0);
  net.add_mirror("C", 0.0, vib_for("C"));
  net.add_mirror("E", -half_pi, vib_for("E"));
  net.add_beam_splitter("inner_split", 0.5);
  net.add_mirror("A", 0.0, vib_for("A"));
  net.add_mirror("B", phase_b, vib_for("B"));
  net.add_beam_splitter("inner_merge", 0.5);
  net.add_mirror("F", -half_pi, vib_for("F"));
  net.add_beam_splitter("outer_merge", 2.0 / 3.0);
  net.add_detector("det");
  net.connect("src.out", "outer_split.a");
  net.connect("outer_split.t", "C.in");
  net.connect("outer_split.r", "E.in");
  net.connect("E.out", "inner_split.a");
  net.connect("inner_split.t", "A.in");
  net.connect("inner_split.r", "B.in");
  net.connect("A.out", "inner_merge.a");
  net.connect("B.out", "inner_merge.b");
  net.connect("inner_merge.t", "F.in");
  net.connect("F.out", "outer_merge.b");
  net.connect("C.out", "outer_merge.a");
  net.connect("outer_merge.t", "det.in");
  return net;
}

Scenario from_network(std::string name, std::string description, OpticalNetwork net,
                      double attenuation = 1.0) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.attenuation = attenuation;
  for (const auto& e : net.elements())
    if (e.type == ElementType::mirror) s.mirrors[e.id] = {e.vibration, e.static_phase_rad};
  s.paths = enumerate_paths(net);
  s.network = std::move(net);
  return s;
}

std::map<std::string, Scenario> make_builtins() {
  std::map<std::string, Scenario> all;

  Scenario fig1a = from_network(
      "fig1a", "two-arm interferometer aligned for full transmission", simple_interferometer(std::numbers::pi));
  Scenario fig1b = from_network(
      "fig1b", "recombiner fed from arm B only (arm A dark)", one_armed_interferometer());
  Scenario fig2b = from_network(
      "fig2b", "nested interferometer, inner loop dark toward the output", nested_interferometer(0.0));
  Scenario fig2a = from_network(
      "fig2a", "nested interferometer, every route bright; input power cut to a third",
      nested_interferometer(std::numbers::pi), 1.0 / 3.0);
  Scenario fig2c = from_network(
      "fig2c", "inner routes only: reference arm C blocked (orthogonal postselection)",
      apply_block(nested_interferometer(0.0), "C.out"));
  Scenario fblocked = from_network(
      "fblocked", "reference arm only: inner-loop output F blocked",
      apply_block(nested_interferometer(0.0), "F.out"));

  for (auto* s : {&fig1a, &fig1b, &fig2a, &fig2b, &fig2c, &fblocked}) all[s->name] = std::move(*s);
  return all;
}

}  // namespace

const std::map<std::string, Scenario>& builtin_scenarios() {
  static const std::map<std::string, Scenario> scenarios = make_builtins();
  return scenarios;
}

RunArtifacts run_scenario(const Scenario& scenario, const RunOptions& options) {
  RunArtifacts out;
  const std::vector<OpticalPath> routes = scenario.effective_paths();
  const VibrationMap vibrations = scenario.vibrations();

  out.series = simulate(routes, vibrations, scenario.beam, scenario.sampling);
  if (options.noise_seed) add_noise(out.series, *options.noise_seed);
  out.spectrum = smooth(power_spectrum(out.series), options.window);

  // Weak values from the wiring when we have it (they agree with the route
  // table either way); magnitudes of the expected peaks always come from the
  // attenuated routes so they share units with the simulation.
  out.weak_report = scenario.network ? weak_value_report(*scenario.network)
                                     : weak_value_report(scenario.paths);
  if (out.weak_report.defined) {
    out.predicted_amplitudes = predict_peak_amplitudes(routes, vibrations, scenario.beam);
    out.peaks = compare_to_prediction(out.spectrum, out.predicted_amplitudes, vibrations);
  } else {
    out.note =
        "orthogonal postselection: the summed route amplitude vanishes, so weak values "
        "and peak predictions are undefined";
    for (const auto& [id, vib] : vibrations) {
      PeakComparison row;
      row.mirror = id;
      row.frequency_hz = vib.frequency_hz;
      row.simulated_power = peak_power(out.spectrum, row.frequency_hz);
      row.predicted_power = std::numeric_limits<double>::quiet_NaN();
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.flagged = false;
      out.peaks.push_back(row);
    }
  }

  if (!options.series_path.empty()) write_text_file(options.series_path, to_csv(out.series));
  if (!options.spectrum_path.empty()) write_text_file(options.spectrum_path, to_csv(out.spectrum));
  if (!options.weak_report_path.empty())
    write_text_file(options.weak_report_path, to_report_text(out.weak_report, out.note));
  if (!options.plot_path.empty()) {
    Eigen::ArrayXd freqs(out.spectrum.powers.size());
    for (Eigen::Index i = 0; i < freqs.size(); ++i) freqs[i] = out.spectrum.frequency_hz(i);
    write_text_file(options.plot_path,
                    line_plot_svg(freqs, out.spectrum.powers,
                                  scenario.name.empty() ? "power spectrum" : scenario.name,
                                  "frequency (Hz)", "power"));
  }
  return out;
}

}  // namespace mzi
