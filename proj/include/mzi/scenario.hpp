#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mzi/beam_sim.hpp"
#include "mzi/optical_network.hpp"
#include "mzi/spectrum.hpp"
#include "mzi/weak_values.hpp"

namespace mzi {

/// @brief Everything a scenario knows about one mirror. The static phase is
/// informational for table-defined scenarios (route amplitudes are taken as
/// given); for network-built ones it mirrors the element that produced them.
struct MirrorSettings {
  VibrationSpec vibration{};
  double static_phase_rad = 0.0;
};

/// @brief A complete simulation setup: route amplitudes, beam, mirror motion
/// and sampling. `paths` holds the amplitudes before input attenuation; the
/// light that actually reaches the detector is scaled by sqrt(attenuation).
struct Scenario {
  std::string name;
  std::string description;
  GaussianBeam beam{};
  double attenuation = 1.0;  ///< power fraction admitted at the input, in (0, 1]
  SamplingSpec sampling{};
  std::map<std::string, MirrorSettings> mirrors;
  std::vector<OpticalPath> paths;
  std::optional<OpticalNetwork> network;  ///< present for the built-in setups

  /// @brief Routes with attenuation folded into the amplitudes.
  std::vector<OpticalPath> effective_paths() const;
  VibrationMap vibrations() const;
  /// @brief Non-fatal advisories, e.g. displacements too large for the
  /// small-deflection regime (delta/waist above 1e-2).
  std::vector<std::string> warnings() const;
};

/// @brief The six canned configurations, keyed by name: fig1a, fig1b (plain
/// two-arm interferometer, aligned / with the recombiner fed from one arm
/// only), fig2a, fig2b (nested interferometer, inner loop bright / dark toward
/// the output), fig2c (reference arm blocked) and fblocked (inner-loop output
/// blocked).
const std::map<std::string, Scenario>& builtin_scenarios();

struct RunOptions {
  int window = 10;                          ///< smoothing window for the spectrum
  std::optional<std::uint64_t> noise_seed;  ///< adds seeded detector noise when set
  std::string series_path;                  ///< write the time series CSV here ("" = skip)
  std::string spectrum_path;                ///< write the spectrum CSV here
  std::string weak_report_path;             ///< write the weak-value report here
  std::string plot_path;                    ///< write an SVG plot of the spectrum here
};

struct RunArtifacts {
  DetectorTimeSeries series;
  PowerSpectrum spectrum;  ///< smoothed with RunOptions::window
  WeakValueReport weak_report;
  std::map<std::string, double> predicted_amplitudes;
  std::vector<PeakComparison> peaks;
  std::string note;  ///< set when weak values / predictions are undefined
};

/// @brief Full pipeline: simulate, spectrum, smooth, peak comparison, weak
/// values; writes whichever output files the options request. An orthogonal
/// postselection is reported through RunArtifacts::note, not an exception.
RunArtifacts run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace mzi
