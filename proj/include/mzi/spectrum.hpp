#pragma once

#include <map>
#include <string>
#include <vector>

#include "mzi/beam_sim.hpp"

namespace mzi {

/// @brief One-sided power spectrum with 1/duration-wide bins covering
/// 0 .. rate/2. Normalized so that the bin powers of a raw spectrum sum to the
/// mean square of the time series (a full-scale unit sine on an exact bin
/// carries power 1/2).
struct PowerSpectrum {
  double bin_width_hz = 1.0;
  Eigen::ArrayXd powers;
  int window = 1;  ///< smoothing window that produced this spectrum; 1 = raw

  bool smoothed() const { return window > 1; }
  double frequency_hz(Eigen::Index bin) const { return bin_width_hz * static_cast<double>(bin); }
  /// @brief Nearest bin; throws std::invalid_argument outside [0, rate/2].
  Eigen::Index bin_index(double freq_hz) const;
};

PowerSpectrum power_spectrum(const DetectorTimeSeries& series);

/// @brief Centered moving average over `window` bins (for even windows the
/// extra bin sits on the high side), shrinking at the edges. An isolated
/// single-bin peak of height h turns into a plateau of height h/window.
PowerSpectrum smooth(const PowerSpectrum& spectrum, int window = 10);

/// @brief Largest power within +-half_width_bins of the bin nearest freq_hz.
double peak_power(const PowerSpectrum& spectrum, double freq_hz, int half_width_bins = 5);

struct PeakComparison {
  std::string mirror;
  double frequency_hz = 0.0;
  double simulated_power = 0.0;
  double predicted_power = 0.0;
  double ratio = 0.0;  ///< simulated / predicted; NaN when the prediction is zero
  bool flagged = false;
};

/// @brief Measured peak power at each mirror frequency against the expected
/// value from a predicted oscillation amplitude (power = amplitude^2 / 2,
/// divided by the smoothing window when the spectrum is smoothed). Rows whose
/// prediction is zero -- below 1e-12 of the largest predicted power -- are
/// never flagged; others are flagged when |ratio - 1| > relative_tolerance.
std::vector<PeakComparison> compare_to_prediction(
    const PowerSpectrum& spectrum, const std::map<std::string, double>& predicted_amplitudes,
    const VibrationMap& vibrations, double relative_tolerance = 0.05);

}  // namespace mzi
