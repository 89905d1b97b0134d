#include "mzi/spectrum.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace mzi {

Eigen::Index PowerSpectrum::bin_index(double freq_hz) const {
  const double idx = freq_hz / bin_width_hz;
  const auto bin = static_cast<Eigen::Index>(std::llround(idx));
  if (freq_hz < 0.0 || bin < 0 || bin >= powers.size())
    throw std::invalid_argument("frequency " + std::to_string(freq_hz) +
                                " Hz lies outside the spectrum");
  return bin;
}

PowerSpectrum power_spectrum(const DetectorTimeSeries& series) {
  const Eigen::Index n = series.samples.size();
  if (n == 0) throw std::invalid_argument("power_spectrum: empty time series");

  std::vector<double> samples(series.samples.data(), series.samples.data() + n);
  std::vector<std::complex<double>> bins;
  Eigen::FFT<double> fft;
  fft.fwd(bins, samples);

  // One-sided: double every bin that has a conjugate twin, leave DC (and the
  // Nyquist bin when n is even) alone; dividing |X_k|^2 by n^2 then makes the
  // powers sum to the mean square of the input.
  const Eigen::Index half = n / 2;
  PowerSpectrum spec;
  spec.bin_width_hz = 1.0 / series.sampling.duration_s;
  spec.powers = Eigen::ArrayXd::Zero(half + 1);
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (Eigen::Index k = 0; k <= half; ++k) {
    const bool has_twin = k != 0 && !(n % 2 == 0 && k == half);
    spec.powers[k] = (has_twin ? 2.0 : 1.0) * std::norm(bins[static_cast<size_t>(k)]) * norm;
  }
  return spec;
}

PowerSpectrum smooth(const PowerSpectrum& spectrum, int window) {
  if (window < 1) throw std::invalid_argument("smooth: window must be >= 1");
  PowerSpectrum out = spectrum;
  out.window = window;
  if (window == 1) return out;

  const Eigen::Index n = spectrum.powers.size();
  const Eigen::Index back = (window - 1) / 2;
  const Eigen::Index ahead = window / 2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - back);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + ahead);
    out.powers[i] = spectrum.powers.segment(lo, hi - lo + 1).mean();
  }
  return out;
}

double peak_power(const PowerSpectrum& spectrum, double freq_hz, int half_width_bins) {
  if (half_width_bins < 0) throw std::invalid_argument("peak_power: negative half width");
  const Eigen::Index center = spectrum.bin_index(freq_hz);
  const Eigen::Index lo = std::max<Eigen::Index>(0, center - half_width_bins);
  const Eigen::Index hi = std::min<Eigen::Index>(spectrum.powers.size() - 1, center + half_width_bins);
  return spectrum.powers.segment(lo, hi - lo + 1).maxCoeff();
}

std::vector<PeakComparison> compare_to_prediction(
    const PowerSpectrum& spectrum, const std::map<std::string, double>& predicted_amplitudes,
    const VibrationMap& vibrations, double relative_tolerance) {
  double largest = 0.0;
  for (const auto& [id, amp] : predicted_amplitudes)
    largest = std::max(largest, 0.5 * amp * amp);

  std::vector<PeakComparison> rows;
  for (const auto& [id, amp] : predicted_amplitudes) {
    const auto vib = vibrations.find(id);
    if (vib == vibrations.end())
      throw std::invalid_argument("compare_to_prediction: no vibration entry for mirror \"" +
                                  id + "\"");
    PeakComparison row;
    row.mirror = id;
    row.frequency_hz = vib->second.frequency_hz;
    row.simulated_power = peak_power(spectrum, row.frequency_hz);
    row.predicted_power = 0.5 * amp * amp / static_cast<double>(spectrum.window);
    // Rounding-level predictions are zero in every sense that matters here.
    const bool prediction_is_zero = 0.5 * amp * amp <= 1e-12 * largest;
    if (prediction_is_zero) {
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.flagged = false;
    } else {
      row.ratio = row.simulated_power / row.predicted_power;
      row.flagged = std::abs(row.ratio - 1.0) > relative_tolerance;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mzi
