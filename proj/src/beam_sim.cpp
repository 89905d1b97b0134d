#include "mzi/beam_sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mzi {

namespace {

constexpr double um_per_mm = 1e3;

Eigen::VectorXcd amplitudes_of(std::span<const OpticalPath> paths) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(paths.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = paths[static_cast<size_t>(i)].amplitude;
  return a;
}

Eigen::VectorXd displacements_of(std::span<const OpticalPath> paths,
                                 const VibrationMap& vibrations, double t_s) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(paths.size()));
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d[i] = path_displacement_um(paths[static_cast<size_t>(i)], vibrations, t_s);
  return d;
}

void check_sizes(const Eigen::VectorXcd& amplitudes, const Eigen::VectorXd& displacements) {
  if (amplitudes.size() != displacements.size())
    throw std::invalid_argument("amplitude and displacement vectors differ in length");
}

}  // namespace

Eigen::Index SamplingSpec::sample_count() const {
  const double n = rate_hz * duration_s;
  const double rounded = std::round(n);
  if (!(rounded > 0.0) || std::abs(n - rounded) > 1e-6)
    throw std::invalid_argument("sampling: rate * duration must be a positive whole number");
  return static_cast<Eigen::Index>(rounded);
}

double mirror_displacement_um(const VibrationSpec& vibration, double t_s) {
  return vibration.displacement_um *
         std::sin(2.0 * std::numbers::pi * vibration.frequency_hz * t_s + vibration.phase_rad);
}

double path_displacement_um(const OpticalPath& path, const VibrationMap& vibrations, double t_s) {
  double d = 0.0;
  for (const auto& m : path.mirrors) {
    const auto it = vibrations.find(m);
    if (it != vibrations.end()) d += mirror_displacement_um(it->second, t_s);
  }
  return d;
}

double quadcell_signal(const Eigen::VectorXcd& amplitudes,
                       const Eigen::VectorXd& displacements_um,
                       const GaussianBeam& beam) {
  check_sizes(amplitudes, displacements_um);
  const double w = beam.waist_mm;
  const Eigen::VectorXd d = displacements_um / um_per_mm;

  double sum = 0.0;
  for (Eigen::Index p = 0; p < amplitudes.size(); ++p) {
    sum += std::norm(amplitudes[p]) * std::erf(d[p] / w);
    for (Eigen::Index q = p + 1; q < amplitudes.size(); ++q) {
      const double cross = 2.0 * (amplitudes[p] * std::conj(amplitudes[q])).real();
      const double sep = d[p] - d[q];
      const double mid = 0.5 * (d[p] + d[q]);
      sum += cross * std::exp(-sep * sep / (4.0 * w * w)) * std::erf(mid / w);
    }
  }
  return beam.amplitude * beam.amplitude * std::numbers::pi * w * w * sum;
}

double total_power(const Eigen::VectorXcd& amplitudes,
                   const Eigen::VectorXd& displacements_um,
                   const GaussianBeam& beam) {
  check_sizes(amplitudes, displacements_um);
  const double w = beam.waist_mm;
  const Eigen::VectorXd d = displacements_um / um_per_mm;

  double sum = 0.0;
  for (Eigen::Index p = 0; p < amplitudes.size(); ++p) {
    sum += std::norm(amplitudes[p]);
    for (Eigen::Index q = p + 1; q < amplitudes.size(); ++q) {
      const double cross = 2.0 * (amplitudes[p] * std::conj(amplitudes[q])).real();
      const double sep = d[p] - d[q];
      sum += cross * std::exp(-sep * sep / (4.0 * w * w));
    }
  }
  return beam.amplitude * beam.amplitude * std::numbers::pi * w * w * sum;
}

double first_order_gain(const GaussianBeam& beam) {
  return 2.0 * beam.amplitude * beam.amplitude * std::sqrt(std::numbers::pi) * beam.waist_mm /
         um_per_mm;
}

double first_order_signal(const Eigen::VectorXcd& amplitudes,
                          const Eigen::VectorXd& displacements_um,
                          const GaussianBeam& beam) {
  check_sizes(amplitudes, displacements_um);
  const std::complex<double> overlap = amplitudes.sum();
  std::complex<double> weighted{0.0, 0.0};
  for (Eigen::Index p = 0; p < amplitudes.size(); ++p)
    weighted += amplitudes[p] * displacements_um[p];
  return first_order_gain(beam) * (std::conj(overlap) * weighted).real();
}

double quadcell_signal(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                       const GaussianBeam& beam, double t_s) {
  return quadcell_signal(amplitudes_of(paths), displacements_of(paths, vibrations, t_s), beam);
}

double total_power(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                   const GaussianBeam& beam, double t_s) {
  return total_power(amplitudes_of(paths), displacements_of(paths, vibrations, t_s), beam);
}

double first_order_signal(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                          const GaussianBeam& beam, double t_s) {
  return first_order_signal(amplitudes_of(paths), displacements_of(paths, vibrations, t_s), beam);
}

DetectorTimeSeries simulate(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                            const GaussianBeam& beam, const SamplingSpec& sampling) {
  DetectorTimeSeries series{sampling, Eigen::ArrayXd::Zero(sampling.sample_count())};
  const Eigen::VectorXcd a = amplitudes_of(paths);
  Eigen::VectorXd d(a.size());
  for (Eigen::Index n = 0; n < series.samples.size(); ++n) {
    const double t = sampling.time_s(n);
    for (Eigen::Index i = 0; i < d.size(); ++i)
      d[i] = path_displacement_um(paths[static_cast<size_t>(i)], vibrations, t);
    series.samples[n] = quadcell_signal(a, d, beam);
  }
  return series;
}

void add_noise(DetectorTimeSeries& series, std::uint64_t seed, double relative_sigma) {
  if (series.samples.size() == 0) return;
  const double scale = series.samples.abs().maxCoeff();
  if (scale == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, relative_sigma * scale);
  for (Eigen::Index n = 0; n < series.samples.size(); ++n) series.samples[n] += gauss(rng);
}

}  // namespace mzi
