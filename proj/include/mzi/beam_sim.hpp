#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "mzi/optical_network.hpp"

namespace mzi {

/// @brief Transverse Gaussian beam, field profile A * exp(-(x^2+y^2)/(2*waist^2)).
struct GaussianBeam {
  double amplitude = 1.0;
  double waist_mm = 1.2;
};

/// @brief Uniform sampling grid; rate * duration must come out to a whole
/// number of samples. t_n = n / rate for n = 0 .. count-1.
struct SamplingSpec {
  double rate_hz = 2500.0;
  double duration_s = 1.0;

  /// @brief Number of samples; throws std::invalid_argument unless
  /// rate * duration is (within rounding) a positive integer.
  Eigen::Index sample_count() const;
  double time_s(Eigen::Index n) const { return static_cast<double>(n) / rate_hz; }
};

struct DetectorTimeSeries {
  SamplingSpec sampling;
  Eigen::ArrayXd samples;
};

/// @brief Instantaneous beam displacement caused by one vibrating mirror, in um.
double mirror_displacement_um(const VibrationSpec& vibration, double t_s);

/// @brief Total displacement a route accumulates: the sum over every mirror it
/// bounces off. Mirrors without an entry in the map are taken as still.
double path_displacement_um(const OpticalPath& path, const VibrationMap& vibrations, double t_s);

// The detector model: the beams of all routes land on a quadrant photodiode as
// one coherent superposition
//
//   Psi(x, y) = A * sum_p a_p * exp(-(x^2 + (y - d_p)^2) / (2*waist^2))
//
// and the readout is the top/bottom power difference
//
//   S = int_{y>0} |Psi|^2 - int_{y<0} |Psi|^2.
//
// Expanding |Psi|^2 pairwise and using the Gaussian product rule gives the
// closed form evaluated here:
//
//   S = A^2 * pi * waist^2 * sum_{p,q} a_p * conj(a_q)
//         * exp(-(d_p - d_q)^2 / (4*waist^2)) * erf((d_p + d_q) / (2*waist)),
//
// which is real because the (p,q) and (q,p) terms are conjugate. Displacements
// are passed in um and the waist in mm; the result carries A^2 * mm^2.

/// @brief Quad-cell difference signal for a set of route amplitudes at the
/// given per-route displacements.
double quadcell_signal(const Eigen::VectorXcd& amplitudes,
                       const Eigen::VectorXd& displacements_um,
                       const GaussianBeam& beam);

/// @brief Same readout evaluated from routes and mirror vibrations at time t.
double quadcell_signal(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                       const GaussianBeam& beam, double t_s);

/// @brief Total power on the detector plane (both halves), same conventions.
double total_power(const Eigen::VectorXcd& amplitudes,
                   const Eigen::VectorXd& displacements_um,
                   const GaussianBeam& beam);
double total_power(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                   const GaussianBeam& beam, double t_s);

/// @brief Conversion factor of the linearized readout: to first order in the
/// displacements, S ~= first_order_gain(beam) * Re[conj(sum_q a_q) * sum_p a_p * d_p(um)].
/// The value is 2 * A^2 * sqrt(pi) * waist_mm * 1e-3, i.e. the closed form's
/// derivative dS/dd at zero displacement, in signal units per um.
double first_order_gain(const GaussianBeam& beam);

/// @brief Linearized quad-cell signal (first order in every displacement).
double first_order_signal(const Eigen::VectorXcd& amplitudes,
                          const Eigen::VectorXd& displacements_um,
                          const GaussianBeam& beam);
double first_order_signal(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                          const GaussianBeam& beam, double t_s);

/// @brief Sample the quad-cell signal over the grid. Evaluation is sample-wise
/// independent; this implementation runs sequentially, so results are
/// reproducible bit for bit.
DetectorTimeSeries simulate(std::span<const OpticalPath> paths, const VibrationMap& vibrations,
                            const GaussianBeam& beam, const SamplingSpec& sampling);

/// @brief Optional measurement-noise model: adds white Gaussian noise with
/// sigma = relative_sigma * max|sample|, seeded for reproducibility.
void add_noise(DetectorTimeSeries& series, std::uint64_t seed, double relative_sigma = 0.01);

}  // namespace mzi
