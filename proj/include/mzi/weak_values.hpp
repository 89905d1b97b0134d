#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>

#include "mzi/beam_sim.hpp"
#include "mzi/optical_network.hpp"

namespace mzi {

/// @brief Thrown when the source and detector states are orthogonal (the
/// summed route amplitude vanishes), which leaves the weak values undefined.
class UndefinedWeakValue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// @brief Amplitudes of the emission-side and detection-side waves at each
/// mirror. forward[m] sums every partial route from the source up to and
/// including the bounce off m; backward[m] sums every continuation from just
/// after m to the detector. Their product therefore equals the total amplitude
/// of the routes crossing m, and overlap is the sum over all complete routes.
struct TwoStateVector {
  std::map<std::string, std::complex<double>> forward;
  std::map<std::string, std::complex<double>> backward;
  std::complex<double> overlap{0.0, 0.0};
};

TwoStateVector two_state_vector(const OpticalNetwork& network);

/// @brief Weak value of the projector onto mirror m:
/// forward[m] * backward[m] / overlap. Throws UndefinedWeakValue when
/// |overlap| <= 1e-12 * sum_p |amplitude_p|, std::invalid_argument for an
/// unknown mirror id.
std::complex<double> weak_value(const OpticalNetwork& network, const std::string& mirror_id);

/// @brief All weak values at once, with the orthogonal-postselection case
/// reported as a flag instead of an exception. values is empty when !defined.
struct WeakValueReport {
  std::map<std::string, std::complex<double>> values;
  std::complex<double> overlap{0.0, 0.0};
  bool defined = false;
};

WeakValueReport weak_value_report(const OpticalNetwork& network);

/// @brief Weak values straight from a route table: value(m) =
/// sum of amplitudes of routes crossing m / sum of all amplitudes. mirror_ids
/// may add mirrors that appear on no route (their value is 0).
WeakValueReport weak_value_report(std::span<const OpticalPath> paths,
                                  std::span<const std::string> mirror_ids = {});

/// @brief Expected amplitude of the detector-signal oscillation at each
/// mirror's vibration frequency, in the same units as the simulated signal:
///   amplitude(m) = first_order_gain(beam) * |overlap|^2 * Re(weak value of m)
///                  * displacement_um(m).
/// The squared value is twice the expected (unsmoothed) spectral peak power.
/// One entry per vibrating mirror; a mirror on no route predicts exactly 0.
/// Throws UndefinedWeakValue when the postselection is orthogonal.
std::map<std::string, double> predict_peak_amplitudes(std::span<const OpticalPath> paths,
                                                      const VibrationMap& vibrations,
                                                      const GaussianBeam& beam);
std::map<std::string, double> predict_peak_amplitudes(const OpticalNetwork& network,
                                                      const VibrationMap& vibrations,
                                                      const GaussianBeam& beam);

}  // namespace mzi
