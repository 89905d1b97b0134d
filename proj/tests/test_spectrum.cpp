#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "mzi/spectrum.hpp"

using namespace mzi;

namespace {

DetectorTimeSeries sine_series(double freq_hz, double amplitude, double rate_hz = 2500.0,
                               double duration_s = 1.0, double offset = 0.0) {
  DetectorTimeSeries series{{rate_hz, duration_s}, {}};
  const Eigen::Index n = series.sampling.sample_count();
  series.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    series.samples[i] =
        offset + amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * series.sampling.time_s(i));
  return series;
}

double mean_square(const DetectorTimeSeries& series) { return series.samples.square().mean(); }

}  // namespace

TEST_CASE("a unit sine on an exact bin carries power one half in that bin alone") {
  const PowerSpectrum spec = power_spectrum(sine_series(100.0, 1.0));
  REQUIRE(spec.powers.size() == 1251);
  CHECK(spec.bin_width_hz == 1.0);
  CHECK(spec.window == 1);

  CHECK(spec.powers[100] == doctest::Approx(0.5).epsilon(1e-12));
  for (Eigen::Index k = 0; k < spec.powers.size(); ++k)
    if (k != 100) CHECK(spec.powers[k] < 1e-20);
}

TEST_CASE("the spectrum satisfies the energy identity bin by bin") {
  std::mt19937 rng(8675309);
  std::normal_distribution<double> gauss(0.0, 1.3);
  DetectorTimeSeries series{{2500.0, 1.0}, Eigen::ArrayXd(2500)};
  for (Eigen::Index i = 0; i < 2500; ++i) series.samples[i] = gauss(rng);

  const PowerSpectrum spec = power_spectrum(series);
  const double total = spec.powers.sum();
  CHECK(std::abs(total - mean_square(series)) <= 1e-12 * mean_square(series));
}

TEST_CASE("energy identity holds for odd sample counts too") {
  std::mt19937 rng(24601);
  std::normal_distribution<double> gauss(0.0, 0.8);
  DetectorTimeSeries series{{2501.0, 1.0}, Eigen::ArrayXd(2501)};
  for (Eigen::Index i = 0; i < 2501; ++i) series.samples[i] = gauss(rng);

  const PowerSpectrum spec = power_spectrum(series);
  REQUIRE(spec.powers.size() == 1251);
  CHECK(std::abs(spec.powers.sum() - mean_square(series)) <= 1e-12 * mean_square(series));
}

TEST_CASE("DC and Nyquist bins are not doubled") {
  const PowerSpectrum constant = power_spectrum(sine_series(0.0, 0.0, 2500.0, 1.0, 2.0));
  CHECK(constant.powers[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(constant.powers.sum() == doctest::Approx(4.0).epsilon(1e-12));

  // rate/2 alternates sign sample to sample: cos(pi*n).
  DetectorTimeSeries nyquist{{2500.0, 1.0}, Eigen::ArrayXd(2500)};
  for (Eigen::Index i = 0; i < 2500; ++i) nyquist.samples[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const PowerSpectrum spec = power_spectrum(nyquist);
  CHECK(spec.powers[1250] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec.powers.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("duration sets the bin width") {
  const PowerSpectrum spec = power_spectrum(sine_series(100.0, 1.0, 2500.0, 0.5));
  CHECK(spec.bin_width_hz == 2.0);
  CHECK(spec.frequency_hz(50) == 100.0);
  CHECK(spec.powers[50] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bin lookup rounds to the nearest bin and rejects out-of-range frequencies") {
  const PowerSpectrum spec = power_spectrum(sine_series(100.0, 1.0));
  CHECK(spec.bin_index(282.0) == 282);
  CHECK(spec.bin_index(282.4) == 282);
  CHECK(spec.bin_index(281.6) == 282);
  CHECK_THROWS_AS(spec.bin_index(-5.0), std::invalid_argument);
  CHECK_THROWS_AS(spec.bin_index(1251.0), std::invalid_argument);
}

TEST_CASE("smoothing spreads an isolated peak into a plateau of height h over window") {
  PowerSpectrum spec;
  spec.bin_width_hz = 1.0;
  spec.powers = Eigen::ArrayXd::Zero(1251);
  spec.powers[300] = 7.0;

  const PowerSpectrum flat = smooth(spec, 10);
  CHECK(flat.window == 10);
  CHECK(flat.smoothed());
  // The averaging window reaches 4 bins back and 5 ahead, so bins 295..304
  // all see the peak.
  for (Eigen::Index k = 295; k <= 304; ++k)
    CHECK(flat.powers[k] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(flat.powers[294] == 0.0);
  CHECK(flat.powers[305] == 0.0);
}

TEST_CASE("smoothing shrinks its window at the edges instead of padding") {
  PowerSpectrum spec;
  spec.bin_width_hz = 1.0;
  spec.powers = Eigen::ArrayXd::Zero(40);
  spec.powers[0] = 1.0;

  const PowerSpectrum s = smooth(spec, 10);
  // At bin 0 the window is [0, 5]: six bins, one of them hot.
  CHECK(s.powers[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(s.powers[4] == doctest::Approx(1.0 / 10.0).epsilon(1e-12));
  CHECK(s.powers[5] == 0.0);
}

TEST_CASE("window one is the identity and a flat spectrum stays flat") {
  PowerSpectrum spec;
  spec.bin_width_hz = 1.0;
  spec.powers = Eigen::ArrayXd::Constant(100, 3.25);

  const PowerSpectrum same = smooth(spec, 1);
  CHECK((same.powers == spec.powers).all());
  CHECK(!same.smoothed());

  const PowerSpectrum flat = smooth(spec, 10);
  for (Eigen::Index k = 0; k < 100; ++k)
    CHECK(flat.powers[k] == doctest::Approx(3.25).epsilon(1e-14));

  CHECK_THROWS_AS(smooth(spec, 0), std::invalid_argument);
}

TEST_CASE("peak_power searches a window around the requested frequency") {
  PowerSpectrum spec;
  spec.bin_width_hz = 1.0;
  spec.powers = Eigen::ArrayXd::Zero(1251);
  spec.powers[284] = 2.0;

  CHECK(peak_power(spec, 282.0) == 2.0);          // default +-5 bins
  CHECK(peak_power(spec, 282.0, 1) == 0.0);       // too narrow to see it
  CHECK(peak_power(spec, 2.0) == 0.0);            // window clipped at 0: no peak there
  CHECK_THROWS_AS(peak_power(spec, 282.0, -1), std::invalid_argument);
}

TEST_CASE("peak comparison converts amplitudes to powers and honors the window") {
  // Two tones with known amplitudes, smoothed the standard way.
  DetectorTimeSeries series = sine_series(282.0, 3e-4);
  const DetectorTimeSeries second = sine_series(296.0, 1e-4);
  series.samples += second.samples;

  const PowerSpectrum spec = smooth(power_spectrum(series), 10);
  const VibrationMap vibrations{{"A", {282.0, 0.6, 0.0}}, {"B", {296.0, 0.6, 0.0}}};

  SUBCASE("matching predictions pass") {
    const std::map<std::string, double> predicted{{"A", 3e-4}, {"B", 1e-4}};
    const auto rows = compare_to_prediction(spec, predicted, vibrations);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].mirror == "A");
    CHECK(rows[0].frequency_hz == 282.0);
    CHECK(rows[0].predicted_power == doctest::Approx(0.5 * 9e-8 / 10.0).epsilon(1e-12));
    CHECK(rows[0].ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(!rows[0].flagged);
    CHECK(rows[1].ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(!rows[1].flagged);
  }
  SUBCASE("a wrong prediction is flagged") {
    const std::map<std::string, double> predicted{{"A", 3.5e-4}, {"B", 1e-4}};
    const auto rows = compare_to_prediction(spec, predicted, vibrations);
    CHECK(rows[0].flagged);
    CHECK(!rows[1].flagged);
  }
  SUBCASE("zero predictions are reported but never flagged") {
    const std::map<std::string, double> predicted{{"A", 3e-4}, {"B", 0.0}};
    const auto rows = compare_to_prediction(spec, predicted, vibrations);
    CHECK(!rows[1].flagged);
    CHECK(std::isnan(rows[1].ratio));
    CHECK(rows[1].predicted_power == 0.0);
    CHECK(rows[1].simulated_power > 0.0);  // the measured side is still filled in
  }
  SUBCASE("a prediction without a vibration entry is an error") {
    const std::map<std::string, double> predicted{{"nosuch", 1e-4}};
    CHECK_THROWS_AS(compare_to_prediction(spec, predicted, vibrations), std::invalid_argument);
  }
}

TEST_CASE("tones are recovered exactly where they were injected") {
  DetectorTimeSeries series = sine_series(282.0, 1e-3);
  series.samples += sine_series(296.0, 2e-3).samples;
  series.samples += sine_series(307.0, 4e-3).samples;

  const PowerSpectrum spec = power_spectrum(series);
  const double top = spec.powers.maxCoeff();
  std::set<Eigen::Index> hot;
  for (Eigen::Index k = 0; k < spec.powers.size(); ++k)
    if (spec.powers[k] > 1e-4 * top) hot.insert(k);
  CHECK(hot == std::set<Eigen::Index>{282, 296, 307});
}

TEST_CASE("empty series are rejected") {
  CHECK_THROWS_AS(power_spectrum(DetectorTimeSeries{{2500.0, 1.0}, {}}),
                  std::invalid_argument);
}
