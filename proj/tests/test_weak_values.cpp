#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mzi/weak_values.hpp"

using namespace mzi;
using cd = std::complex<double>;

namespace {

bool close(cd a, cd b, double tol = 1e-13) { return std::abs(a - b) <= tol; }

OpticalNetwork two_arm(double phase_b) {
  OpticalNetwork net;
  net.add_source("src");
  net.add_beam_splitter("split", 0.5);
  net.add_mirror("A");
  net.add_mirror("B", phase_b);
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

OpticalNetwork one_armed() {
  OpticalNetwork net;
  net.add_source("src");
  net.add_mirror("A");
  net.add_mirror("B");
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

OpticalNetwork nested(double phase_b) {
  OpticalNetwork net;
  net.add_source("src");
  net.add_beam_splitter("outer_split", 2.0 / 3.0);
  net.add_mirror("C");
  net.add_mirror("E", -std::numbers::pi / 2);
  net.add_beam_splitter("inner_split", 0.5);
  net.add_mirror("A");
  net.add_mirror("B", phase_b);
  net.add_beam_splitter("inner_merge", 0.5);
  net.add_mirror("F", -std::numbers::pi / 2);
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

// Brute-force reference: sum of amplitudes of the routes crossing a mirror.
cd crossing_sum(const std::vector<OpticalPath>& paths, const std::string& mirror) {
  cd sum{0.0, 0.0};
  for (const auto& p : paths)
    for (const auto& m : p.mirrors)
      if (m == mirror) sum += p.amplitude;
  return sum;
}

}  // namespace

TEST_CASE("nested interferometer with a dark inner loop: only A, B, C leave a trace") {
  const OpticalNetwork net = nested(0.0);
  CHECK(close(weak_value(net, "A"), cd{1.0, 0.0}));
  CHECK(close(weak_value(net, "B"), cd{-1.0, 0.0}));
  CHECK(close(weak_value(net, "C"), cd{1.0, 0.0}));
  CHECK(close(weak_value(net, "E"), cd{0.0, 0.0}));
  CHECK(close(weak_value(net, "F"), cd{0.0, 0.0}));

  const TwoStateVector tsv = two_state_vector(net);
  CHECK(close(tsv.overlap, cd{1.0 / 3.0, 0.0}));
}

TEST_CASE("bright inner loop: inner mirrors carry 1/3, the loop ends 2/3") {
  const WeakValueReport report = weak_value_report(nested(std::numbers::pi));
  REQUIRE(report.defined);
  CHECK(close(report.values.at("A"), cd{1.0 / 3.0, 0.0}));
  CHECK(close(report.values.at("B"), cd{1.0 / 3.0, 0.0}));
  CHECK(close(report.values.at("C"), cd{1.0 / 3.0, 0.0}));
  CHECK(close(report.values.at("E"), cd{2.0 / 3.0, 0.0}));
  CHECK(close(report.values.at("F"), cd{2.0 / 3.0, 0.0}));
  CHECK(close(report.overlap, cd{1.0, 0.0}));
}

TEST_CASE("balanced two-arm interferometer splits the trace evenly") {
  const WeakValueReport report = weak_value_report(two_arm(std::numbers::pi));
  REQUIRE(report.defined);
  CHECK(close(report.values.at("A"), cd{0.5, 0.0}));
  CHECK(close(report.values.at("B"), cd{0.5, 0.0}));
}

TEST_CASE("dark-fed arm: the emission-side wave never reaches A") {
  const OpticalNetwork net = one_armed();
  const TwoStateVector tsv = two_state_vector(net);
  CHECK(tsv.forward.at("A") == cd{0.0, 0.0});
  // The detection-side wave reaches both recombiner feeds with equal weight.
  CHECK(std::abs(tsv.backward.at("A")) ==
        doctest::Approx(std::abs(tsv.backward.at("B"))).epsilon(1e-14));

  CHECK(close(weak_value(net, "A"), cd{0.0, 0.0}));
  CHECK(close(weak_value(net, "B"), cd{1.0, 0.0}));
}

TEST_CASE("weak values come from the product of the two waves at the mirror") {
  // forward * backward must equal the summed amplitude of the routes crossing
  // the mirror, exactly as enumerated, on every network we build.
  for (const auto& net :
       {two_arm(0.0), two_arm(std::numbers::pi), one_armed(), nested(0.0),
        nested(std::numbers::pi), nested(1.1), apply_block(nested(0.0), "C.out"),
        apply_block(nested(0.0), "F.out")}) {
    const TwoStateVector tsv = two_state_vector(net);
    const auto paths = enumerate_paths(net);
    for (const auto& id : net.mirror_ids()) {
      const cd via_waves = tsv.forward.at(id) * tsv.backward.at(id);
      CHECK(close(via_waves, crossing_sum(paths, id), 1e-14));
    }
    cd overlap_from_paths{0.0, 0.0};
    for (const auto& p : paths) overlap_from_paths += p.amplitude;
    CHECK(close(tsv.overlap, overlap_from_paths, 1e-14));
  }
}

TEST_CASE("orthogonal postselection leaves weak values undefined") {
  const OpticalNetwork net = apply_block(nested(0.0), "C.out");

  CHECK_THROWS_AS(weak_value(net, "A"), UndefinedWeakValue);
  CHECK_THROWS_AS((void)predict_peak_amplitudes(net, {}, GaussianBeam{}), UndefinedWeakValue);

  const WeakValueReport report = weak_value_report(net);
  CHECK(!report.defined);
  CHECK(report.values.empty());
  CHECK(std::abs(report.overlap) <= 1e-15);
}

TEST_CASE("a tiny residual overlap still counts as orthogonal") {
  // Two nearly cancelling routes: the remainder is rounding noise relative to
  // the route amplitudes, so treating it as a real overlap would be spurious.
  std::vector<OpticalPath> paths(2);
  paths[0].mirrors = {"A"};
  paths[0].amplitude = {0.5, 0.0};
  paths[1].mirrors = {"B"};
  paths[1].amplitude = {-0.5 + 1e-14, 0.0};
  CHECK(!weak_value_report(paths).defined);

  paths[1].amplitude = {-0.4, 0.0};
  CHECK(weak_value_report(paths).defined);
}

TEST_CASE("unknown mirrors are rejected") {
  const OpticalNetwork net = two_arm(0.0);
  CHECK_THROWS_AS(weak_value(net, "nosuch"), std::invalid_argument);
  CHECK_THROWS_AS(weak_value(net, "split"), std::invalid_argument);  // not a mirror
}

TEST_CASE("an extra common-path mirror rescales nothing") {
  // A mirror every route crosses just before the detector multiplies all
  // amplitudes by one phase; weak values are ratios, so they cannot move.
  OpticalNetwork plain = nested(0.0);
  OpticalNetwork shifted;
  shifted.add_source("src");
  shifted.add_beam_splitter("outer_split", 2.0 / 3.0);
  shifted.add_mirror("C");
  shifted.add_mirror("E", -std::numbers::pi / 2);
  shifted.add_beam_splitter("inner_split", 0.5);
  shifted.add_mirror("A");
  shifted.add_mirror("B");
  shifted.add_beam_splitter("inner_merge", 0.5);
  shifted.add_mirror("F", -std::numbers::pi / 2);
  shifted.add_beam_splitter("outer_merge", 2.0 / 3.0);
  shifted.add_mirror("G", 0.71);  // common to every route
  shifted.add_detector("det");
  shifted.connect("src.out", "outer_split.a");
  shifted.connect("outer_split.t", "C.in");
  shifted.connect("outer_split.r", "E.in");
  shifted.connect("E.out", "inner_split.a");
  shifted.connect("inner_split.t", "A.in");
  shifted.connect("inner_split.r", "B.in");
  shifted.connect("A.out", "inner_merge.a");
  shifted.connect("B.out", "inner_merge.b");
  shifted.connect("inner_merge.t", "F.in");
  shifted.connect("F.out", "outer_merge.b");
  shifted.connect("C.out", "outer_merge.a");
  shifted.connect("outer_merge.t", "G.in");
  shifted.connect("G.out", "det.in");

  const WeakValueReport before = weak_value_report(plain);
  const WeakValueReport after = weak_value_report(shifted);
  REQUIRE(after.defined);
  for (const auto& [id, value] : before.values) CHECK(close(after.values.at(id), value));
  CHECK(close(after.values.at("G"), cd{1.0, 0.0}));
  // The overlap itself does pick up the phase.
  CHECK(std::abs(after.overlap) == doctest::Approx(std::abs(before.overlap)).epsilon(1e-14));
}

TEST_CASE("network walk and route table agree") {
  for (const auto& net : {two_arm(0.3), nested(0.0), nested(std::numbers::pi), one_armed()}) {
    const WeakValueReport from_net = weak_value_report(net);
    const auto paths = enumerate_paths(net);
    const auto ids = net.mirror_ids();
    const WeakValueReport from_table = weak_value_report(paths, ids);
    REQUIRE(from_net.defined == from_table.defined);
    CHECK(close(from_net.overlap, from_table.overlap, 1e-14));
    for (const auto& [id, value] : from_net.values)
      CHECK(close(from_table.values.at(id), value, 1e-13));
  }
}

TEST_CASE("mirrors listed but never crossed get weak value zero") {
  std::vector<OpticalPath> paths(1);
  paths[0].mirrors = {"B"};
  paths[0].amplitude = {0.7, 0.0};
  const std::vector<std::string> ids{"A", "B"};
  const WeakValueReport report = weak_value_report(paths, ids);
  REQUIRE(report.defined);
  CHECK(report.values.at("A") == cd{0.0, 0.0});
  CHECK(close(report.values.at("B"), cd{1.0, 0.0}));
}

TEST_CASE("every full cut across the routes sums to one") {
  // A cut is a set of mirrors every route crosses exactly once; the crossing
  // sums then partition the overlap.
  const auto check_cut = [](const OpticalNetwork& net, std::vector<std::string> cut) {
    const WeakValueReport report = weak_value_report(net);
    REQUIRE(report.defined);
    cd sum{0.0, 0.0};
    for (const auto& id : cut) sum += report.values.at(id);
    CHECK(close(sum, cd{1.0, 0.0}, 1e-12));
  };
  check_cut(two_arm(std::numbers::pi), {"A", "B"});
  check_cut(one_armed(), {"A", "B"});
  for (double phase : {0.0, std::numbers::pi, 0.37}) {
    check_cut(nested(phase), {"C", "E"});
    check_cut(nested(phase), {"C", "F"});
    check_cut(nested(phase), {"C", "A", "B"});
  }
  check_cut(apply_block(nested(0.0), "F.out"), {"C", "E"});
}

TEST_CASE("predicted peak amplitudes follow gain * |overlap|^2 * Re(w) * displacement") {
  const OpticalNetwork net = nested(std::numbers::pi);
  const GaussianBeam beam;
  const VibrationMap vibrations{
      {"A", {282.0, 0.6, 0.0}}, {"B", {296.0, 0.6, 0.0}}, {"C", {307.0, 0.6, 0.0}},
      {"E", {318.0, 0.6, 0.0}}, {"F", {332.0, 0.6, 0.0}},
  };
  const auto predicted = predict_peak_amplitudes(net, vibrations, beam);
  REQUIRE(predicted.size() == 5);

  const double unit = first_order_gain(beam) * 1.0 * 0.6;  // |overlap| = 1 here
  CHECK(predicted.at("A") == doctest::Approx(unit / 3.0).epsilon(1e-12));
  CHECK(predicted.at("E") == doctest::Approx(unit * 2.0 / 3.0).epsilon(1e-12));
  // Power ratio between the loop ends and the loop interior: exactly 4.
  const double ratio = predicted.at("E") / predicted.at("A");
  CHECK(ratio * ratio == doctest::Approx(4.0).epsilon(1e-12));

  // Mirrors without a vibration entry produce no prediction row.
  const auto partial = predict_peak_amplitudes(net, {{"A", {282.0, 0.6, 0.0}}}, beam);
  CHECK(partial.size() == 1);

  // A vibrating mirror the routes never cross predicts exactly zero.
  VibrationMap plus_ghost = vibrations;
  plus_ghost["ghost"] = {350.0, 0.6, 0.0};
  CHECK(predict_peak_amplitudes(enumerate_paths(net), plus_ghost, beam).at("ghost") == 0.0);
}
