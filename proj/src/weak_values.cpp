#include "mzi/weak_values.hpp"

#include <cmath>
#include <set>

namespace mzi {

namespace {

constexpr double overlap_epsilon_scale = 1e-12;

std::complex<double> mirror_phase(const Element& e) {
  return std::polar(1.0, e.static_phase_rad);
}

// Walks emission-side: every visit to a mirror deposits the amplitude
// accumulated up to and including its bounce.
void walk_forward(const OpticalNetwork& net, const Element& here, const std::string& in_port,
                  std::complex<double> amp, std::set<std::string>& on_route,
                  TwoStateVector& out) {
  if (on_route.count(here.id))
    throw TopologyError("network wiring contains a cycle through \"" + here.id + "\"");
  switch (here.type) {
    case ElementType::block:
      return;
    case ElementType::detector:
      out.overlap += amp;
      return;
    case ElementType::mirror:
      amp *= mirror_phase(here);
      out.forward[here.id] += amp;
      break;
    default:
      break;
  }
  on_route.insert(here.id);
  const std::vector<std::pair<std::string, std::string>> hops =
      here.type == ElementType::beam_splitter
          ? std::vector<std::pair<std::string, std::string>>{{in_port, "t"}, {in_port, "r"}}
          : std::vector<std::pair<std::string, std::string>>{{in_port, "out"}};
  for (const auto& [in, outp] : hops) {
    const Edge* e = net.edge_from(here.id, outp);
    if (!e) continue;
    std::complex<double> factor{1.0, 0.0};
    if (here.type == ElementType::beam_splitter)
      factor = splitter_factor(here.reflect_fraction, in, outp);
    walk_forward(net, *net.find(e->to_element), e->to_port, amp * factor, on_route, out);
  }
  on_route.erase(here.id);
}

// Walks detection-side against the edges. amp holds the factors from the
// element we just left down to the detector; a mirror records that sum before
// contributing its own phase to whatever lies further upstream.
void walk_backward(const OpticalNetwork& net, const Element& here, const std::string& out_port,
                   std::complex<double> amp, std::set<std::string>& on_route,
                   TwoStateVector& out) {
  if (on_route.count(here.id))
    throw TopologyError("network wiring contains a cycle through \"" + here.id + "\"");
  switch (here.type) {
    case ElementType::block:
    case ElementType::source:
      return;
    case ElementType::mirror:
      out.backward[here.id] += amp;
      amp *= mirror_phase(here);
      break;
    default:
      break;
  }
  on_route.insert(here.id);
  const std::vector<std::string> in_ports =
      here.type == ElementType::beam_splitter ? std::vector<std::string>{"a", "b"}
                                              : std::vector<std::string>{"in"};
  for (const auto& inp : in_ports) {
    const Edge* e = net.edge_into(here.id, inp);
    if (!e) continue;
    std::complex<double> factor{1.0, 0.0};
    if (here.type == ElementType::beam_splitter)
      factor = splitter_factor(here.reflect_fraction, inp, out_port);
    walk_backward(net, *net.find(e->from_element), e->from_port, amp * factor, on_route, out);
  }
  on_route.erase(here.id);
}

double amplitude_scale(std::span<const OpticalPath> paths) {
  double s = 0.0;
  for (const auto& p : paths) s += std::abs(p.amplitude);
  return s;
}

}  // namespace

TwoStateVector two_state_vector(const OpticalNetwork& network) {
  TwoStateVector tsv;
  for (const auto& id : network.mirror_ids()) {
    tsv.forward[id] = {0.0, 0.0};
    tsv.backward[id] = {0.0, 0.0};
  }
  std::set<std::string> on_route;
  for (const auto& e : network.elements()) {
    if (e.type == ElementType::source)
      walk_forward(network, e, "", {1.0, 0.0}, on_route, tsv);
    if (e.type == ElementType::detector)
      walk_backward(network, e, "", {1.0, 0.0}, on_route, tsv);
  }
  return tsv;
}

WeakValueReport weak_value_report(const OpticalNetwork& network) {
  const TwoStateVector tsv = two_state_vector(network);
  const double eps = overlap_epsilon_scale * amplitude_scale(enumerate_paths(network));

  WeakValueReport report;
  report.overlap = tsv.overlap;
  report.defined = std::abs(tsv.overlap) > eps;
  if (!report.defined) return report;
  for (const auto& [id, fwd] : tsv.forward)
    report.values[id] = fwd * tsv.backward.at(id) / tsv.overlap;
  return report;
}

WeakValueReport weak_value_report(std::span<const OpticalPath> paths,
                                  std::span<const std::string> mirror_ids) {
  std::map<std::string, std::complex<double>> crossing;
  for (const auto& m : mirror_ids) crossing[m] = {0.0, 0.0};
  std::complex<double> overlap{0.0, 0.0};
  for (const auto& p : paths) {
    overlap += p.amplitude;
    for (const auto& m : p.mirrors) crossing[m] += p.amplitude;
  }

  WeakValueReport report;
  report.overlap = overlap;
  report.defined = std::abs(overlap) > overlap_epsilon_scale * amplitude_scale(paths);
  if (!report.defined) return report;
  for (const auto& [id, sum] : crossing) report.values[id] = sum / overlap;
  return report;
}

std::complex<double> weak_value(const OpticalNetwork& network, const std::string& mirror_id) {
  const Element* e = network.find(mirror_id);
  if (!e || e->type != ElementType::mirror)
    throw std::invalid_argument("weak_value: no mirror \"" + mirror_id + "\" in the network");
  const WeakValueReport report = weak_value_report(network);
  if (!report.defined)
    throw UndefinedWeakValue(
        "weak values are undefined: the detected wave is orthogonal to the emitted one "
        "(summed route amplitude ~ 0)");
  return report.values.at(mirror_id);
}

namespace {

std::map<std::string, double> predict_from_report(const WeakValueReport& report,
                                                  const VibrationMap& vibrations,
                                                  const GaussianBeam& beam) {
  if (!report.defined)
    throw UndefinedWeakValue(
        "peak prediction impossible: weak values are undefined for this configuration");
  const double gain = first_order_gain(beam) * std::norm(report.overlap);
  std::map<std::string, double> amplitudes;
  for (const auto& [id, vib] : vibrations) {
    const auto value = report.values.find(id);
    // A vibrating mirror that sits on no route (or has weak value 0) still
    // gets a row: its predicted peak is exactly zero.
    const double re = value == report.values.end() ? 0.0 : value->second.real();
    amplitudes[id] = gain * re * vib.displacement_um;
  }
  return amplitudes;
}

}  // namespace

std::map<std::string, double> predict_peak_amplitudes(std::span<const OpticalPath> paths,
                                                      const VibrationMap& vibrations,
                                                      const GaussianBeam& beam) {
  return predict_from_report(weak_value_report(paths), vibrations, beam);
}

std::map<std::string, double> predict_peak_amplitudes(const OpticalNetwork& network,
                                                      const VibrationMap& vibrations,
                                                      const GaussianBeam& beam) {
  return predict_from_report(weak_value_report(network), vibrations, beam);
}

}  // namespace mzi
