#include "mzi/optical_network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace mzi {

namespace {

bool is_input_port(ElementType type, const std::string& port) {
  switch (type) {
    case ElementType::source:        return false;
    case ElementType::beam_splitter: return port == "a" || port == "b";
    case ElementType::mirror:
    case ElementType::block:         return port == "in";
    case ElementType::detector:      return port == "in";
  }
  return false;
}

bool is_output_port(ElementType type, const std::string& port) {
  switch (type) {
    case ElementType::source:        return port == "out";
    case ElementType::beam_splitter: return port == "t" || port == "r";
    case ElementType::mirror:
    case ElementType::block:         return port == "out";
    case ElementType::detector:      return false;
  }
  return false;
}

// Splits "element.port"; the id charset forbids '.', so the first dot is it.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto dot = endpoint.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == endpoint.size())
    throw std::invalid_argument("expected \"element.port\", got \"" + endpoint + "\"");
  return {endpoint.substr(0, dot), endpoint.substr(dot + 1)};
}

}  // namespace

VibrationSpec VibrationSpec::from_tilt(double frequency_hz, double angle_rad,
                                       double lever_arm_m, double phase_rad) {
  VibrationSpec v;
  v.frequency_hz = frequency_hz;
  v.displacement_um = angle_rad * lever_arm_m * 1e6;
  v.phase_rad = phase_rad;
  return v;
}

void OpticalNetwork::add_element(Element e) {
  if (e.id.empty() || e.id.find('.') != std::string::npos ||
      e.id.find_first_of(" \t\n") != std::string::npos)
    throw std::invalid_argument("element id \"" + e.id +
                                "\" must be non-empty and free of dots/whitespace");
  elements_.push_back(std::move(e));
}

void OpticalNetwork::add_source(const std::string& id) {
  add_element({id, ElementType::source, 0.0, 0.0, {}});
}

void OpticalNetwork::add_detector(const std::string& id) {
  add_element({id, ElementType::detector, 0.0, 0.0, {}});
}

void OpticalNetwork::add_beam_splitter(const std::string& id, double reflect_fraction) {
  // Out-of-range fractions are representable; validate() reports them.
  add_element({id, ElementType::beam_splitter, reflect_fraction, 0.0, {}});
}

void OpticalNetwork::add_mirror(const std::string& id, double static_phase_rad,
                                const VibrationSpec& vibration) {
  add_element({id, ElementType::mirror, 0.0, static_phase_rad, vibration});
}

void OpticalNetwork::add_block(const std::string& id) {
  add_element({id, ElementType::block, 0.0, 0.0, {}});
}

const Element* OpticalNetwork::find(const std::string& id) const {
  for (const auto& e : elements_)
    if (e.id == id) return &e;
  return nullptr;
}

std::vector<std::string> OpticalNetwork::mirror_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : elements_)
    if (e.type == ElementType::mirror) ids.push_back(e.id);
  return ids;
}

const Edge* OpticalNetwork::edge_from(const std::string& element_id,
                                      const std::string& port) const {
  for (const auto& e : edges_)
    if (e.from_element == element_id && e.from_port == port) return &e;
  return nullptr;
}

const Edge* OpticalNetwork::edge_into(const std::string& element_id,
                                      const std::string& port) const {
  for (const auto& e : edges_)
    if (e.to_element == element_id && e.to_port == port) return &e;
  return nullptr;
}

void OpticalNetwork::connect(const std::string& from, const std::string& to) {
  const auto [from_id, from_port] = split_endpoint(from);
  const auto [to_id, to_port] = split_endpoint(to);
  const Element* src = find(from_id);
  const Element* dst = find(to_id);
  if (!src) throw std::invalid_argument("connect: unknown element \"" + from_id + "\"");
  if (!dst) throw std::invalid_argument("connect: unknown element \"" + to_id + "\"");
  if (!is_output_port(src->type, from_port))
    throw std::invalid_argument("connect: \"" + from + "\" is not an output port");
  if (!is_input_port(dst->type, to_port))
    throw std::invalid_argument("connect: \"" + to + "\" is not an input port");
  if (edge_from(from_id, from_port))
    throw std::invalid_argument("connect: output \"" + from + "\" is already wired");
  if (edge_into(to_id, to_port))
    throw std::invalid_argument("connect: input \"" + to + "\" is already wired");
  edges_.push_back({from_id, from_port, to_id, to_port});
}

std::complex<double> splitter_factor(double reflect_fraction,
                                     const std::string& in_port,
                                     const std::string& out_port) {
  const bool in_ok = (in_port == "a" || in_port == "b");
  const bool out_ok = (out_port == "t" || out_port == "r");
  if (!in_ok || !out_ok)
    throw std::invalid_argument("splitter_factor: ports must be a|b -> t|r");
  const bool transmitted = (in_port == "a") == (out_port == "t");
  if (transmitted) return {std::sqrt(1.0 - reflect_fraction), 0.0};
  return {0.0, std::sqrt(reflect_fraction)};
}

namespace {

std::complex<double> step_factor(const Element& e, const std::string& in_port,
                                 const std::string& out_port) {
  switch (e.type) {
    case ElementType::source:
    case ElementType::detector:
      return {1.0, 0.0};
    case ElementType::beam_splitter:
      return splitter_factor(e.reflect_fraction, in_port, out_port);
    case ElementType::mirror:
      return std::polar(1.0, e.static_phase_rad);
    case ElementType::block:
      return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

std::vector<std::string> output_ports_of(ElementType type) {
  switch (type) {
    case ElementType::source:        return {"out"};
    case ElementType::beam_splitter: return {"t", "r"};
    case ElementType::mirror:
    case ElementType::block:         return {"out"};
    case ElementType::detector:      return {};
  }
  return {};
}

struct PathWalker {
  const OpticalNetwork& net;
  std::vector<OpticalPath> found;
  std::vector<PathStep> trail;
  std::set<std::string> on_route;

  void walk(const Element& here, const std::string& in_port, std::complex<double> amp) {
    if (on_route.count(here.id))
      throw TopologyError("network wiring contains a cycle through \"" + here.id + "\"");

    if (here.type == ElementType::block) return;  // absorbed

    if (here.type == ElementType::detector) {
      trail.push_back({here.id, in_port, ""});
      OpticalPath p;
      for (const auto& s : trail) {
        p.element_sequence.push_back(s.element);
        if (net.find(s.element)->type == ElementType::mirror) p.mirrors.push_back(s.element);
      }
      p.amplitude = amp;
      p.steps = trail;
      found.push_back(std::move(p));
      trail.pop_back();
      return;
    }

    on_route.insert(here.id);
    for (const auto& out_port : output_ports_of(here.type)) {
      const Edge* e = net.edge_from(here.id, out_port);
      if (!e) continue;  // open port: power leaves the network
      const Element* next = net.find(e->to_element);
      trail.push_back({here.id, in_port, out_port});
      walk(*next, e->to_port, amp * step_factor(here, in_port, out_port));
      trail.pop_back();
    }
    on_route.erase(here.id);
  }
};

}  // namespace

std::vector<OpticalPath> enumerate_paths(const OpticalNetwork& network) {
  const Element* source = nullptr;
  for (const auto& e : network.elements())
    if (e.type == ElementType::source) {
      source = &e;
      break;
    }
  if (!source) return {};

  PathWalker walker{network, {}, {}, {}};
  walker.walk(*source, "", {1.0, 0.0});

  std::sort(walker.found.begin(), walker.found.end(),
            [](const OpticalPath& lhs, const OpticalPath& rhs) {
              if (lhs.element_sequence != rhs.element_sequence)
                return lhs.element_sequence < rhs.element_sequence;
              // Parallel edges between the same elements: break ties on ports.
              for (size_t i = 0; i < std::min(lhs.steps.size(), rhs.steps.size()); ++i) {
                if (lhs.steps[i].out_port != rhs.steps[i].out_port)
                  return lhs.steps[i].out_port < rhs.steps[i].out_port;
              }
              return false;
            });
  return walker.found;
}

std::complex<double> path_amplitude(const OpticalNetwork& network, const OpticalPath& path) {
  if (path.steps.empty())
    throw std::invalid_argument("path_amplitude: path has no steps");
  std::complex<double> amp{1.0, 0.0};
  for (size_t i = 0; i < path.steps.size(); ++i) {
    const auto& s = path.steps[i];
    const Element* e = network.find(s.element);
    if (!e) throw std::invalid_argument("path_amplitude: unknown element \"" + s.element + "\"");
    if (i + 1 < path.steps.size()) {
      const Edge* edge = network.edge_from(s.element, s.out_port);
      if (!edge || edge->to_element != path.steps[i + 1].element ||
          edge->to_port != path.steps[i + 1].in_port)
        throw std::invalid_argument("path_amplitude: step " + s.element + "." + s.out_port +
                                    " does not match the network wiring");
      amp *= step_factor(*e, s.in_port, s.out_port);
    }
  }
  return amp;
}

namespace {

// Directed reachability over raw edges; element semantics (including blocks)
// are ignored so that the check is about wiring, not light propagation.
std::set<std::string> reach_forward(const OpticalNetwork& net, const std::string& start) {
  std::set<std::string> seen{start};
  std::vector<std::string> queue{start};
  while (!queue.empty()) {
    const std::string id = queue.back();
    queue.pop_back();
    for (const auto& e : net.edges())
      if (e.from_element == id && seen.insert(e.to_element).second)
        queue.push_back(e.to_element);
  }
  return seen;
}

std::set<std::string> reach_backward(const OpticalNetwork& net, const std::string& start) {
  std::set<std::string> seen{start};
  std::vector<std::string> queue{start};
  while (!queue.empty()) {
    const std::string id = queue.back();
    queue.pop_back();
    for (const auto& e : net.edges())
      if (e.to_element == id && seen.insert(e.from_element).second)
        queue.push_back(e.from_element);
  }
  return seen;
}

bool has_cycle(const OpticalNetwork& net) {
  // 0 = white, 1 = on stack, 2 = done
  std::map<std::string, int> color;
  for (const auto& e : net.elements()) color.emplace(e.id, 0);

  std::function<bool(const std::string&)> visit = [&](const std::string& id) -> bool {
    int& c = color[id];
    if (c == 1) return true;
    if (c == 2) return false;
    c = 1;
    for (const auto& e : net.edges())
      if (e.from_element == id && visit(e.to_element)) return true;
    c = 2;
    return false;
  };

  for (const auto& e : net.elements())
    if (color[e.id] == 0 && visit(e.id)) return true;
  return false;
}

}  // namespace

std::vector<std::string> validate(const OpticalNetwork& network) {
  std::vector<std::string> diagnostics;

  std::set<std::string> seen, reported;
  for (const auto& e : network.elements()) {
    if (!seen.insert(e.id).second && reported.insert(e.id).second)
      diagnostics.push_back("duplicate element id \"" + e.id + "\"");
  }

  std::vector<std::string> sources, detectors;
  for (const auto& e : network.elements()) {
    if (e.type == ElementType::source) sources.push_back(e.id);
    if (e.type == ElementType::detector) detectors.push_back(e.id);
  }
  auto join = [](const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
    return out;
  };
  if (sources.empty()) diagnostics.push_back("network has no source");
  if (sources.size() > 1)
    diagnostics.push_back("network has " + std::to_string(sources.size()) +
                          " sources (" + join(sources) + "); exactly one is allowed");
  if (detectors.empty()) diagnostics.push_back("network has no detector");
  if (detectors.size() > 1)
    diagnostics.push_back("network has " + std::to_string(detectors.size()) +
                          " detectors (" + join(detectors) + "); exactly one is allowed");

  for (const auto& e : network.elements())
    if (e.type == ElementType::beam_splitter &&
        !(e.reflect_fraction > 0.0 && e.reflect_fraction < 1.0))
      diagnostics.push_back("beam splitter \"" + e.id + "\": reflect_fraction " +
                            std::to_string(e.reflect_fraction) +
                            " must lie strictly between 0 and 1");

  if (has_cycle(network)) diagnostics.push_back("network wiring contains a cycle");

  // Connectivity checks only make sense for a well-formed skeleton.
  if (sources.size() == 1 && detectors.size() == 1 && !has_cycle(network)) {
    const auto from_source = reach_forward(network, sources.front());
    const auto to_detector = reach_backward(network, detectors.front());

    for (const auto& e : network.elements())
      if (!from_source.count(e.id) && !to_detector.count(e.id))
        diagnostics.push_back("element \"" + e.id +
                              "\" is wired to neither the source nor the detector side");

    // A mirror must sit on a source->detector route (blocks regarded as
    // transparent wiring) or be fed from behind a block.
    std::set<std::string> behind_block;
    for (const auto& e : network.elements())
      if (e.type == ElementType::block)
        behind_block.merge(reach_forward(network, e.id));
    for (const auto& e : network.elements()) {
      if (e.type != ElementType::mirror) continue;
      if (!from_source.count(e.id) && !to_detector.count(e.id)) continue;  // already an orphan
      const bool on_route = from_source.count(e.id) && to_detector.count(e.id);
      if (!on_route && !behind_block.count(e.id))
        diagnostics.push_back("mirror \"" + e.id +
                              "\" does not lie on a source-to-detector route and is not fed "
                              "from a block (declare intentional dark arms with a block)");
    }
  }

  return diagnostics;
}

OpticalNetwork apply_block(const OpticalNetwork& network, const std::string& edge_id) {
  const Edge* target = nullptr;
  for (const auto& e : network.edges())
    if (e.id() == edge_id) {
      target = &e;
      break;
    }
  if (!target)
    throw std::out_of_range("apply_block: no edge \"" + edge_id + "\" in the network");

  std::string block_id = "block_" + target->from_element + "_" + target->from_port;
  while (network.find(block_id)) block_id += "_";

  OpticalNetwork result;
  for (const auto& e : network.elements()) {
    switch (e.type) {
      case ElementType::source:        result.add_source(e.id); break;
      case ElementType::detector:      result.add_detector(e.id); break;
      case ElementType::beam_splitter: result.add_beam_splitter(e.id, e.reflect_fraction); break;
      case ElementType::mirror:        result.add_mirror(e.id, e.static_phase_rad, e.vibration); break;
      case ElementType::block:         result.add_block(e.id); break;
    }
  }
  result.add_block(block_id);
  for (const auto& e : network.edges()) {
    if (&e == target) continue;
    result.connect(e.from_element + "." + e.from_port, e.to_element + "." + e.to_port);
  }
  result.connect(target->from_element + "." + target->from_port, block_id + ".in");
  result.connect(block_id + ".out", target->to_element + "." + target->to_port);
  return result;
}

}  // namespace mzi
