#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzi {

/// @brief Sinusoidal mirror tilt expressed as the transverse displacement it
/// imprints on the reflected beam: delta(t) = displacement_um * sin(2*pi*f*t + phase).
struct VibrationSpec {
  double frequency_hz = 0.0;
  double displacement_um = 0.0;
  double phase_rad = 0.0;

  /// @brief Build from an angular tilt: a mirror rocking by angle_rad a lever arm
  /// of lever_arm_m away from the detector displaces the beam by angle * arm.
  static VibrationSpec from_tilt(double frequency_hz, double angle_rad,
                                 double lever_arm_m, double phase_rad = 0.0);
};

using VibrationMap = std::map<std::string, VibrationSpec>;

enum class ElementType { source, beam_splitter, mirror, block, detector };

/// @brief One node of an optical network. Which extra fields are meaningful
/// depends on the type: reflect_fraction for splitters, static_phase_rad and
/// vibration for mirrors.
struct Element {
  std::string id;
  ElementType type = ElementType::mirror;
  double reflect_fraction = 0.0;
  double static_phase_rad = 0.0;
  VibrationSpec vibration{};
};

/// @brief Directed connection between an output port and an input port.
/// Its identifier is the origin endpoint ("element.port"); an output port
/// carries at most one edge, so that string is unique.
struct Edge {
  std::string from_element;
  std::string from_port;
  std::string to_element;
  std::string to_port;

  std::string id() const { return from_element + "." + from_port; }
};

/// @brief Thrown when a walk revisits an element (the wiring has a cycle).
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// @brief Directed multigraph of optical elements.
///
/// Port names by element type:
///   source:        out
///   beam_splitter: a, b (inputs); t, r (outputs)
///   mirror, block: in, out
///   detector:      in
///
/// Amplitude factors along a traversal: transmission through a splitter with
/// reflected power fraction r contributes sqrt(1-r), reflection contributes
/// i*sqrt(r) (inputs a->t / b->r transmit, a->r / b->t reflect); a mirror
/// contributes exp(i*static_phase). Blocks absorb; unconnected ports discard
/// power silently.
///
/// Networks are meant to be immutable once wired: build with the add_*/connect
/// calls, then treat the object as read-only. All free functions below are
/// pure and safe to call concurrently on the same network.
class OpticalNetwork {
 public:
  void add_source(const std::string& id);
  void add_detector(const std::string& id);
  void add_beam_splitter(const std::string& id, double reflect_fraction);
  void add_mirror(const std::string& id, double static_phase_rad = 0.0,
                  const VibrationSpec& vibration = {});
  void add_block(const std::string& id);

  /// @brief Wire "element.port" (an output) to "element.port" (an input).
  /// Throws std::invalid_argument on unknown endpoints, direction misuse, or
  /// an already-wired port.
  void connect(const std::string& from, const std::string& to);

  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Element* find(const std::string& id) const;
  /// @brief Ids of all mirror elements, in insertion order.
  std::vector<std::string> mirror_ids() const;

  /// @brief Edge leaving the given output port, if any.
  const Edge* edge_from(const std::string& element_id, const std::string& port) const;
  /// @brief Edge entering the given input port, if any.
  const Edge* edge_into(const std::string& element_id, const std::string& port) const;

 private:
  void add_element(Element e);

  std::vector<Element> elements_;
  std::vector<Edge> edges_;
};

/// @brief One element visit of a path: how the route entered and left.
struct PathStep {
  std::string element;
  std::string in_port;   // empty for the source
  std::string out_port;  // empty for the detector
};

/// @brief A single source-to-detector route with its accumulated amplitude.
struct OpticalPath {
  std::vector<std::string> element_sequence;  // source first, detector last
  std::vector<std::string> mirrors;           // mirror ids in traversal order
  std::complex<double> amplitude{0.0, 0.0};
  std::vector<PathStep> steps;                // full traversal detail
};

/// @brief Amplitude factor a splitter applies between two of its ports.
/// Throws std::invalid_argument for port pairs that are not input->output.
std::complex<double> splitter_factor(double reflect_fraction,
                                     const std::string& in_port,
                                     const std::string& out_port);

/// @brief Every route from the source to the detector, in lexicographic order
/// of the element-id sequence. Routes hitting a block are dropped. A network
/// without a route yields an empty list. Throws TopologyError if a walk
/// revisits an element.
std::vector<OpticalPath> enumerate_paths(const OpticalNetwork& network);

/// @brief Recompute the amplitude of a path against a network (product of the
/// splitter/mirror factors along its steps). Throws std::invalid_argument if
/// the path does not belong to the network.
std::complex<double> path_amplitude(const OpticalNetwork& network, const OpticalPath& path);

/// @brief Structural diagnostics: duplicate ids, missing/multiple source or
/// detector, splitter fractions outside (0,1), cycles, elements wired to
/// neither side, mirrors that cannot reach the detector and are not shielded
/// by a block. Empty result means the network is well-formed.
std::vector<std::string> validate(const OpticalNetwork& network);

/// @brief Copy of the network with an absorber spliced into the given edge
/// (edge id = "element.port" of its origin). Throws std::out_of_range if no
/// such edge exists.
OpticalNetwork apply_block(const OpticalNetwork& network, const std::string& edge_id);

}  // namespace mzi
