#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dots/error.hpp"
#include "dots/wiring.hpp"

namespace dots {

/// A finite set of named values; index order is declaration order.
class FiniteSpace {
 public:
  FiniteSpace() = default;
  explicit FiniteSpace(std::vector<std::string> names);

  /// {"0", ..., "n-1"}.
  static FiniteSpace range(std::size_t n);
  /// The one-point space, unit of the product.
  static FiniteSpace unit() { return FiniteSpace({"*"}); }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Like index_of but throws UnknownName.
  std::size_t at(std::string_view name) const;

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

 private:
  std::vector<std::string> names_;
};

/// Row-major product; element names are the factor names joined by ':'.
FiniteSpace product(std::span<const FiniteSpace> factors);
FiniteSpace product(const FiniteSpace& a, const FiniteSpace& b);

/// An interface {input / output}.
struct Interface {
  FiniteSpace input;
  FiniteSpace output;

  friend bool operator==(const Interface&, const Interface&) = default;
};

/// Same cardinalities; value names are labels only.
bool same_shape(const Interface& a, const Interface& b);
Interface parallel(const Interface& a, const Interface& b);

/// A lens dom -> cod: forward on outputs, backward on inputs.
/// fwd has |dom.output| entries, bwd is indexed by o * |cod.input| + i.
struct Lens {
  Interface dom;
  Interface cod;
  std::vector<std::size_t> fwd;
  std::vector<std::size_t> bwd;

  std::size_t forward(std::size_t o) const { return fwd.at(o); }
  std::size_t backward(std::size_t o, std::size_t i) const { return bwd.at(o * cod.input.size() + i); }

  static Lens identity(const Interface& iface);
  friend bool operator==(const Lens&, const Lens&) = default;
};

Verdict check_lens(const Lens& l);

Lens lens_compose(const Lens& first, const Lens& second);
Lens lens_parallel(const Lens& a, const Lens& b);

/// Lenses as loose morphisms: composition is strict, so the oracle is plain
/// composition of tables.
struct LensContract {
  using Object = Interface;
  using Loose = Lens;
  static Object source(const Loose& l) { return l.dom; }
  static Object target(const Loose& l) { return l.cod; }
  static Loose identity(const Object& o) { return Lens::identity(o); }
  static Loose compose(const Loose& a, const Loose& b) { return lens_compose(a, b); }
  static bool legs_admissible(const Loose& l) { return check_lens(l).ok; }
};

/// A chart dom => cod: fwd on outputs, push indexed by o * |dom.input| + i.
struct Chart {
  Interface dom;
  Interface cod;
  std::vector<std::size_t> fwd;
  std::vector<std::size_t> push;

  std::size_t forward(std::size_t o) const { return fwd.at(o); }
  std::size_t pushed(std::size_t o, std::size_t i) const { return push.at(o * dom.input.size() + i); }

  static Chart identity(const Interface& iface);
};

Verdict check_chart(const Chart& c);

/// Vertical composite of charts: `second` after `first`.
Chart compose_charts(const Chart& first, const Chart& second);

/// Checks the square with lenses top/bottom and charts left/right.
Verdict check_lens_square(const Lens& top, const Lens& bottom, const Chart& left, const Chart& right);

/// {tick / t0..tT}: the observable window of the timeline system.
Interface timeline_interface(std::size_t horizon);

/// The behaviour chart of a window: output o_k at time k, input i_k fed at time k.
/// `inputs` may have length T or T+1; a missing last entry repeats the previous one.
Chart trajectory_chart(std::size_t horizon, const Interface& cod, std::span<const std::size_t> inputs,
                       std::span<const std::size_t> outputs);

// ---------------------------------------------------------------------------
// Directed wiring diagrams

/// A port type: finite (named values) or a real coordinate.
struct PortType {
  std::string name;
  std::optional<std::vector<std::string>> values;  // nullopt: real

  bool is_real() const noexcept { return !values.has_value(); }
  friend bool operator==(const PortType&, const PortType&) = default;
};

struct PortDecl {
  std::string name;
  std::string type;
  friend bool operator==(const PortDecl&, const PortDecl&) = default;
};

struct BoxDecl {
  std::string name;
  std::vector<PortDecl> inputs;
  std::vector<PortDecl> outputs;
  friend bool operator==(const BoxDecl&, const BoxDecl&) = default;
};

/// A port of an inner box, or of the outer boundary when `box` is empty.
struct PortRef {
  std::optional<std::size_t> box;
  std::size_t port = 0;
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

/// source: a box output or an outer input; sink: a box input or an outer output.
struct Wire {
  PortRef source;
  PortRef sink;
  friend bool operator==(const Wire&, const Wire&) = default;
};

struct DirectedWiringDiagram {
  std::vector<PortType> types;
  std::vector<BoxDecl> boxes;
  BoxDecl outer;
  std::vector<Wire> wires;

  const PortType& type(std::string_view name) const;
  /// Throws DanglingPort, MultipleFeeds, TypeClash or CyclicThroughOuterInput.
  void validate() const;
  /// The unique source feeding a sink; assumes validate() passed.
  PortRef source_of(const PortRef& sink) const;

  friend bool operator==(const DirectedWiringDiagram&, const DirectedWiringDiagram&) = default;
};

FiniteSpace port_space(const DirectedWiringDiagram& d, std::span<const PortDecl> ports);
Interface box_interface(const DirectedWiringDiagram& d, const BoxDecl& box);
/// The product of all inner box interfaces.
Interface inner_interface(const DirectedWiringDiagram& d);

/// The lens from the product of inner interfaces to the outer interface.
Lens dwd_to_lens(const DirectedWiringDiagram& d);

/// Operadic substitution: replaces box `k` of `outer` by the diagram `inner`.
DirectedWiringDiagram dwd_substitute(const DirectedWiringDiagram& outer, std::size_t k,
                                     const DirectedWiringDiagram& inner);

}  // namespace dots
