#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dots/expr.hpp"
#include "dots/lens.hpp"

namespace dots {

struct NamedExpr {
  std::string name;
  Expr expr;
  friend bool operator==(const NamedExpr&, const NamedExpr&) = default;
};

/// dx/dt = field(x, i), exposed variables outputs(x).
struct OdeSystem {
  std::vector<std::string> state;
  std::vector<std::string> inputs;
  std::vector<NamedExpr> outputs;  // over state variables only
  std::vector<Expr> field;         // one per state variable, over state and inputs

  /// Checks arities, unique names and the free-variable discipline.
  void validate() const;
  friend bool operator==(const OdeSystem&, const OdeSystem&) = default;
};

/// Real coordinates on each side of an interface.
struct VectorInterface {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

/// fwd: one expression per cod output over dom outputs.
/// bwd: one expression per dom input over dom outputs and cod inputs.
struct VectorLens {
  VectorInterface dom;
  VectorInterface cod;
  std::vector<Expr> fwd;
  std::vector<Expr> bwd;

  /// Requires input and output names of `iface` to be disjoint.
  static VectorLens identity(const VectorInterface& iface);
};

VectorLens vector_lens_compose(const VectorLens& first, const VectorLens& second);
/// Concatenation; coordinate names must be disjoint.
VectorLens vector_lens_parallel(const VectorLens& a, const VectorLens& b);

/// Inner coordinates are named "box@port"; outer ones keep their port names.
VectorLens dwd_to_vector_lens(const DirectedWiringDiagram& d);

/// A Moore machine on real vectors: readout(x), next state update(x, i).
struct VectorMachine {
  std::vector<std::string> state;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Expr> readout;
  std::vector<Expr> update;

  std::vector<double> read(std::span<const double> x) const;
  std::vector<double> step(std::span<const double> x, std::span<const double> i) const;
};

/// x + h * field(x, i); readout the exposed variables.
VectorMachine euler(const OdeSystem& sys, double h);

VectorMachine act_lens(const VectorMachine& m, const VectorLens& l);

/// Renames box k's state to "<box>.<var>" and composes along the diagram lens.
VectorMachine compose_via_dwd(const DirectedWiringDiagram& d, std::span<const VectorMachine> ms);

/// Symbolic substitution: composite state "<box>.<var>", each box input
/// replaced by the exposed expression (or outer input) feeding it.
OdeSystem dwd_apply_ode(const DirectedWiringDiagram& d, std::span<const OdeSystem> systems);

struct VectorTrace {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> outputs;
};

using InputSignal = std::function<std::vector<double>(std::size_t step)>;

/// Iterated Euler steps. Throws NonFiniteValue naming the first bad step.
VectorTrace simulate_ode(const OdeSystem& sys, double h, std::size_t steps, std::span<const double> init,
                         const InputSignal& input);

}  // namespace dots
