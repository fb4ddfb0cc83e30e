#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dots/error.hpp"
#include "dots/lens.hpp"

namespace dots {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p"; throws InvalidValue.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

/// The effect an update lands in. Its lax-monoidal pairing multiplies branch weights.
enum class Effect { identity, powerset, distribution };

std::string_view to_string(Effect e) noexcept;
Effect parse_effect(std::string_view name);

struct Branch {
  std::size_t state = 0;
  Rational weight = 1;
  friend bool operator==(const Branch&, const Branch&) = default;
};

/// One update row: exactly one branch (identity), a sorted set of branches with
/// unit weight (powerset), or a sorted distribution summing to 1.
using Outcome = std::vector<Branch>;

/// A generalized Moore machine: readout S -> O, update S x I -> F(S).
/// update is indexed by state * |I| + input.
struct Machine {
  Effect effect = Effect::identity;
  FiniteSpace states;
  Interface iface;
  std::vector<std::size_t> readout;
  std::vector<Outcome> update;

  const Outcome& step(std::size_t state, std::size_t input) const {
    return update.at(state * iface.input.size() + input);
  }
  std::size_t read(std::size_t state) const { return readout.at(state); }

  /// Throws unless tables are total, in range and well-formed for the effect.
  void validate() const;

  friend bool operator==(const Machine&, const Machine&) = default;
};

Machine deterministic_machine(FiniteSpace states, Interface iface, std::vector<std::size_t> readout,
                              std::vector<std::size_t> next);

/// states unchanged; readout' = fwd . readout; update'(s, i') = update(s, bwd(readout(s), i')).
Machine act_lens(const Machine& m, const Lens& l);

/// States S1 x S2 with interleaved arguments and the effect's pairing.
Machine parallel(const Machine& a, const Machine& b);
Machine parallel(std::span<const Machine> ms);

/// act_lens(parallel(ms), dwd_to_lens(d)); box k is driven by ms[k].
Machine compose_via_dwd(const DirectedWiringDiagram& d, std::span<const Machine> ms);

struct Trace {
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> states;
  std::vector<std::size_t> outputs;
  /// Set when a powerset update ran out of successors before the inputs did.
  bool truncated = false;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct WeightedTrace {
  Trace trace;
  Rational weight = 1;
};

struct SimulationLimits {
  std::size_t max_traces = 100000;
};

/// Deterministic run; throws EffectMismatch for other effects.
Trace simulate(const Machine& m, std::size_t init, std::span<const std::size_t> inputs);

/// All runs: one (identity), every branch (powerset, unit weights), or the
/// exact distribution over traces. HorizonTooLarge past the trace limit.
std::vector<WeightedTrace> simulate_all(const Machine& m, std::size_t init,
                                        std::span<const std::size_t> inputs,
                                        SimulationLimits limits = {});

/// A system map along a chart: readout and update squares.
struct MachineMap {
  Chart chart;
  std::vector<std::size_t> state_map;
};

struct MapCheckOptions {
  /// Source states exempt from the update square (the edge of a finite window).
  std::vector<std::size_t> boundary_states;
};

/// Update square per effect: equality (identity), image containment
/// (powerset), pushforward equality (distribution).
Verdict check_machine_map(const MachineMap& mm, const Machine& m1, const Machine& m2,
                          const MapCheckOptions& options = {});

MachineMap compose_maps(const MachineMap& first, const MachineMap& second);

/// Transports a machine map along a square of interactions: `top` acts on the
/// source machine, `bottom` on the target, and `right` relates their codomains.
/// The state map is unchanged; throws InvalidLeg when the square fails.
MachineMap act_square(const MachineMap& mm, const Lens& top, const Lens& bottom, const Chart& right);

/// The horizon-T window of the timeline system: states t0..tT, readout the
/// time, one input that advances the clock. tT is the window edge.
Machine timeline_window(std::size_t horizon);

/// Every state sequence s_0..s_T with readout o_k and s_{k+1} reachable from
/// (s_k, i_k), for the behaviour described by a trajectory chart.
std::vector<std::vector<std::size_t>> enumerate_trajectories(const Machine& m, const Chart& chart,
                                                             std::size_t horizon);

/// The trajectory map timeline_window(T) -> m given a state sequence.
MachineMap trajectory_map(const Chart& chart, std::span<const std::size_t> states);

}  // namespace dots
