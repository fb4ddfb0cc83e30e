#pragma once

#include <string>

#include "json.hpp"

#include "dots/finset.hpp"
#include "dots/machine.hpp"
#include "dots/ode.hpp"
#include "dots/petri.hpp"
#include "dots/wiring.hpp"

namespace dots::io {

using nlohmann::json;

inline constexpr int format_version = 1;

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

json to_json(const FinFunction& f);
FinFunction finfunction_from_json(const json& j);

json to_json(const TypedFinSet& s);
TypedFinSet typed_set_from_json(const json& j);

json to_json(const Cospan& c);
Cospan cospan_from_json(const json& j);

/// {"species": [...], "transitions": [{"name", "src": {"S": 1}, "tgt": {...}}], "ports": [...]}
json to_json(const OpenPetriNet& net);
OpenPetriNet open_petri_from_json(const json& j);

/// Interface map as port indices; species and transitions keyed by name.
json to_json(const OpenPetriMap& m, const OpenPetriNet& from, const OpenPetriNet& to);
OpenPetriMap open_petri_map_from_json(const json& j, const OpenPetriNet& from, const OpenPetriNet& to);

/// Dense tables by name; distribution rows use rational strings such as "1/3".
json to_json(const Machine& m);
Machine machine_from_json(const json& j);

json to_json(const MachineMap& mm, const Machine& from, const Machine& to);
MachineMap machine_map_from_json(const json& j, const Machine& from, const Machine& to);

/// {"state", "inputs", "outputs": [{"name","expr"}], "field": [{"var","expr"}], "params"}.
/// Parameters are inlined as constants on load.
json to_json(const OdeSystem& sys);
OdeSystem ode_from_json(const json& j);

json to_json(const DirectedWiringDiagram& d);
DirectedWiringDiagram dwd_from_json(const json& j);

json to_json(const Trace& t, const Machine& m);
json to_json(const std::vector<WeightedTrace>& ts, const Machine& m);
json to_json(const VectorTrace& t, const OdeSystem& sys);

/// The "kind" tag of a system file, inferred from its keys when absent.
std::string kind_of(const json& j);

}  // namespace dots::io
