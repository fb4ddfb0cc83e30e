#pragma once

#include <string>

#include "dots/dsl.hpp"
#include "dots/machine.hpp"
#include "dots/petri.hpp"

namespace dots {

/// Species as circles, transitions as squares, ports as plain labels.
std::string render_dot(const OpenPetriNet& net);
/// Junctions as circles; each box a record whose fields are its ports.
std::string render_dot(const Uwd& uwd);
std::string render_dot(const DirectedWiringDiagram& d);
/// States as circles, one edge per update branch.
std::string render_dot(const Machine& m);

}  // namespace dots
