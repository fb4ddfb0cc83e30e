#include "dots/dot.hpp"

#include <sstream>

namespace dots {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Record labels treat these as structure.
std::string record_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::string_view("{}|<>\" \\").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string render_dot(const OpenPetriNet& open) {
  const PetriNet& net = open.net;
  std::ostringstream out;
  out << "digraph petri {\n  rankdir=LR;\n";
  for (std::size_t s = 0; s < net.num_species(); ++s)
    out << "  s" << s << " [shape=circle, label=" << quote(net.species[s]) << "];\n";
  for (std::size_t t = 0; t < net.num_transitions(); ++t)
    out << "  t" << t << " [shape=square, label=" << quote(net.transitions[t]) << "];\n";
  auto arc = [&](const std::string& from, const std::string& to, std::size_t n) {
    out << "  " << from << " -> " << to;
    if (n > 1) out << " [label=\"" << n << "\"]";
    out << ";\n";
  };
  for (std::size_t t = 0; t < net.num_transitions(); ++t) {
    for (auto [s, n] : net.src[t].entries()) arc("s" + std::to_string(s), "t" + std::to_string(t), n);
    for (auto [s, n] : net.tgt[t].entries()) arc("t" + std::to_string(t), "s" + std::to_string(s), n);
  }
  for (std::size_t p = 0; p < open.interface(); ++p) {
    out << "  p" << p << " [shape=plaintext, label=\"" << p << "\"];\n";
    out << "  p" << p << " -> s" << open.ports(p) << " [style=dashed, arrowhead=none];\n";
  }
  out << "}\n";
  return out.str();
}

std::string render_dot(const Uwd& uwd) {
  std::ostringstream out;
  out << "graph uwd {\n";
  for (std::size_t j = 0; j < uwd.junctions.size(); ++j) {
    std::string label = uwd.junctions[j];
    if (uwd.typed()) label += " : " + uwd.types.at(uwd.junction_types.at(j));
    out << "  j" << j << " [shape=circle, label=" << quote(label) << "];\n";
  }
  auto box = [&](const std::string& id, const std::string& name, const std::vector<UwdPort>& ports) {
    out << "  " << id << " [shape=record, label=\"" << record_escape(name) << "|{";
    for (std::size_t k = 0; k < ports.size(); ++k)
      out << (k ? "|" : "") << "<p" << k << "> " << record_escape(ports[k].name);
    out << "}\"];\n";
    for (std::size_t k = 0; k < ports.size(); ++k) out << "  " << id << ":p" << k << " -- j" << ports[k].junction << ";\n";
  };
  for (std::size_t b = 0; b < uwd.boxes.size(); ++b) box("b" + std::to_string(b), uwd.boxes[b].name, uwd.boxes[b].ports);
  if (!uwd.outer.empty()) box("outer", "outer", uwd.outer);
  out << "}\n";
  return out.str();
}

std::string render_dot(const DirectedWiringDiagram& d) {
  std::ostringstream out;
  out << "digraph dwd {\n  rankdir=LR;\n";
  auto fields = [&](const char* prefix, const std::vector<PortDecl>& ps) {
    std::string s = "{";
    for (std::size_t k = 0; k < ps.size(); ++k)
      s += (k ? "|" : "") + std::string("<") + prefix + std::to_string(k) + "> " + record_escape(ps[k].name);
    return s + "}";
  };
  auto node = [&](const std::string& id, const std::string& name, const BoxDecl& b) {
    out << "  " << id << " [shape=record, label=\"{" << fields("i", b.inputs) << "|" << record_escape(name) << "|"
        << fields("o", b.outputs) << "}\"];\n";
  };
  for (std::size_t b = 0; b < d.boxes.size(); ++b) node("b" + std::to_string(b), d.boxes[b].name, d.boxes[b]);
  out << "  outer_in [shape=record, label=\"" << fields("o", d.outer.inputs) << "\"];\n";
  out << "  outer_out [shape=record, label=\"" << fields("i", d.outer.outputs) << "\"];\n";
  for (const auto& w : d.wires) {
    std::string from = w.source.box ? "b" + std::to_string(*w.source.box) : "outer_in";
    std::string to = w.sink.box ? "b" + std::to_string(*w.sink.box) : "outer_out";
    out << "  " << from << ":o" << w.source.port << " -> " << to << ":i" << w.sink.port << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string render_dot(const Machine& m) {
  std::ostringstream out;
  out << "digraph machine {\n";
  for (std::size_t s = 0; s < m.states.size(); ++s)
    out << "  s" << s << " [shape=circle, label=" << quote(m.states.name(s) + " / " + m.iface.output.name(m.read(s)))
        << "];\n";
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    for (std::size_t i = 0; i < m.iface.input.size(); ++i) {
      for (const auto& b : m.step(s, i)) {
        std::string label = m.iface.input.name(i);
        if (m.effect == Effect::distribution) label += " (" + to_string(b.weight) + ")";
        out << "  s" << s << " -> s" << b.state << " [label=" << quote(label) << "];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace dots
