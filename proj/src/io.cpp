#include "dots/io.hpp"

#include <algorithm>
#include <map>

namespace dots::io {

namespace {

[[noreturn]] void bad(const std::string& msg) { fail(ErrorCode::invalid_value, msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<std::string> names_of(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) bad(std::string("field \"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& v : a) {
    if (!v.is_string()) bad(std::string("field \"") + key + "\" must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::string> optional_names(const json& j, const char* key) {
  return j.contains(key) ? names_of(j, key) : std::vector<std::string>{};
}

std::size_t lookup(const std::vector<std::string>& names, const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) fail(ErrorCode::unknown_name, std::string("unknown ") + what + " \"" + name + "\"");
  return static_cast<std::size_t>(it - names.begin());
}

json header(const char* kind) {
  json j = json::object();
  j["format"] = format_version;
  j["kind"] = kind;
  return j;
}

void check_format(const json& j) {
  if (!j.is_object()) bad("expected a JSON object");
  if (j.contains("format") && j.at("format") != format_version)
    bad("unsupported format version " + j.at("format").dump());
}

json multiset_json(const Multiset& ms, const PetriNet& net) {
  json o = json::object();
  for (auto [s, n] : ms.entries()) o[net.species.at(s)] = n;
  return o;
}

Multiset multiset_from(const json& o, const std::vector<std::string>& species) {
  if (!o.is_object()) bad("multiset must be an object of species counts");
  std::vector<Multiset::Entry> es;
  for (auto it = o.begin(); it != o.end(); ++it) {
    if (!it.value().is_number_unsigned()) bad("multiplicity of \"" + it.key() + "\" must be a natural number");
    es.emplace_back(lookup(species, it.key(), "species"), it.value().get<std::size_t>());
  }
  return Multiset(std::move(es));
}

json name_map(const FinFunction& f, const std::vector<std::string>& from, const std::vector<std::string>& to) {
  json o = json::object();
  for (std::size_t k = 0; k < f.dom(); ++k) o[from.at(k)] = to.at(f(k));
  return o;
}

FinFunction name_map_from(const json& o, const std::vector<std::string>& from,
                          const std::vector<std::string>& to, const char* what) {
  if (!o.is_object()) bad(std::string(what) + " map must be an object");
  std::vector<std::size_t> table(from.size());
  std::vector<bool> seen(from.size(), false);
  for (auto it = o.begin(); it != o.end(); ++it) {
    std::size_t k = lookup(from, it.key(), what);
    if (!it.value().is_string()) bad(std::string(what) + " map values must be names");
    table[k] = lookup(to, it.value().get<std::string>(), what);
    seen[k] = true;
  }
  for (std::size_t k = 0; k < from.size(); ++k)
    if (!seen[k]) bad(std::string(what) + " map is missing \"" + from[k] + "\"");
  return FinFunction(to.size(), std::move(table));
}

}  // namespace

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json to_json(const FinFunction& f) {
  json j;
  j["dom"] = f.dom();
  j["cod"] = f.cod();
  j["table"] = std::vector<std::size_t>(f.table().begin(), f.table().end());
  return j;
}

FinFunction finfunction_from_json(const json& j) {
  auto table = field(j, "table").get<std::vector<std::size_t>>();
  if (j.contains("dom") && j.at("dom").get<std::size_t>() != table.size())
    fail(ErrorCode::domain_mismatch, "\"dom\" disagrees with the table length");
  return FinFunction(field(j, "cod").get<std::size_t>(), std::move(table));
}

json to_json(const TypedFinSet& s) {
  json j;
  j["types"] = s.types;
  j["typing"] = std::vector<std::size_t>(s.typing.table().begin(), s.typing.table().end());
  return j;
}

TypedFinSet typed_set_from_json(const json& j) {
  TypedFinSet s;
  s.types = names_of(j, "types");
  s.typing = FinFunction(s.types.size(), field(j, "typing").get<std::vector<std::size_t>>());
  return s;
}

json to_json(const Cospan& c) {
  json j = header("cospan");
  j["left"] = to_json(c.left());
  j["right"] = to_json(c.right());
  if (const auto& t = c.typing()) {
    j["types"] = t->types;
    j["typing"] = {{"inner", to_json(t->inner)}, {"outer", to_json(t->outer)}, {"apex", to_json(t->apex)}};
  }
  return j;
}

Cospan cospan_from_json(const json& j) {
  check_format(j);
  auto left = finfunction_from_json(field(j, "left"));
  auto right = finfunction_from_json(field(j, "right"));
  std::optional<CospanTyping> typing;
  if (j.contains("typing")) {
    const json& t = j.at("typing");
    typing = CospanTyping{names_of(j, "types"), finfunction_from_json(field(t, "inner")),
                          finfunction_from_json(field(t, "outer")), finfunction_from_json(field(t, "apex"))};
  }
  return Cospan(std::move(left), std::move(right), std::move(typing));
}

json to_json(const OpenPetriNet& open) {
  const PetriNet& net = open.net;
  json j = header("open_petri_net");
  j["species"] = net.species;
  json ts = json::array();
  for (std::size_t t = 0; t < net.num_transitions(); ++t)
    ts.push_back({{"name", net.transitions[t]},
                  {"src", multiset_json(net.src[t], net)},
                  {"tgt", multiset_json(net.tgt[t], net)}});
  j["transitions"] = ts;
  json ports = json::array();
  for (std::size_t p = 0; p < open.ports.dom(); ++p) ports.push_back(net.species.at(open.ports(p)));
  j["ports"] = ports;
  if (!open.port_types.empty()) j["port_types"] = open.port_types;
  return j;
}

OpenPetriNet open_petri_from_json(const json& j) {
  check_format(j);
  OpenPetriNet open;
  PetriNet& net = open.net;
  net.species = names_of(j, "species");
  const json& ts = field(j, "transitions");
  if (!ts.is_array()) bad("\"transitions\" must be an array");
  for (const auto& t : ts) {
    net.transitions.push_back(field(t, "name").get<std::string>());
    net.src.push_back(multiset_from(t.value("src", json::object()), net.species));
    net.tgt.push_back(multiset_from(t.value("tgt", json::object()), net.species));
  }
  std::vector<std::size_t> ports;
  for (const auto& p : optional_names(j, "ports")) ports.push_back(lookup(net.species, p, "species"));
  open.ports = FinFunction(net.num_species(), std::move(ports));
  open.port_types = optional_names(j, "port_types");
  open.validate();
  return open;
}

json to_json(const OpenPetriMap& m, const OpenPetriNet& from, const OpenPetriNet& to) {
  json j = header("open_petri_map");
  j["interface"] = std::vector<std::size_t>(m.interface_map.table().begin(), m.interface_map.table().end());
  j["species"] = name_map(m.net_map.species, from.net.species, to.net.species);
  j["transitions"] = name_map(m.net_map.transitions, from.net.transitions, to.net.transitions);
  return j;
}

OpenPetriMap open_petri_map_from_json(const json& j, const OpenPetriNet& from, const OpenPetriNet& to) {
  check_format(j);
  OpenPetriMap m;
  m.interface_map = FinFunction(to.interface(), field(j, "interface").get<std::vector<std::size_t>>());
  if (m.interface_map.dom() != from.interface())
    fail(ErrorCode::domain_mismatch, "interface map has " + std::to_string(m.interface_map.dom()) +
                                         " entries for an interface of size " + std::to_string(from.interface()));
  m.net_map.species = name_map_from(field(j, "species"), from.net.species, to.net.species, "species");
  m.net_map.transitions =
      name_map_from(field(j, "transitions"), from.net.transitions, to.net.transitions, "transition");
  return m;
}

json to_json(const Machine& m) {
  json j = header("machine");
  j["effect"] = std::string(to_string(m.effect));
  j["states"] = m.states.names();
  j["inputs"] = m.iface.input.names();
  j["outputs"] = m.iface.output.names();
  json readout = json::array();
  for (auto o : m.readout) readout.push_back(m.iface.output.name(o));
  j["readout"] = readout;
  json update = json::array();
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    json row = json::array();
    for (std::size_t i = 0; i < m.iface.input.size(); ++i) {
      const Outcome& out = m.step(s, i);
      switch (m.effect) {
        case Effect::identity:
          row.push_back(m.states.name(out.at(0).state));
          break;
        case Effect::powerset: {
          json set = json::array();
          for (const auto& b : out) set.push_back(m.states.name(b.state));
          row.push_back(set);
          break;
        }
        case Effect::distribution: {
          json dist = json::object();
          for (const auto& b : out) dist[m.states.name(b.state)] = to_string(b.weight);
          row.push_back(dist);
          break;
        }
      }
    }
    update.push_back(row);
  }
  j["update"] = update;
  return j;
}

Machine machine_from_json(const json& j) {
  check_format(j);
  Machine m;
  m.effect = parse_effect(j.value("effect", std::string("identity")));
  m.states = FiniteSpace(names_of(j, "states"));
  m.iface.input = FiniteSpace(names_of(j, "inputs"));
  m.iface.output = FiniteSpace(names_of(j, "outputs"));
  for (const auto& o : names_of(j, "readout")) m.readout.push_back(m.iface.output.at(o));
  const json& update = field(j, "update");
  if (!update.is_array() || update.size() != m.states.size())
    fail(ErrorCode::arity_mismatch, "\"update\" needs one row per state");
  for (std::size_t s = 0; s < update.size(); ++s) {
    const json& row = update[s];
    if (!row.is_array() || row.size() != m.iface.input.size())
      fail(ErrorCode::arity_mismatch, "update row for state \"" + m.states.name(s) + "\" needs one entry per input");
    for (const auto& cell : row) {
      Outcome out;
      switch (m.effect) {
        case Effect::identity:
          out.push_back({m.states.at(cell.get<std::string>()), 1});
          break;
        case Effect::powerset:
          if (!cell.is_array()) bad("powerset update entries must be arrays of states");
          for (const auto& t : cell) out.push_back({m.states.at(t.get<std::string>()), 1});
          break;
        case Effect::distribution:
          if (!cell.is_object()) bad("distribution update entries must be objects of rational strings");
          for (auto it = cell.begin(); it != cell.end(); ++it) {
            Rational w = it.value().is_string() ? parse_rational(it.value().get<std::string>())
                                                : Rational(it.value().get<long long>());
            if (w != 0) out.push_back({m.states.at(it.key()), w});
          }
          break;
      }
      std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) { return a.state < b.state; });
      if (m.effect == Effect::powerset)
        out.erase(std::unique(out.begin(), out.end()), out.end());
      m.update.push_back(std::move(out));
    }
  }
  m.validate();
  return m;
}

json to_json(const MachineMap& mm, const Machine& from, const Machine& to) {
  json j = header("machine_map");
  const Chart& c = mm.chart;
  json fwd = json::object();
  json push = json::object();
  for (std::size_t o = 0; o < c.dom.output.size(); ++o) {
    fwd[from.iface.output.name(o)] = to.iface.output.name(c.forward(o));
    json row = json::object();
    for (std::size_t i = 0; i < c.dom.input.size(); ++i)
      row[from.iface.input.name(i)] = to.iface.input.name(c.pushed(o, i));
    push[from.iface.output.name(o)] = row;
  }
  j["chart"] = {{"fwd", fwd}, {"push", push}};
  json states = json::object();
  for (std::size_t s = 0; s < mm.state_map.size(); ++s) states[from.states.name(s)] = to.states.name(mm.state_map[s]);
  j["states"] = states;
  return j;
}

MachineMap machine_map_from_json(const json& j, const Machine& from, const Machine& to) {
  check_format(j);
  MachineMap mm;
  Chart& c = mm.chart;
  c.dom = from.iface;
  c.cod = to.iface;
  const json& chart = field(j, "chart");
  auto fwd = name_map_from(field(chart, "fwd"), from.iface.output.names(), to.iface.output.names(), "output");
  c.fwd.assign(fwd.table().begin(), fwd.table().end());
  const json& push = field(chart, "push");
  for (const auto& o : from.iface.output.names()) {
    if (!push.contains(o)) bad("chart push is missing output \"" + o + "\"");
    auto row = name_map_from(push.at(o), from.iface.input.names(), to.iface.input.names(), "input");
    c.push.insert(c.push.end(), row.table().begin(), row.table().end());
  }
  auto states = name_map_from(field(j, "states"), from.states.names(), to.states.names(), "state");
  mm.state_map.assign(states.table().begin(), states.table().end());
  return mm;
}

json to_json(const OdeSystem& sys) {
  json j = header("ode");
  j["state"] = sys.state;
  j["inputs"] = sys.inputs;
  json outs = json::array();
  for (const auto& o : sys.outputs) outs.push_back({{"name", o.name}, {"expr", to_string(o.expr)}});
  j["outputs"] = outs;
  json f = json::array();
  for (std::size_t k = 0; k < sys.field.size(); ++k)
    f.push_back({{"var", sys.state.at(k)}, {"expr", to_string(sys.field[k])}});
  j["field"] = f;
  j["params"] = json::object();
  return j;
}

OdeSystem ode_from_json(const json& j) {
  check_format(j);
  std::map<std::string, Expr> params;
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) bad("\"params\" must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (!it.value().is_number()) bad("parameter \"" + it.key() + "\" must be a number");
      params.emplace(it.key(), Expr::constant(it.value().get<double>()));
    }
  }
  auto load = [&](const json& e) {
    if (!e.is_string()) bad("expressions must be strings");
    return substitute(parse_expr(e.get<std::string>()), params);
  };
  OdeSystem sys;
  sys.state = names_of(j, "state");
  sys.inputs = optional_names(j, "inputs");
  for (const auto& o : j.value("outputs", json::array()))
    sys.outputs.push_back({field(o, "name").get<std::string>(), load(field(o, "expr"))});
  std::vector<std::optional<Expr>> f(sys.state.size());
  for (const auto& e : field(j, "field")) {
    std::size_t k = lookup(sys.state, field(e, "var").get<std::string>(), "state variable");
    if (f[k]) bad("duplicate field entry for \"" + sys.state[k] + "\"");
    f[k] = load(field(e, "expr"));
  }
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!f[k]) bad("no field entry for \"" + sys.state[k] + "\"");
    sys.field.push_back(*f[k]);
  }
  sys.validate();
  return sys;
}

namespace {

json ports_json(const std::vector<PortDecl>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back({{"name", p.name}, {"type", p.type}});
  return a;
}

std::vector<PortDecl> ports_from(const json& a) {
  std::vector<PortDecl> ps;
  for (const auto& p : a) ps.push_back({field(p, "name").get<std::string>(), field(p, "type").get<std::string>()});
  return ps;
}

json box_json(const BoxDecl& b) {
  return {{"name", b.name}, {"in", ports_json(b.inputs)}, {"out", ports_json(b.outputs)}};
}

BoxDecl box_from(const json& b) {
  return {b.value("name", std::string()), ports_from(b.value("in", json::array())),
          ports_from(b.value("out", json::array()))};
}

}  // namespace

json to_json(const DirectedWiringDiagram& d) {
  json j = header("dwd");
  json types = json::array();
  for (const auto& t : d.types) {
    json tj = {{"name", t.name}};
    if (t.values) tj["values"] = *t.values;
    else tj["values"] = "real";
    types.push_back(tj);
  }
  j["types"] = types;
  json boxes = json::array();
  for (const auto& b : d.boxes) boxes.push_back(box_json(b));
  j["boxes"] = boxes;
  json outer = box_json(d.outer);
  outer.erase("name");
  j["outer"] = outer;
  auto end = [&](const PortRef& r, bool source) -> json {
    if (!r.box) return {{"box", "outer"}, {"port", (source ? d.outer.inputs : d.outer.outputs).at(r.port).name}};
    const BoxDecl& b = d.boxes.at(*r.box);
    return {{"box", b.name}, {"port", (source ? b.outputs : b.inputs).at(r.port).name}};
  };
  json wires = json::array();
  for (const auto& w : d.wires) wires.push_back({{"from", end(w.source, true)}, {"to", end(w.sink, false)}});
  j["wires"] = wires;
  return j;
}

DirectedWiringDiagram dwd_from_json(const json& j) {
  check_format(j);
  DirectedWiringDiagram d;
  for (const auto& t : j.value("types", json::array())) {
    PortType pt{field(t, "name").get<std::string>(), std::nullopt};
    const json& v = field(t, "values");
    if (v.is_array()) pt.values = v.get<std::vector<std::string>>();
    else if (v != "real") bad("type values must be an array of names or \"real\"");
    d.types.push_back(std::move(pt));
  }
  for (const auto& b : j.value("boxes", json::array())) d.boxes.push_back(box_from(b));
  d.outer = box_from(j.value("outer", json::object()));
  auto resolve = [&](const json& e, bool source) {
    std::string box = field(e, "box").get<std::string>();
    std::string port = field(e, "port").get<std::string>();
    auto find_port = [&](const std::vector<PortDecl>& ps) {
      for (std::size_t k = 0; k < ps.size(); ++k)
        if (ps[k].name == port) return k;
      fail(ErrorCode::dangling_port, "no port \"" + box + "." + port + "\"");
    };
    if (box == "outer") return PortRef{std::nullopt, find_port(source ? d.outer.inputs : d.outer.outputs)};
    for (std::size_t b = 0; b < d.boxes.size(); ++b)
      if (d.boxes[b].name == box)
        return PortRef{b, find_port(source ? d.boxes[b].outputs : d.boxes[b].inputs)};
    fail(ErrorCode::unknown_name, "unknown box \"" + box + "\"");
  };
  for (const auto& w : j.value("wires", json::array()))
    d.wires.push_back({resolve(field(w, "from"), true), resolve(field(w, "to"), false)});
  d.validate();
  return d;
}

json to_json(const Trace& t, const Machine& m) {
  json j = header("trace");
  json in = json::array(), st = json::array(), out = json::array();
  for (auto i : t.inputs) in.push_back(m.iface.input.name(i));
  for (auto s : t.states) st.push_back(m.states.name(s));
  for (auto o : t.outputs) out.push_back(m.iface.output.name(o));
  j["inputs"] = in;
  j["states"] = st;
  j["outputs"] = out;
  if (t.truncated) j["truncated"] = true;
  return j;
}

json to_json(const std::vector<WeightedTrace>& ts, const Machine& m) {
  json j = header("traces");
  j["effect"] = std::string(to_string(m.effect));
  json runs = json::array();
  for (const auto& wt : ts) {
    json r = to_json(wt.trace, m);
    r.erase("format");
    r.erase("kind");
    if (m.effect == Effect::distribution) r["weight"] = to_string(wt.weight);
    runs.push_back(r);
  }
  j["runs"] = runs;
  return j;
}

json to_json(const VectorTrace& t, const OdeSystem& sys) {
  json j = header("ode_trace");
  j["state"] = sys.state;
  j["inputs"] = sys.inputs;
  json outs = json::array();
  for (const auto& o : sys.outputs) outs.push_back(o.name);
  j["outputs"] = outs;
  j["states"] = t.states;
  j["input_values"] = t.inputs;
  j["output_values"] = t.outputs;
  return j;
}

std::string kind_of(const json& j) {
  if (!j.is_object()) bad("expected a JSON object");
  if (j.contains("kind")) return j.at("kind").get<std::string>();
  if (j.contains("species")) return j.contains("ports") ? "open_petri_net" : "petri_net";
  if (j.contains("effect") || j.contains("readout")) return "machine";
  if (j.contains("field")) return "ode";
  if (j.contains("wires")) return "dwd";
  if (j.contains("left") && j.contains("right")) return "cospan";
  if (j.contains("chart")) return "machine_map";
  if (j.contains("interface")) return "open_petri_map";
  if (j.contains("table")) return "finfunction";
  bad("cannot tell what kind of file this is");
}

}  // namespace dots::io
