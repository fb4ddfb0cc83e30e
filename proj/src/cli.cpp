#include "dots/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dots/dot.hpp"

namespace dots {

namespace fs = std::filesystem;
using io::json;

std::string kind_name(const Artifact& a) {
  struct Visitor {
    std::string operator()(const OpenPetriNet&) const { return "open_petri_net"; }
    std::string operator()(const Machine&) const { return "machine"; }
    std::string operator()(const OdeSystem&) const { return "ode"; }
    std::string operator()(const Uwd&) const { return "uwd"; }
    std::string operator()(const DirectedWiringDiagram&) const { return "dwd"; }
    std::string operator()(const json& j) const { return io::kind_of(j); }
    std::string operator()(const TimelineSpec&) const { return "timeline"; }
  };
  return std::visit(Visitor{}, a);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

/// Keeps the code (and position) of an error while prefixing the file name.
[[noreturn]] void rethrow_with_path(const fs::path& path) {
  try {
    throw;
  } catch (const SourceError& e) {
    throw SourceError(e.code(), e.line(), e.column(), path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::syntax_error, path.string() + ": " + e.what());
  }
}

Artifact decode(const fs::path& path, const std::string& text) {
  auto ext = path.extension().string();
  if (ext == ".uwd") return parse_uwd(text);
  if (ext == ".dwd") return parse_dwd(text);
  json j = json::parse(text);
  std::string kind = io::kind_of(j);
  if (kind == "open_petri_net" || kind == "petri_net") return io::open_petri_from_json(j);
  if (kind == "machine") return io::machine_from_json(j);
  if (kind == "ode") return io::ode_from_json(j);
  if (kind == "dwd") return io::dwd_from_json(j);
  if (kind == "timeline") return TimelineSpec{j.at("horizon").get<std::size_t>()};
  return j;  // maps and other data, decoded once their endpoints are known
}

}  // namespace

const Artifact& Workspace::load(const fs::path& path) {
  std::error_code ec;
  auto canonical = fs::weakly_canonical(path, ec).string();
  if (auto it = by_path_.find(canonical); it != by_path_.end()) return *it->second;
  std::string text = read_file(path);
  try {
    const Artifact& a = add(path.stem().string(), decode(path, text));
    by_path_.emplace(canonical, &a);
    return a;
  } catch (...) {
    rethrow_with_path(path);
  }
}

const Artifact& Workspace::add(const std::string& name, Artifact value) {
  auto key = std::pair{kind_name(value), name};
  if (entries_.count(key)) fail(ErrorCode::invalid_value, "a " + key.first + " named '" + name + "' is already loaded");
  return entries_.emplace(key, std::move(value)).first->second;
}

namespace {

struct Output {
  std::string path;
  std::ostream& fallback;

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      fallback << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::io_error, "cannot write '" + path + "'");
    f << text;
  }
};

template <class T>
const T& expect_kind(const Artifact& a, const std::string& what, const std::string& wanted) {
  if (const T* v = std::get_if<T>(&a)) return *v;
  fail(ErrorCode::kind_mismatch, what + " is a " + kind_name(a) + ", expected " + wanted);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

/// A value of a finite space by name, by name with the ':' separators dropped,
/// or by index.
std::size_t resolve_value(const FiniteSpace& space, const std::string& text, const char* what) {
  if (auto k = space.index_of(text)) return *k;
  std::optional<std::size_t> hit;
  for (std::size_t k = 0; k < space.size(); ++k) {
    std::string compact = space.name(k);
    std::erase(compact, ':');
    if (compact == text) {
      if (hit) fail(ErrorCode::unknown_name, std::string("ambiguous ") + what + " '" + text + "'");
      hit = k;
    }
  }
  if (hit) return *hit;
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
    std::size_t k = std::stoul(text);
    if (k < space.size()) return k;
  }
  fail(ErrorCode::unknown_name, std::string("unknown ") + what + " '" + text + "'");
}

std::vector<double> parse_numbers(const std::string& csv, const char* what) {
  std::vector<double> out;
  for (const auto& item : split_csv(csv)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) fail(ErrorCode::invalid_value, std::string("bad ") + what + " '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t k = 0; k < cells.size(); ++k) s += (k ? "," : "") + cells[k];
  return s + "\n";
}

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------

struct ComposeArgs {
  std::string diagram;
  std::vector<std::string> systems;
  std::string output;
};

int cmd_compose(const ComposeArgs& a, std::ostream& out) {
  Workspace ws;
  const Artifact& diagram = ws.load(a.diagram);
  std::vector<const Artifact*> systems;
  for (const auto& s : a.systems) systems.push_back(&ws.load(s));

  json result;
  if (const Uwd* uwd = std::get_if<Uwd>(&diagram)) {
    if (systems.size() != uwd->boxes.size())
      fail(ErrorCode::arity_mismatch, "diagram has " + std::to_string(uwd->boxes.size()) + " boxes but " +
                                          std::to_string(systems.size()) + " systems were given");
    std::vector<OpenPetriNet> nets;
    for (std::size_t k = 0; k < systems.size(); ++k) {
      nets.push_back(expect_kind<OpenPetriNet>(*systems[k], a.systems[k], "an open Petri net for an undirected diagram"));
      if (nets.back().interface() != uwd->boxes[k].ports.size())
        fail(ErrorCode::boundary_mismatch, "box '" + uwd->boxes[k].name + "' has " +
                                               std::to_string(uwd->boxes[k].ports.size()) + " ports but " +
                                               a.systems[k] + " exposes " + std::to_string(nets.back().interface()));
    }
    result = io::to_json(uwd_apply(uwd->cospan(), nets, uwd->junctions));
  } else if (const auto* dwd = std::get_if<DirectedWiringDiagram>(&diagram)) {
    if (systems.size() != dwd->boxes.size())
      fail(ErrorCode::arity_mismatch, "diagram has " + std::to_string(dwd->boxes.size()) + " boxes but " +
                                          std::to_string(systems.size()) + " systems were given");
    if (!systems.empty() && std::holds_alternative<OdeSystem>(*systems.front())) {
      std::vector<OdeSystem> odes;
      for (std::size_t k = 0; k < systems.size(); ++k)
        odes.push_back(expect_kind<OdeSystem>(*systems[k], a.systems[k], "an ODE system like the others"));
      result = io::to_json(dwd_apply_ode(*dwd, odes));
    } else {
      std::vector<Machine> ms;
      for (std::size_t k = 0; k < systems.size(); ++k)
        ms.push_back(expect_kind<Machine>(*systems[k], a.systems[k], "a machine or ODE system for a directed diagram"));
      result = io::to_json(compose_via_dwd(*dwd, ms));
    }
  } else {
    fail(ErrorCode::kind_mismatch, a.diagram + " is a " + kind_name(diagram) + ", expected a wiring diagram");
  }
  Output{a.output, out}.write(io::dump(result));
  return 0;
}

struct SimulateArgs {
  std::string system;
  std::string init;
  std::string inputs;
  std::optional<std::size_t> steps;
  std::optional<double> h;
  std::string format = "json";
  std::string output;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  Workspace ws;
  const Artifact& sys = ws.load(a.system);
  std::string text;
  if (const Machine* m = std::get_if<Machine>(&sys)) {
    if (a.h) fail(ErrorCode::invalid_value, "--h only applies to ODE systems");
    std::size_t init = resolve_value(m->states, a.init, "state");
    std::vector<std::size_t> given;
    for (const auto& s : split_csv(a.inputs)) given.push_back(resolve_value(m->iface.input, s, "input"));
    std::size_t steps = a.steps.value_or(given.size());
    if (steps > 0 && given.empty()) fail(ErrorCode::invalid_value, "--inputs is empty");
    std::vector<std::size_t> inputs;
    for (std::size_t k = 0; k < steps; ++k) inputs.push_back(given[k % given.size()]);
    auto runs = simulate_all(*m, init, inputs);
    if (a.format == "csv") {
      bool weighted = m->effect == Effect::distribution;
      text = csv_row(weighted ? std::vector<std::string>{"run", "weight", "step", "input", "state", "output"}
                              : std::vector<std::string>{"run", "step", "input", "state", "output"});
      for (std::size_t r = 0; r < runs.size(); ++r) {
        const Trace& t = runs[r].trace;
        for (std::size_t k = 0; k < t.states.size(); ++k) {
          std::vector<std::string> row{std::to_string(r)};
          if (weighted) row.push_back(to_string(runs[r].weight));
          row.push_back(std::to_string(k));
          row.push_back(k < t.inputs.size() ? m->iface.input.name(t.inputs[k]) : "");
          row.push_back(m->states.name(t.states[k]));
          row.push_back(m->iface.output.name(t.outputs[k]));
          text += csv_row(row);
        }
      }
    } else {
      text = io::dump(m->effect == Effect::identity ? io::to_json(runs.front().trace, *m) : io::to_json(runs, *m));
    }
  } else if (const OdeSystem* ode = std::get_if<OdeSystem>(&sys)) {
    if (!a.steps) fail(ErrorCode::invalid_value, "--steps is required for ODE systems");
    auto init = parse_numbers(a.init, "initial value");
    if (init.size() != ode->state.size())
      fail(ErrorCode::arity_mismatch, "--init needs " + std::to_string(ode->state.size()) + " values");
    auto input = parse_numbers(a.inputs, "input value");
    if (input.size() != ode->inputs.size())
      fail(ErrorCode::arity_mismatch, "--inputs needs " + std::to_string(ode->inputs.size()) + " values");
    auto trace = simulate_ode(*ode, a.h.value_or(0.01), *a.steps, init, [&](std::size_t) { return input; });
    if (a.format == "csv") {
      std::vector<std::string> head{"step"};
      head.insert(head.end(), ode->state.begin(), ode->state.end());
      for (const auto& o : ode->outputs) head.push_back(o.name);
      text = csv_row(head);
      for (std::size_t k = 0; k < trace.states.size(); ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (double v : trace.states[k]) row.push_back(number(v));
        for (double v : trace.outputs[k]) row.push_back(number(v));
        text += csv_row(row);
      }
    } else {
      text = io::dump(io::to_json(trace, *ode));
    }
  } else {
    fail(ErrorCode::kind_mismatch, a.system + " is a " + kind_name(sys) + ", expected a machine or ODE system");
  }
  Output{a.output, out}.write(text);
  return 0;
}

struct CheckArgs {
  std::string map;
  std::string from;
  std::string to;
};

int cmd_check_map(const CheckArgs& a, std::ostream& out) {
  Workspace ws;
  const Artifact& map = ws.load(a.map);
  const Artifact& from = ws.load(a.from);
  const Artifact& to = ws.load(a.to);
  const json& mj = expect_kind<json>(map, a.map, "a map file");
  std::string kind = io::kind_of(mj);
  Verdict v;
  if (kind == "open_petri_map") {
    const auto& p = expect_kind<OpenPetriNet>(from, a.from, "an open Petri net");
    const auto& q = expect_kind<OpenPetriNet>(to, a.to, "an open Petri net");
    try {
      v = check_open_map(io::open_petri_map_from_json(mj, p, q), p, q);
    } catch (...) {
      rethrow_with_path(a.map);
    }
  } else if (kind == "machine_map") {
    Machine source;
    MapCheckOptions options;
    if (const auto* t = std::get_if<TimelineSpec>(&from)) {
      source = timeline_window(t->horizon);
      options.boundary_states.push_back(t->horizon);
    } else {
      source = expect_kind<Machine>(from, a.from, "a machine or timeline");
    }
    const auto& target = expect_kind<Machine>(to, a.to, "a machine");
    try {
      v = check_machine_map(io::machine_map_from_json(mj, source, target), source, target, options);
    } catch (...) {
      rethrow_with_path(a.map);
    }
  } else {
    fail(ErrorCode::kind_mismatch, a.map + " is a " + kind + ", expected an open_petri_map or machine_map");
  }
  json report = io::json::object();
  report["format"] = io::format_version;
  report["kind"] = "check_report";
  report["pass"] = v.ok;
  if (!v.ok) report["failure"] = v.detail;
  out << io::dump(report);
  return v.ok ? 0 : 1;
}

struct RenderArgs {
  std::string system;
  std::string output;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  Workspace ws;
  const Artifact& x = ws.load(a.system);
  std::string dot;
  if (const auto* n = std::get_if<OpenPetriNet>(&x)) dot = render_dot(*n);
  else if (const auto* m = std::get_if<Machine>(&x)) dot = render_dot(*m);
  else if (const auto* u = std::get_if<Uwd>(&x)) dot = render_dot(*u);
  else if (const auto* d = std::get_if<DirectedWiringDiagram>(&x)) dot = render_dot(*d);
  else fail(ErrorCode::kind_mismatch, a.system + " is a " + kind_name(x) + ", which has no rendering");
  Output{a.output, out}.write(dot);
  return 0;
}

struct PrintArgs {
  std::string file;
  std::string output;
};

/// Canonical re-serialization of any supported file.
int cmd_print(const PrintArgs& a, std::ostream& out) {
  Workspace ws;
  const Artifact& x = ws.load(a.file);
  std::string text;
  if (const auto* n = std::get_if<OpenPetriNet>(&x)) text = io::dump(io::to_json(*n));
  else if (const auto* m = std::get_if<Machine>(&x)) text = io::dump(io::to_json(*m));
  else if (const auto* o = std::get_if<OdeSystem>(&x)) text = io::dump(io::to_json(*o));
  else if (const auto* u = std::get_if<Uwd>(&x)) text = print_uwd(*u);
  else if (const auto* d = std::get_if<DirectedWiringDiagram>(&x)) {
    text = fs::path(a.file).extension() == ".dwd" ? print_dwd(*d) : io::dump(io::to_json(*d));
  } else if (const auto* t = std::get_if<TimelineSpec>(&x)) {
    text = io::dump({{"format", io::format_version}, {"kind", "timeline"}, {"horizon", t->horizon}});
  } else {
    text = io::dump(std::get<json>(x));
  }
  Output{a.output, out}.write(text);
  return 0;
}

void report_error(std::ostream& err, const std::string& code, const std::string& message,
                  std::optional<std::pair<std::size_t, std::size_t>> position = std::nullopt) {
  json j = json::object();
  j["error"] = code;
  j["message"] = message;
  if (position) {
    j["line"] = position->first;
    j["column"] = position->second;
  }
  err << j.dump() << "\n" << "error: " << message << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compose and run open systems along wiring diagrams", "dots"};
  app.require_subcommand(1);

  ComposeArgs compose_args;
  auto* compose = app.add_subcommand("compose", "Glue systems along a diagram and write the composite");
  compose->add_option("--diagram", compose_args.diagram, "A .uwd or .dwd diagram")->required();
  compose->add_option("--systems", compose_args.systems, "One system file per box, in box order")->required();
  compose->add_option("-o,--output", compose_args.output, "Output file (default: stdout)");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run a machine or an Euler-discretized ODE");
  simulate->set_help_flag("--help", "Print this help message and exit");  // frees the name "h" for the step size
  simulate->add_option("--system", sim_args.system, "Machine or ODE system file")->required();
  simulate->add_option("--init", sim_args.init, "Initial state (name or index); comma-separated values for ODEs")
      ->required();
  simulate->add_option("--inputs", sim_args.inputs, "Comma-separated inputs, cycled to fill --steps");
  simulate->add_option("--steps", sim_args.steps, "Number of steps (default: number of inputs)");
  simulate->add_option("--h", sim_args.h, "Euler step size for ODE systems (default 0.01)");
  simulate->add_option("--format", sim_args.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("-o,--output", sim_args.output, "Output file (default: stdout)");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check-map", "Verify that a map of systems commutes");
  check->add_option("--map", check_args.map, "Map file")->required();
  check->add_option("--from", check_args.from, "Source system (or timeline window)")->required();
  check->add_option("--to", check_args.to, "Target system")->required();

  RenderArgs render_args;
  auto* render = app.add_subcommand("render", "Emit Graphviz DOT for a system or diagram");
  render->add_option("--system", render_args.system, "System or diagram file")->required();
  render->add_option("-o,--output", render_args.output, "Output file (default: stdout)");

  PrintArgs print_args;
  auto* print = app.add_subcommand("print", "Re-emit a file in canonical form");
  print->add_option("file", print_args.file, "Any supported file")->required();
  print->add_option("-o,--output", print_args.output, "Output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return 2;
  }

  try {
    if (*compose) return cmd_compose(compose_args, out);
    if (*simulate) return cmd_simulate(sim_args, out);
    if (*check) return cmd_check_map(check_args, out);
    if (*render) return cmd_render(render_args, out);
    return cmd_print(print_args, out);
  } catch (const SourceError& e) {
    report_error(err, std::string(to_string(e.code())), e.what(), std::pair{e.line(), e.column()});
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
  }
  return 2;
}

}  // namespace dots
