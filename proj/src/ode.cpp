#include "dots/ode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dots/error.hpp"

namespace dots {

namespace {

void require_unique(const std::vector<std::string>& names, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) fail(ErrorCode::invalid_value, "duplicate " + what + " '" + n + "'");
  }
}

void require_free_in(const Expr& e, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& v : free_variables(e)) {
    if (!allowed.count(v)) {
      fail(ErrorCode::unbound_variable, where + " mentions '" + v + "', which is not in scope");
    }
  }
}

Env bind(const std::vector<std::string>& names, std::span<const double> values, Env env = {}) {
  if (names.size() != values.size()) {
    fail(ErrorCode::arity_mismatch, "expected " + std::to_string(names.size()) + " values, got " +
                                        std::to_string(values.size()));
  }
  for (std::size_t k = 0; k < names.size(); ++k) env[names[k]] = values[k];
  return env;
}

std::map<std::string, Expr> positional(const std::vector<std::string>& names, const std::vector<Expr>& exprs) {
  std::map<std::string, Expr> out;
  for (std::size_t k = 0; k < names.size(); ++k) out.emplace(names[k], exprs[k]);
  return out;
}

std::vector<Expr> substitute_all(const std::vector<Expr>& es, const std::map<std::string, Expr>& b) {
  std::vector<Expr> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(substitute(e, b));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void require_real_ports(const DirectedWiringDiagram& d) {
  auto check = [&](const BoxDecl& b) {
    for (const auto* ports : {&b.inputs, &b.outputs}) {
      for (const auto& p : *ports) {
        if (!d.type(p.type).is_real()) {
          fail(ErrorCode::type_clash, "port '" + b.name + "." + p.name + "' is not real-valued");
        }
      }
    }
  };
  check(d.outer);
  for (const auto& b : d.boxes) check(b);
}

std::string inner_coordinate(const BoxDecl& box, const PortDecl& port) {
  return box.name + "@" + port.name;
}

}  // namespace

void OdeSystem::validate() const {
  require_unique(concat(state, inputs), "variable");
  if (field.size() != state.size()) fail(ErrorCode::arity_mismatch, "one field expression per state variable");
  std::set<std::string> st(state.begin(), state.end());
  std::set<std::string> all = st;
  all.insert(inputs.begin(), inputs.end());
  for (const auto& o : outputs) require_free_in(o.expr, st, "output '" + o.name + "'");
  for (std::size_t k = 0; k < field.size(); ++k) require_free_in(field[k], all, "field of '" + state[k] + "'");
}

VectorLens VectorLens::identity(const VectorInterface& iface) {
  VectorLens l{iface, iface, {}, {}};
  for (const auto& o : iface.outputs) l.fwd.push_back(Expr::variable(o));
  for (const auto& i : iface.inputs) l.bwd.push_back(Expr::variable(i));
  return l;
}

VectorLens vector_lens_compose(const VectorLens& first, const VectorLens& second) {
  if (first.cod.inputs.size() != second.dom.inputs.size() ||
      first.cod.outputs.size() != second.dom.outputs.size()) {
    fail(ErrorCode::interface_mismatch, "vector lenses do not meet at a common interface");
  }
  auto mid_outputs = positional(second.dom.outputs, first.fwd);
  VectorLens out{first.dom, second.cod, substitute_all(second.fwd, mid_outputs), {}};
  auto mid_inputs = positional(first.cod.inputs, substitute_all(second.bwd, mid_outputs));
  out.bwd = substitute_all(first.bwd, mid_inputs);
  return out;
}

VectorLens vector_lens_parallel(const VectorLens& a, const VectorLens& b) {
  VectorLens out{{concat(a.dom.inputs, b.dom.inputs), concat(a.dom.outputs, b.dom.outputs)},
                 {concat(a.cod.inputs, b.cod.inputs), concat(a.cod.outputs, b.cod.outputs)},
                 a.fwd,
                 a.bwd};
  require_unique(concat(out.dom.inputs, out.dom.outputs), "coordinate");
  require_unique(concat(out.cod.inputs, out.cod.outputs), "coordinate");
  out.fwd.insert(out.fwd.end(), b.fwd.begin(), b.fwd.end());
  out.bwd.insert(out.bwd.end(), b.bwd.begin(), b.bwd.end());
  return out;
}

VectorLens dwd_to_vector_lens(const DirectedWiringDiagram& d) {
  d.validate();
  require_real_ports(d);
  VectorLens l;
  for (const auto& b : d.boxes) {
    for (const auto& p : b.inputs) l.dom.inputs.push_back(inner_coordinate(b, p));
    for (const auto& p : b.outputs) l.dom.outputs.push_back(inner_coordinate(b, p));
  }
  for (const auto& p : d.outer.inputs) l.cod.inputs.push_back(p.name);
  for (const auto& p : d.outer.outputs) l.cod.outputs.push_back(p.name);

  auto source_var = [&](const PortRef& src) {
    if (src.box) {
      const auto& box = d.boxes[*src.box];
      return Expr::variable(inner_coordinate(box, box.outputs[src.port]));
    }
    return Expr::variable(d.outer.inputs[src.port].name);
  };
  for (std::size_t p = 0; p < d.outer.outputs.size(); ++p) l.fwd.push_back(source_var(d.source_of({std::nullopt, p})));
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    for (std::size_t p = 0; p < d.boxes[b].inputs.size(); ++p) l.bwd.push_back(source_var(d.source_of({b, p})));
  }
  return l;
}

std::vector<double> VectorMachine::read(std::span<const double> x) const {
  auto env = bind(state, x);
  std::vector<double> out;
  out.reserve(readout.size());
  for (const auto& e : readout) out.push_back(eval(e, env));
  return out;
}

std::vector<double> VectorMachine::step(std::span<const double> x, std::span<const double> i) const {
  auto env = bind(inputs, i, bind(state, x));
  std::vector<double> out;
  out.reserve(update.size());
  for (const auto& e : update) out.push_back(eval(e, env));
  return out;
}

VectorMachine euler(const OdeSystem& sys, double h) {
  sys.validate();
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::invalid_value, "Euler step must be a positive real");
  VectorMachine m{sys.state, sys.inputs, {}, {}, {}};
  for (const auto& o : sys.outputs) {
    m.outputs.push_back(o.name);
    m.readout.push_back(o.expr);
  }
  for (std::size_t k = 0; k < sys.state.size(); ++k) {
    m.update.push_back(Expr::variable(sys.state[k]) + Expr::constant(h) * sys.field[k]);
  }
  return m;
}

VectorMachine act_lens(const VectorMachine& m, const VectorLens& l) {
  if (m.inputs.size() != l.dom.inputs.size() || m.outputs.size() != l.dom.outputs.size()) {
    fail(ErrorCode::interface_mismatch, "lens does not start at the machine's interface");
  }
  auto observed = positional(l.dom.outputs, m.readout);
  VectorMachine out{m.state, l.cod.inputs, l.cod.outputs, substitute_all(l.fwd, observed), {}};
  auto routed = positional(m.inputs, substitute_all(l.bwd, observed));
  out.update = substitute_all(m.update, routed);
  return out;
}

VectorMachine compose_via_dwd(const DirectedWiringDiagram& d, std::span<const VectorMachine> ms) {
  if (ms.size() != d.boxes.size()) fail(ErrorCode::arity_mismatch, "one machine per box expected");
  auto lens = dwd_to_vector_lens(d);
  VectorMachine whole;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const auto& box = d.boxes[k];
    const auto& m = ms[k];
    if (m.inputs.size() != box.inputs.size() || m.outputs.size() != box.outputs.size()) {
      fail(ErrorCode::interface_mismatch, "machine " + std::to_string(k) + " does not fit box '" + box.name + "'");
    }
    std::map<std::string, Expr> rename;
    for (const auto& x : m.state) {
      whole.state.push_back(box.name + "." + x);
      rename.emplace(x, Expr::variable(box.name + "." + x));
    }
    for (std::size_t p = 0; p < m.inputs.size(); ++p) {
      whole.inputs.push_back(inner_coordinate(box, box.inputs[p]));
      rename.emplace(m.inputs[p], Expr::variable(whole.inputs.back()));
    }
    for (std::size_t p = 0; p < m.outputs.size(); ++p) {
      whole.outputs.push_back(inner_coordinate(box, box.outputs[p]));
      whole.readout.push_back(substitute(m.readout[p], rename));
    }
    for (const auto& e : m.update) whole.update.push_back(substitute(e, rename));
  }
  require_unique(concat(whole.state, whole.inputs), "variable");
  return act_lens(whole, lens);
}

OdeSystem dwd_apply_ode(const DirectedWiringDiagram& d, std::span<const OdeSystem> systems) {
  d.validate();
  require_real_ports(d);
  if (systems.size() != d.boxes.size()) fail(ErrorCode::arity_mismatch, "one system per box expected");

  std::vector<std::map<std::string, Expr>> rename(systems.size());
  OdeSystem out;
  for (std::size_t b = 0; b < systems.size(); ++b) {
    const auto& sys = systems[b];
    const auto& box = d.boxes[b];
    sys.validate();
    if (sys.inputs.size() != box.inputs.size() || sys.outputs.size() != box.outputs.size()) {
      fail(ErrorCode::interface_mismatch, "system " + std::to_string(b) + " does not fit box '" + box.name + "'");
    }
    for (const auto& x : sys.state) {
      out.state.push_back(box.name + "." + x);
      rename[b].emplace(x, Expr::variable(out.state.back()));
    }
  }
  auto source_expr = [&](const PortRef& src) {
    if (!src.box) return Expr::variable(d.outer.inputs[src.port].name);
    return substitute(systems[*src.box].outputs[src.port].expr, rename[*src.box]);
  };
  for (std::size_t b = 0; b < systems.size(); ++b) {
    auto bindings = rename[b];
    for (std::size_t p = 0; p < systems[b].inputs.size(); ++p) {
      bindings.insert_or_assign(systems[b].inputs[p], source_expr(d.source_of({b, p})));
    }
    for (const auto& f : systems[b].field) out.field.push_back(substitute(f, bindings));
  }
  for (const auto& p : d.outer.inputs) out.inputs.push_back(p.name);
  for (std::size_t p = 0; p < d.outer.outputs.size(); ++p) {
    out.outputs.push_back({d.outer.outputs[p].name, source_expr(d.source_of({std::nullopt, p}))});
  }
  out.validate();
  return out;
}

VectorTrace simulate_ode(const OdeSystem& sys, double h, std::size_t steps, std::span<const double> init,
                         const InputSignal& input) {
  auto m = euler(sys, h);
  VectorTrace t;
  std::vector<double> x(init.begin(), init.end());
  if (x.size() != sys.state.size()) fail(ErrorCode::arity_mismatch, "initial state has the wrong dimension");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double z) { return std::isfinite(z); });
  };
  if (!finite(x)) fail(ErrorCode::non_finite_value, "initial state is not finite");
  t.states.push_back(x);
  t.outputs.push_back(m.read(x));
  for (std::size_t k = 0; k < steps; ++k) {
    auto i = input ? input(k) : std::vector<double>{};
    x = m.step(x, i);
    if (!finite(x)) fail(ErrorCode::non_finite_value, "state became non-finite at step " + std::to_string(k + 1));
    t.inputs.push_back(std::move(i));
    t.states.push_back(x);
    t.outputs.push_back(m.read(x));
  }
  return t;
}

}  // namespace dots
