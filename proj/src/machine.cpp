#include "dots/machine.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace dots {

Rational parse_rational(std::string_view text) {
  auto bad = [&] { fail(ErrorCode::invalid_value, "not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  auto digits = [](std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = text.find('/');
  auto num = text.substr(0, slash);
  auto den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!digits(num) || !digits(den) || den.front() == '-') bad();
  boost::multiprecision::cpp_int n{std::string(num)};
  boost::multiprecision::cpp_int d{std::string(den)};
  if (d == 0) bad();
  return Rational(n, d);
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string_view to_string(Effect e) noexcept {
  switch (e) {
    case Effect::identity: return "identity";
    case Effect::powerset: return "powerset";
    case Effect::distribution: return "distribution";
  }
  return "identity";
}

Effect parse_effect(std::string_view name) {
  if (name == "identity" || name == "deterministic") return Effect::identity;
  if (name == "powerset" || name == "nondeterministic") return Effect::powerset;
  if (name == "distribution" || name == "probabilistic") return Effect::distribution;
  fail(ErrorCode::invalid_value, "unknown effect '" + std::string(name) + "'");
}

void Machine::validate() const {
  const auto ns = states.size();
  const auto ni = iface.input.size();
  if (readout.size() != ns) fail(ErrorCode::arity_mismatch, "readout needs one entry per state");
  for (std::size_t s = 0; s < ns; ++s) {
    if (readout[s] >= iface.output.size()) {
      fail(ErrorCode::index_out_of_range, "readout of state '" + states.name(s) + "' out of range");
    }
  }
  if (update.size() != ns * ni) {
    fail(ErrorCode::arity_mismatch, "update needs one row per (state, input) pair");
  }
  for (std::size_t k = 0; k < update.size(); ++k) {
    const auto& row = update[k];
    const auto where = "update row (" + states.name(k / ni) + ", " + iface.input.name(k % ni) + ")";
    for (std::size_t b = 0; b < row.size(); ++b) {
      if (row[b].state >= ns) fail(ErrorCode::index_out_of_range, where + " leaves the state space");
      if (b > 0 && row[b - 1].state >= row[b].state) {
        fail(ErrorCode::invalid_value, where + " is not sorted and duplicate-free");
      }
    }
    switch (effect) {
      case Effect::identity:
        if (row.size() != 1 || row[0].weight != 1) {
          fail(ErrorCode::invalid_value, where + " must have exactly one successor");
        }
        break;
      case Effect::powerset:
        for (const auto& br : row) {
          if (br.weight != 1) fail(ErrorCode::invalid_value, where + " carries a weight");
        }
        break;
      case Effect::distribution: {
        Rational sum = 0;
        for (const auto& br : row) {
          if (br.weight <= 0) fail(ErrorCode::invalid_value, where + " has a non-positive weight");
          sum += br.weight;
        }
        if (sum != 1) fail(ErrorCode::invalid_value, where + " sums to " + to_string(sum));
        break;
      }
    }
  }
}

Machine deterministic_machine(FiniteSpace states, Interface iface, std::vector<std::size_t> readout,
                              std::vector<std::size_t> next) {
  Machine m{Effect::identity, std::move(states), std::move(iface), std::move(readout), {}};
  m.update.reserve(next.size());
  for (auto s : next) m.update.push_back({Branch{s, 1}});
  m.validate();
  return m;
}

Machine act_lens(const Machine& m, const Lens& l) {
  if (!same_shape(m.iface, l.dom)) {
    fail(ErrorCode::interface_mismatch, "lens does not start at the machine's interface");
  }
  Machine out{m.effect, m.states, l.cod, {}, {}};
  const auto ni = l.cod.input.size();
  out.readout.reserve(m.states.size());
  out.update.reserve(m.states.size() * ni);
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    const auto o = m.read(s);
    out.readout.push_back(l.forward(o));
    for (std::size_t i = 0; i < ni; ++i) out.update.push_back(m.step(s, l.backward(o, i)));
  }
  return out;
}

Machine parallel(const Machine& a, const Machine& b) {
  if (a.effect != b.effect) {
    fail(ErrorCode::effect_mismatch, "cannot run " + std::string(to_string(a.effect)) +
                                         " and " + std::string(to_string(b.effect)) + " machines in parallel");
  }
  Machine out{a.effect, product(a.states, b.states), parallel(a.iface, b.iface), {}, {}};
  const auto nbs = b.states.size();
  const auto nbo = b.iface.output.size();
  for (std::size_t sa = 0; sa < a.states.size(); ++sa) {
    for (std::size_t sb = 0; sb < nbs; ++sb) {
      out.readout.push_back(a.read(sa) * nbo + b.read(sb));
      for (std::size_t ia = 0; ia < a.iface.input.size(); ++ia) {
        for (std::size_t ib = 0; ib < b.iface.input.size(); ++ib) {
          Outcome row;
          for (const auto& x : a.step(sa, ia)) {
            for (const auto& y : b.step(sb, ib)) row.push_back({x.state * nbs + y.state, x.weight * y.weight});
          }
          out.update.push_back(std::move(row));
        }
      }
    }
  }
  return out;
}

Machine parallel(std::span<const Machine> ms) {
  if (ms.empty()) {
    Interface unit{FiniteSpace::unit(), FiniteSpace::unit()};
    return deterministic_machine(FiniteSpace::unit(), unit, {0}, {0});
  }
  Machine acc = ms.front();
  for (std::size_t k = 1; k < ms.size(); ++k) acc = parallel(acc, ms[k]);
  return acc;
}

Machine compose_via_dwd(const DirectedWiringDiagram& d, std::span<const Machine> ms) {
  if (ms.size() != d.boxes.size()) {
    fail(ErrorCode::arity_mismatch, "diagram has " + std::to_string(d.boxes.size()) +
                                        " boxes but " + std::to_string(ms.size()) + " machines were given");
  }
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (!same_shape(ms[k].iface, box_interface(d, d.boxes[k]))) {
      fail(ErrorCode::interface_mismatch, "machine " + std::to_string(k) +
                                              " does not fit box '" + d.boxes[k].name + "'");
    }
  }
  return act_lens(parallel(ms), dwd_to_lens(d));
}

Trace simulate(const Machine& m, std::size_t init, std::span<const std::size_t> inputs) {
  if (m.effect != Effect::identity) {
    fail(ErrorCode::effect_mismatch, "deterministic simulation of a " + std::string(to_string(m.effect)) + " machine");
  }
  if (init >= m.states.size()) fail(ErrorCode::index_out_of_range, "initial state out of range");
  Trace t;
  t.states.push_back(init);
  t.outputs.push_back(m.read(init));
  for (auto i : inputs) {
    if (i >= m.iface.input.size()) fail(ErrorCode::index_out_of_range, "input out of range");
    auto next = m.step(t.states.back(), i).front().state;
    t.inputs.push_back(i);
    t.states.push_back(next);
    t.outputs.push_back(m.read(next));
  }
  return t;
}

std::vector<WeightedTrace> simulate_all(const Machine& m, std::size_t init,
                                        std::span<const std::size_t> inputs, SimulationLimits limits) {
  if (init >= m.states.size()) fail(ErrorCode::index_out_of_range, "initial state out of range");
  for (auto i : inputs) {
    if (i >= m.iface.input.size()) fail(ErrorCode::index_out_of_range, "input out of range");
  }
  std::vector<WeightedTrace> done;
  WeightedTrace start;
  start.trace.states.push_back(init);
  start.trace.outputs.push_back(m.read(init));

  std::function<void(WeightedTrace&)> extend = [&](WeightedTrace& cur) {
    const auto k = cur.trace.inputs.size();
    if (k == inputs.size()) {
      if (done.size() >= limits.max_traces) {
        fail(ErrorCode::horizon_too_large, "more than " + std::to_string(limits.max_traces) + " traces");
      }
      done.push_back(cur);
      return;
    }
    const auto& row = m.step(cur.trace.states.back(), inputs[k]);
    if (row.empty()) {
      cur.trace.truncated = true;
      done.push_back(cur);
      cur.trace.truncated = false;
      return;
    }
    for (const auto& br : row) {
      auto saved = cur.weight;
      cur.trace.inputs.push_back(inputs[k]);
      cur.trace.states.push_back(br.state);
      cur.trace.outputs.push_back(m.read(br.state));
      if (m.effect == Effect::distribution) cur.weight *= br.weight;
      extend(cur);
      cur.trace.inputs.pop_back();
      cur.trace.states.pop_back();
      cur.trace.outputs.pop_back();
      cur.weight = saved;
    }
  };
  extend(start);
  return done;
}

namespace {

std::map<std::size_t, Rational> push_forward(const Outcome& row, std::span<const std::size_t> f) {
  std::map<std::size_t, Rational> out;
  for (const auto& br : row) out[f[br.state]] += br.weight;
  return out;
}

std::map<std::size_t, Rational> as_map(const Outcome& row) {
  std::map<std::size_t, Rational> out;
  for (const auto& br : row) out[br.state] += br.weight;
  return out;
}

}  // namespace

Verdict check_machine_map(const MachineMap& mm, const Machine& m1, const Machine& m2,
                          const MapCheckOptions& options) {
  if (mm.state_map.size() != m1.states.size() ||
      std::any_of(mm.state_map.begin(), mm.state_map.end(),
                  [&](std::size_t s) { return s >= m2.states.size(); })) {
    fail(ErrorCode::arity_mismatch, "state map does not fit the two state spaces");
  }
  if (!same_shape(mm.chart.dom, m1.iface) || !same_shape(mm.chart.cod, m2.iface)) {
    fail(ErrorCode::arity_mismatch, "chart does not fit the two interfaces");
  }
  if (auto v = check_chart(mm.chart); !v) fail(ErrorCode::arity_mismatch, "chart: " + v.detail);
  if (m1.effect != m2.effect && m1.effect != Effect::identity) {
    fail(ErrorCode::effect_mismatch, "system maps need matching effects");
  }

  const auto& s = mm.state_map;
  for (std::size_t x = 0; x < m1.states.size(); ++x) {
    if (m2.read(s[x]) != mm.chart.forward(m1.read(x))) {
      return Verdict::failure("readout square fails at state '" + m1.states.name(x) + "'");
    }
  }
  for (std::size_t x = 0; x < m1.states.size(); ++x) {
    if (std::find(options.boundary_states.begin(), options.boundary_states.end(), x) !=
        options.boundary_states.end()) {
      continue;
    }
    for (std::size_t i = 0; i < m1.iface.input.size(); ++i) {
      auto lhs = push_forward(m1.step(x, i), s);
      auto rhs = as_map(m2.step(s[x], mm.chart.pushed(m1.read(x), i)));
      bool ok = true;
      if (m2.effect == Effect::powerset) {
        for (const auto& [state, w] : lhs) ok = ok && rhs.count(state) > 0;
      } else {
        ok = lhs == rhs;
      }
      if (!ok) {
        return Verdict::failure("update square fails at (state '" + m1.states.name(x) + "', input '" +
                                m1.iface.input.name(i) + "')");
      }
    }
  }
  return Verdict::pass();
}

MachineMap compose_maps(const MachineMap& first, const MachineMap& second) {
  MachineMap out{compose_charts(first.chart, second.chart), {}};
  for (auto s : first.state_map) out.state_map.push_back(second.state_map.at(s));
  return out;
}

MachineMap act_square(const MachineMap& mm, const Lens& top, const Lens& bottom, const Chart& right) {
  if (auto v = check_lens_square(top, bottom, mm.chart, right); !v) {
    fail(ErrorCode::invalid_leg, "interaction square: " + v.detail);
  }
  return {right, mm.state_map};
}

Machine timeline_window(std::size_t horizon) {
  auto iface = timeline_interface(horizon);
  std::vector<std::size_t> readout, next;
  for (std::size_t k = 0; k <= horizon; ++k) {
    readout.push_back(k);
    next.push_back(std::min(k + 1, horizon));
  }
  return deterministic_machine(iface.output, iface, std::move(readout), std::move(next));
}

std::vector<std::vector<std::size_t>> enumerate_trajectories(const Machine& m, const Chart& chart,
                                                             std::size_t horizon) {
  if (chart.dom.output.size() != horizon + 1 || chart.dom.input.size() != 1) {
    fail(ErrorCode::arity_mismatch, "chart does not start at the horizon-" + std::to_string(horizon) + " window");
  }
  if (!same_shape(chart.cod, m.iface)) fail(ErrorCode::arity_mismatch, "chart does not land in the machine's interface");
  if (auto v = check_chart(chart); !v) fail(ErrorCode::arity_mismatch, "chart: " + v.detail);

  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> path;
  std::function<void()> extend = [&] {
    const auto k = path.size() - 1;
    if (k == horizon) {
      found.push_back(path);
      return;
    }
    for (const auto& br : m.step(path.back(), chart.pushed(k, 0))) {
      if (m.read(br.state) != chart.forward(k + 1)) continue;
      path.push_back(br.state);
      extend();
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    if (m.read(s) != chart.forward(0)) continue;
    path.assign(1, s);
    extend();
  }
  return found;
}

MachineMap trajectory_map(const Chart& chart, std::span<const std::size_t> states) {
  return {chart, std::vector<std::size_t>(states.begin(), states.end())};
}

}  // namespace dots
