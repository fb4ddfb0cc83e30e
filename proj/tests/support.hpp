#pragma once

// Shared fixtures, seeded generators and brute-force oracles for the tests.
// The oracles deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dots/finset.hpp"
#include "dots/lens.hpp"
#include "dots/machine.hpp"
#include "dots/ode.hpp"
#include "dots/petri.hpp"
#include "dots/wiring.hpp"

namespace dots::test {

/// True when `f` throws a library Error with the given code.
template <class F>
bool throws_code(F&& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

inline std::uint64_t seed() {
  static const std::uint64_t s = [] {
    const char* env = std::getenv("DOTS_SEED");
    return env && *env ? std::strtoull(env, nullptr, 10) : std::uint64_t{20261016};
  }();
  return s;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(seed());
  return g;
}

/// Uniform in [lo, hi].
inline std::size_t uniform(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng());
}

inline double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline std::string fixture(const std::string& name) { return std::string(DOTS_FIXTURE_DIR) + "/" + name; }

/// A random function dom -> cod; cod is bumped to 1 when dom > 0.
inline FinFunction random_function(std::size_t dom, std::size_t cod) {
  if (dom > 0 && cod == 0) cod = 1;
  std::vector<std::size_t> t(dom);
  for (auto& x : t) x = uniform(0, cod - 1);
  return FinFunction(cod, t);
}

inline FinFunction random_permutation(std::size_t n) {
  std::vector<std::size_t> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = i;
  std::shuffle(t.begin(), t.end(), rng());
  return FinFunction(n, t);
}

inline Cospan random_cospan(std::size_t m, std::size_t n, std::size_t max_apex) {
  std::size_t j = (m + n == 0) ? uniform(0, max_apex) : uniform(1, max_apex);
  return Cospan(random_function(m, j), random_function(n, j));
}

// ---------------------------------------------------------------------------
// Closure oracle for pushouts: reflexive-symmetric-transitive closure of the
// relation f(a) ~ g(a) on B + C by boolean matrix saturation, classes
// numbered by smallest member.

struct ClosureQuotient {
  std::size_t classes = 0;
  std::vector<std::size_t> label;  // element of B + C -> class
};

inline ClosureQuotient closure_quotient(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (auto [a, b] : pairs) r[a][b] = r[b][a] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  ClosureQuotient q;
  q.label.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (q.label[i] != n) continue;
    for (std::size_t j = i; j < n; ++j)
      if (r[i][j]) q.label[j] = q.classes;
    ++q.classes;
  }
  return q;
}

inline ClosureQuotient pushout_oracle(const FinFunction& f, const FinFunction& g) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < f.dom(); ++a) pairs.emplace_back(f(a), f.cod() + g(a));
  return closure_quotient(f.cod() + g.cod(), pairs);
}

// ---------------------------------------------------------------------------
// Worked fixtures, written out by hand.

inline OpenPetriNet infection_net() {
  PetriNet n{{"S", "I"}, {"infection"}, {Multiset({{0, 1}, {1, 1}})}, {Multiset({{1, 2}})}};
  return {n, FinFunction(2, {0, 1}), {}};
}

inline OpenPetriNet recovery_net() {
  PetriNet n{{"I", "R"}, {"recovery"}, {Multiset({{0, 1}})}, {Multiset({{1, 1}})}};
  return {n, FinFunction(2, {0, 1}), {}};
}

/// S + I -> 2I and I -> R with ports S, I, R.
inline OpenPetriNet sir_net() {
  PetriNet n{{"S", "I", "R"},
             {"infection", "recovery"},
             {Multiset({{0, 1}, {1, 1}}), Multiset({{1, 1}})},
             {Multiset({{1, 2}}), Multiset({{2, 1}})}};
  return {n, FinFunction(3, {0, 1, 2}), {}};
}

/// S + I -> 2I and I -> S with ports S, I.
inline OpenPetriNet sis_net() {
  PetriNet n{{"S", "I"},
             {"infection", "recovery"},
             {Multiset({{0, 1}, {1, 1}}), Multiset({{1, 1}})},
             {Multiset({{1, 2}}), Multiset({{0, 1}})}};
  return {n, FinFunction(2, {0, 1}), {}};
}

/// The 2 + 2 -> 3 <- 3 diagram: ports (S, I | I, R) glued on I, all exposed.
inline Cospan sir_uwd() { return Cospan(FinFunction(3, {0, 1, 1, 2}), FinFunction(3, {0, 1, 2})); }

inline OpenPetriMap sir_to_sis() {
  return {FinFunction(2, {0, 1, 0}), PetriMap{FinFunction(2, {0, 1, 0}), FinFunction(2, {0, 1})}};
}

/// Counter mod n with inputs {0, 1}: readout the state, add the input.
inline Machine counter(std::size_t n) {
  std::vector<std::size_t> readout, next;
  for (std::size_t s = 0; s < n; ++s) {
    readout.push_back(s);
    next.push_back(s);
    next.push_back((s + 1) % n);
  }
  return deterministic_machine(FiniteSpace::range(n), {FiniteSpace::range(2), FiniteSpace::range(n)}, readout, next);
}

inline PortType bit_type() { return {"bit", std::vector<std::string>{"0", "1"}}; }

/// The series diagram: c1 counts the outer input, c2 counts c1's output,
/// outputs (c2, c1).
inline DirectedWiringDiagram series_dwd() {
  DirectedWiringDiagram d;
  d.types = {bit_type()};
  d.boxes = {{"c1", {{"x", "bit"}}, {{"y", "bit"}}}, {"c2", {{"x", "bit"}}, {{"y", "bit"}}}};
  d.outer = {"", {{"a", "bit"}}, {{"o1", "bit"}, {"o2", "bit"}}};
  d.wires = {{{std::nullopt, 0}, {0, 0}}, {{0, 0}, {1, 0}}, {{1, 0}, {std::nullopt, 0}}, {{0, 0}, {std::nullopt, 1}}};
  return d;
}

/// One box with outputs (o1, o2); only o2 is exposed.
inline DirectedWiringDiagram forget_first_dwd() {
  DirectedWiringDiagram d;
  d.types = {bit_type()};
  d.boxes = {{"m", {{"a", "bit"}}, {{"o1", "bit"}, {"o2", "bit"}}}};
  d.outer = {"", {{"a", "bit"}}, {{"p", "bit"}}};
  d.wires = {{{std::nullopt, 0}, {0, 0}}, {{0, 1}, {std::nullopt, 0}}};
  return d;
}

/// The all-1s input, alternating 0/1 output chart on a window of the given horizon.
inline Chart alternating_chart(std::size_t horizon, const Interface& cod) {
  std::vector<std::size_t> ins(horizon + 1, cod.input.at("1")), outs;
  for (std::size_t k = 0; k <= horizon; ++k) outs.push_back(k % 2);
  return trajectory_chart(horizon, cod, ins, outs);
}

// ---------------------------------------------------------------------------
// Random finite lenses and machines.

inline FiniteSpace random_space(std::size_t lo, std::size_t hi) { return FiniteSpace::range(uniform(lo, hi)); }

inline Interface random_interface(std::size_t hi = 3) { return {random_space(1, hi), random_space(1, hi)}; }

inline Lens random_lens(const Interface& dom, const Interface& cod) {
  Lens l{dom, cod, {}, {}};
  for (std::size_t o = 0; o < dom.output.size(); ++o) l.fwd.push_back(uniform(0, cod.output.size() - 1));
  for (std::size_t k = 0; k < dom.output.size() * cod.input.size(); ++k)
    l.bwd.push_back(uniform(0, dom.input.size() - 1));
  return l;
}

inline Machine random_machine(Effect effect, const FiniteSpace& states, const Interface& iface) {
  Machine m;
  m.effect = effect;
  m.states = states;
  m.iface = iface;
  for (std::size_t s = 0; s < states.size(); ++s) m.readout.push_back(uniform(0, iface.output.size() - 1));
  for (std::size_t k = 0; k < states.size() * iface.input.size(); ++k) {
    Outcome out;
    switch (effect) {
      case Effect::identity:
        out.push_back({uniform(0, states.size() - 1), 1});
        break;
      case Effect::powerset:
        for (std::size_t t = 0; t < states.size(); ++t)
          if (uniform(0, 2) == 0) out.push_back({t, 1});
        break;
      case Effect::distribution: {
        std::vector<std::size_t> w(states.size());
        std::size_t total = 0;
        while (total == 0) {
          total = 0;
          for (auto& x : w) total += (x = uniform(0, 3));
        }
        for (std::size_t t = 0; t < states.size(); ++t)
          if (w[t]) out.push_back({t, Rational(w[t], total)});
        break;
      }
    }
    m.update.push_back(out);
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Random directed wiring diagrams. Sinks take the type of the source chosen
// for them, so every diagram is well typed. Outer outputs are fed by box
// outputs only.

struct DwdShape {
  std::size_t min_boxes = 1, max_boxes = 3;
  std::size_t max_box_inputs = 2, max_box_outputs = 2;
  std::size_t max_outer_inputs = 2, max_outer_outputs = 2;
};

/// Preset boxes keep their declared types and are placed at random positions;
/// outer inputs are added when a preset input has no source of its type.
inline DirectedWiringDiagram random_dwd(const std::vector<PortType>& types, const DwdShape& shape = {},
                                        const std::vector<BoxDecl>& preset = {}) {
  DirectedWiringDiagram d;
  d.types = types;
  auto random_type = [&] { return types[uniform(0, types.size() - 1)].name; };
  std::size_t nb = uniform(shape.min_boxes, shape.max_boxes);
  for (std::size_t b = 0; b < nb; ++b) {
    BoxDecl box{"b" + std::to_string(b), {}, {}};
    std::size_t ni = uniform(0, shape.max_box_inputs), no = uniform(1, shape.max_box_outputs);
    for (std::size_t p = 0; p < ni; ++p) box.inputs.push_back({"i" + std::to_string(p), ""});
    for (std::size_t p = 0; p < no; ++p) box.outputs.push_back({"o" + std::to_string(p), random_type()});
    d.boxes.push_back(box);
  }
  std::vector<bool> fixed(nb, false);
  for (const auto& b : preset) {
    auto at = uniform(0, d.boxes.size());
    d.boxes.insert(d.boxes.begin() + static_cast<std::ptrdiff_t>(at), b);
    fixed.insert(fixed.begin() + static_cast<std::ptrdiff_t>(at), true);
  }
  nb = d.boxes.size();
  std::size_t oi = uniform(0, shape.max_outer_inputs), oo = uniform(0, shape.max_outer_outputs);
  for (std::size_t p = 0; p < oi; ++p) d.outer.inputs.push_back({"x" + std::to_string(p), random_type()});
  for (std::size_t b = 0; b < nb; ++b) {
    if (!fixed[b]) continue;
    for (const auto& in : d.boxes[b].inputs) {
      bool found = std::any_of(d.outer.inputs.begin(), d.outer.inputs.end(),
                               [&](const PortDecl& p) { return p.type == in.type; });
      for (std::size_t c = 0; c < nb && !found; ++c)
        for (const auto& o : d.boxes[c].outputs) found = found || o.type == in.type;
      if (!found) d.outer.inputs.push_back({"x" + std::to_string(d.outer.inputs.size()), in.type});
    }
  }
  oi = d.outer.inputs.size();
  for (std::size_t p = 0; p < oo; ++p) d.outer.outputs.push_back({"y" + std::to_string(p), ""});

  std::vector<PortRef> box_sources, all_sources;
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t p = 0; p < d.boxes[b].outputs.size(); ++p) box_sources.push_back({b, p});
  all_sources = box_sources;
  for (std::size_t p = 0; p < oi; ++p) all_sources.push_back({std::nullopt, p});
  auto type_of_source = [&](const PortRef& r) -> const std::string& {
    return r.box ? d.boxes[*r.box].outputs[r.port].type : d.outer.inputs[r.port].type;
  };
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t p = 0; p < d.boxes[b].inputs.size(); ++p) {
      std::vector<PortRef> candidates;
      for (const auto& r : all_sources)
        if (!fixed[b] || type_of_source(r) == d.boxes[b].inputs[p].type) candidates.push_back(r);
      PortRef src = candidates[uniform(0, candidates.size() - 1)];
      d.boxes[b].inputs[p].type = type_of_source(src);
      d.wires.push_back({src, {b, p}});
    }
  }
  for (std::size_t p = 0; p < oo; ++p) {
    PortRef src = box_sources[uniform(0, box_sources.size() - 1)];
    d.outer.outputs[p].type = type_of_source(src);
    d.wires.push_back({src, {std::nullopt, p}});
  }
  std::shuffle(d.wires.begin(), d.wires.end(), rng());
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Random expressions and ODE systems.

inline PortType real_type() { return {"R", std::nullopt}; }

/// A random expression tree; constants are arbitrary doubles.
inline Expr random_expr(const std::vector<std::string>& vars, int depth) {
  if (depth == 0 || uniform(0, 3) == 0) {
    if (!vars.empty() && uniform(0, 1) == 0) return Expr::variable(vars[uniform(0, vars.size() - 1)]);
    return Expr::constant(uniform(0, 4) == 0 ? double(uniform(0, 9)) : uniform_real(-100.0, 100.0));
  }
  using Op = Expr::Op;
  static const Op binaries[] = {Op::add, Op::sub, Op::mul, Op::div, Op::pow};
  static const Op unaries[] = {Op::neg, Op::sin, Op::cos, Op::exp};
  if (uniform(0, 2) == 0) return Expr::unary(unaries[uniform(0, 3)], random_expr(vars, depth - 1));
  return Expr::binary(binaries[uniform(0, 4)], random_expr(vars, depth - 1), random_expr(vars, depth - 1));
}

/// Sum of up to three terms c * m with m a monomial of degree at most 2.
inline Expr random_polynomial(const std::vector<std::string>& vars) {
  std::optional<Expr> sum;
  for (std::size_t k = uniform(1, 3); k > 0; --k) {
    Expr term = Expr::constant(uniform_real(-1.0, 1.0));
    for (std::size_t d = uniform(0, 2); d > 0 && !vars.empty(); --d) term = term * Expr::variable(vars[uniform(0, vars.size() - 1)]);
    sum = sum ? *sum + term : term;
  }
  return *sum;
}

inline OdeSystem random_system(std::size_t n_inputs, std::size_t n_outputs, std::size_t max_dim = 3) {
  OdeSystem s;
  for (std::size_t k = uniform(1, max_dim); k > 0; --k) s.state.push_back("x" + std::to_string(s.state.size()));
  for (std::size_t k = 0; k < n_inputs; ++k) s.inputs.push_back("u" + std::to_string(k));
  auto all = s.state;
  all.insert(all.end(), s.inputs.begin(), s.inputs.end());
  for (std::size_t k = 0; k < n_outputs; ++k) s.outputs.push_back({"y" + std::to_string(k), random_polynomial(s.state)});
  for (std::size_t k = 0; k < s.state.size(); ++k) s.field.push_back(random_polynomial(all));
  s.validate();
  return s;
}

struct RandomInstance {
  DirectedWiringDiagram d;
  std::vector<OdeSystem> systems;
};

inline RandomInstance random_instance(std::size_t min_boxes, std::size_t max_boxes) {
  DwdShape shape{min_boxes, max_boxes, 2, 2, 2, 2};
  RandomInstance r{random_dwd({real_type()}, shape), {}};
  for (const auto& b : r.d.boxes) r.systems.push_back(random_system(b.inputs.size(), b.outputs.size()));
  return r;
}

}  // namespace dots::test

#ifdef DOCTEST_LIBRARY_INCLUDED
namespace doctest {
template <>
struct StringMaker<dots::FinFunction> {
  static String convert(const dots::FinFunction& f) { return dots::to_string(f).c_str(); }
};
}  // namespace doctest
#endif
