#include "dots/lens.hpp"

#include <algorithm>

namespace dots {

FiniteSpace::FiniteSpace(std::vector<std::string> names) : names_(std::move(names)) {
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::invalid_value, "duplicate value name in finite space");
  }
}

FiniteSpace FiniteSpace::range(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return FiniteSpace(std::move(names));
}

std::optional<std::size_t> FiniteSpace::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t FiniteSpace::at(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  fail(ErrorCode::unknown_name, "no value named '" + std::string(name) + "'");
}

FiniteSpace product(std::span<const FiniteSpace> factors) {
  std::vector<std::string> names{""};
  bool first = true;
  for (const auto& f : factors) {
    std::vector<std::string> next;
    next.reserve(names.size() * f.size());
    for (const auto& prefix : names) {
      for (const auto& n : f.names()) next.push_back(first ? n : prefix + ":" + n);
    }
    names = std::move(next);
    first = false;
  }
  if (first) return FiniteSpace::unit();
  return FiniteSpace(std::move(names));
}

FiniteSpace product(const FiniteSpace& a, const FiniteSpace& b) {
  const FiniteSpace fs[] = {a, b};
  return product(fs);
}

bool same_shape(const Interface& a, const Interface& b) {
  return a.input.size() == b.input.size() && a.output.size() == b.output.size();
}

Interface parallel(const Interface& a, const Interface& b) {
  return {product(a.input, b.input), product(a.output, b.output)};
}

Lens Lens::identity(const Interface& iface) {
  Lens l{iface, iface, {}, {}};
  for (std::size_t o = 0; o < iface.output.size(); ++o) {
    l.fwd.push_back(o);
    for (std::size_t i = 0; i < iface.input.size(); ++i) l.bwd.push_back(i);
  }
  return l;
}

Verdict check_lens(const Lens& l) {
  const auto no = l.dom.output.size();
  if (l.fwd.size() != no) return Verdict::failure("forward table has the wrong number of rows");
  if (l.bwd.size() != no * l.cod.input.size()) {
    return Verdict::failure("backward table has the wrong number of rows");
  }
  for (std::size_t o = 0; o < no; ++o) {
    if (l.fwd[o] >= l.cod.output.size()) {
      return Verdict::failure("forward entry " + std::to_string(o) + " out of range");
    }
  }
  for (std::size_t k = 0; k < l.bwd.size(); ++k) {
    if (l.bwd[k] >= l.dom.input.size()) {
      return Verdict::failure("backward entry " + std::to_string(k) + " out of range");
    }
  }
  return Verdict::pass();
}

Lens lens_compose(const Lens& first, const Lens& second) {
  if (!same_shape(first.cod, second.dom)) {
    fail(ErrorCode::interface_mismatch, "lenses do not meet at a common interface");
  }
  Lens out{first.dom, second.cod, {}, {}};
  const auto ni = second.cod.input.size();
  out.fwd.reserve(first.fwd.size());
  out.bwd.reserve(first.fwd.size() * ni);
  for (std::size_t o = 0; o < first.dom.output.size(); ++o) {
    const auto mid = first.forward(o);
    out.fwd.push_back(second.forward(mid));
    for (std::size_t i = 0; i < ni; ++i) out.bwd.push_back(first.backward(o, second.backward(mid, i)));
  }
  return out;
}

Lens lens_parallel(const Lens& a, const Lens& b) {
  Lens out{parallel(a.dom, b.dom), parallel(a.cod, b.cod), {}, {}};
  const auto nbo = b.cod.output.size();
  const auto nai = a.cod.input.size();
  const auto nbi = b.cod.input.size();
  const auto nbdi = b.dom.input.size();
  for (std::size_t oa = 0; oa < a.dom.output.size(); ++oa) {
    for (std::size_t ob = 0; ob < b.dom.output.size(); ++ob) {
      out.fwd.push_back(a.forward(oa) * nbo + b.forward(ob));
      for (std::size_t ia = 0; ia < nai; ++ia) {
        for (std::size_t ib = 0; ib < nbi; ++ib) {
          out.bwd.push_back(a.backward(oa, ia) * nbdi + b.backward(ob, ib));
        }
      }
    }
  }
  return out;
}

Chart Chart::identity(const Interface& iface) {
  Chart c{iface, iface, {}, {}};
  for (std::size_t o = 0; o < iface.output.size(); ++o) {
    c.fwd.push_back(o);
    for (std::size_t i = 0; i < iface.input.size(); ++i) c.push.push_back(i);
  }
  return c;
}

Verdict check_chart(const Chart& c) {
  const auto no = c.dom.output.size();
  if (c.fwd.size() != no) {
    return Verdict::failure("forward map has " + std::to_string(c.fwd.size()) + " rows, expected " +
                            std::to_string(no));
  }
  if (c.push.size() != no * c.dom.input.size()) {
    return Verdict::failure("input map has " + std::to_string(c.push.size()) + " rows, expected " +
                            std::to_string(no * c.dom.input.size()));
  }
  for (std::size_t o = 0; o < no; ++o) {
    if (c.fwd[o] >= c.cod.output.size()) {
      return Verdict::failure("forward entry for output '" + c.dom.output.name(o) + "' out of range");
    }
  }
  for (std::size_t k = 0; k < c.push.size(); ++k) {
    if (c.push[k] >= c.cod.input.size()) {
      return Verdict::failure("input entry " + std::to_string(k) + " out of range");
    }
  }
  return Verdict::pass();
}

Chart compose_charts(const Chart& first, const Chart& second) {
  if (!same_shape(first.cod, second.dom)) {
    fail(ErrorCode::interface_mismatch, "charts do not meet at a common interface");
  }
  Chart out{first.dom, second.cod, {}, {}};
  for (std::size_t o = 0; o < first.dom.output.size(); ++o) {
    const auto mid = first.forward(o);
    out.fwd.push_back(second.forward(mid));
    for (std::size_t i = 0; i < first.dom.input.size(); ++i) {
      out.push.push_back(second.pushed(mid, first.pushed(o, i)));
    }
  }
  return out;
}

Verdict check_lens_square(const Lens& top, const Lens& bottom, const Chart& left, const Chart& right) {
  if (!same_shape(top.dom, left.dom) || !same_shape(bottom.dom, left.cod) ||
      !same_shape(top.cod, right.dom) || !same_shape(bottom.cod, right.cod)) {
    fail(ErrorCode::interface_mismatch, "lens square boundaries do not match");
  }
  for (std::size_t a = 0; a < top.dom.output.size(); ++a) {
    if (right.forward(top.forward(a)) != bottom.forward(left.forward(a))) {
      return Verdict::failure("output square fails at '" + top.dom.output.name(a) + "'");
    }
    for (std::size_t b = 0; b < top.cod.input.size(); ++b) {
      auto via_top = left.pushed(a, top.backward(a, b));
      auto via_bottom = bottom.backward(left.forward(a), right.pushed(top.forward(a), b));
      if (via_top != via_bottom) {
        return Verdict::failure("input square fails at ('" + top.dom.output.name(a) + "', '" +
                                top.cod.input.name(b) + "')");
      }
    }
  }
  return Verdict::pass();
}

Interface timeline_interface(std::size_t horizon) {
  std::vector<std::string> times;
  for (std::size_t k = 0; k <= horizon; ++k) times.push_back("t" + std::to_string(k));
  return {FiniteSpace({"tick"}), FiniteSpace(std::move(times))};
}

Chart trajectory_chart(std::size_t horizon, const Interface& cod, std::span<const std::size_t> inputs,
                       std::span<const std::size_t> outputs) {
  if (outputs.size() != horizon + 1 || (inputs.size() != horizon && inputs.size() != horizon + 1)) {
    fail(ErrorCode::arity_mismatch, "window needs T+1 outputs and T (or T+1) inputs");
  }
  Chart c{timeline_interface(horizon), cod, {}, {}};
  for (std::size_t k = 0; k <= horizon; ++k) {
    c.fwd.push_back(outputs[k]);
    if (k < inputs.size()) {
      c.push.push_back(inputs[k]);
    } else {
      c.push.push_back(inputs.empty() ? 0 : inputs.back());
    }
  }
  return c;
}

// ---------------------------------------------------------------------------

const PortType& DirectedWiringDiagram::type(std::string_view name) const {
  for (const auto& t : types) {
    if (t.name == name) return t;
  }
  fail(ErrorCode::unknown_name, "undeclared port type '" + std::string(name) + "'");
}

namespace {

std::string describe(const DirectedWiringDiagram& d, const PortRef& ref, bool is_source) {
  if (!ref.box) {
    const auto& ports = is_source ? d.outer.inputs : d.outer.outputs;
    return "outer." + (ref.port < ports.size() ? ports[ref.port].name : std::to_string(ref.port));
  }
  if (*ref.box >= d.boxes.size()) return "box#" + std::to_string(*ref.box);
  const auto& box = d.boxes[*ref.box];
  const auto& ports = is_source ? box.outputs : box.inputs;
  return box.name + "." + (ref.port < ports.size() ? ports[ref.port].name : std::to_string(ref.port));
}

const PortDecl* lookup(const DirectedWiringDiagram& d, const PortRef& ref, bool is_source) {
  const BoxDecl* box = &d.outer;
  if (ref.box) {
    if (*ref.box >= d.boxes.size()) return nullptr;
    box = &d.boxes[*ref.box];
  }
  // Sources are box outputs or outer inputs; sinks the other way round.
  const auto& ports = (ref.box.has_value() == is_source) ? box->outputs : box->inputs;
  return ref.port < ports.size() ? &ports[ref.port] : nullptr;
}

}  // namespace

void DirectedWiringDiagram::validate() const {
  auto check_types = [&](const BoxDecl& b) {
    for (const auto& p : b.inputs) type(p.type);
    for (const auto& p : b.outputs) type(p.type);
  };
  check_types(outer);
  for (const auto& b : boxes) check_types(b);

  for (const auto& w : wires) {
    const auto* src = lookup(*this, w.source, true);
    const auto* dst = lookup(*this, w.sink, false);
    if (!src) fail(ErrorCode::dangling_port, "wire source " + describe(*this, w.source, true) + " does not exist");
    if (!dst) fail(ErrorCode::dangling_port, "wire sink " + describe(*this, w.sink, false) + " does not exist");
    if (src->type != dst->type) {
      fail(ErrorCode::type_clash, "wire " + describe(*this, w.source, true) + " -> " +
                                      describe(*this, w.sink, false) + " joins '" + src->type +
                                      "' to '" + dst->type + "'");
    }
    if (!w.source.box && !w.sink.box) {
      fail(ErrorCode::cyclic_through_outer_input,
           "outer input " + describe(*this, w.source, true) + " routed straight to outer output " +
               describe(*this, w.sink, false));
    }
  }

  auto count_feeds = [&](const PortRef& sink) {
    return std::count_if(wires.begin(), wires.end(), [&](const Wire& w) { return w.sink == sink; });
  };
  auto require_single = [&](const PortRef& sink) {
    auto n = count_feeds(sink);
    if (n == 0) fail(ErrorCode::dangling_port, "port " + describe(*this, sink, false) + " is not fed");
    if (n > 1) {
      fail(ErrorCode::multiple_feeds,
           "port " + describe(*this, sink, false) + " is fed " + std::to_string(n) + " times");
    }
  };
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    for (std::size_t p = 0; p < boxes[b].inputs.size(); ++p) require_single({b, p});
  }
  for (std::size_t p = 0; p < outer.outputs.size(); ++p) require_single({std::nullopt, p});
}

PortRef DirectedWiringDiagram::source_of(const PortRef& sink) const {
  for (const auto& w : wires) {
    if (w.sink == sink) return w.source;
  }
  fail(ErrorCode::dangling_port, "port " + describe(*this, sink, false) + " is not fed");
}

FiniteSpace port_space(const DirectedWiringDiagram& d, std::span<const PortDecl> ports) {
  std::vector<FiniteSpace> factors;
  for (const auto& p : ports) {
    const auto& t = d.type(p.type);
    if (t.is_real()) {
      fail(ErrorCode::type_clash, "port '" + p.name + "' carries a real value, not a finite one");
    }
    factors.emplace_back(*t.values);
  }
  return product(factors);
}

Interface box_interface(const DirectedWiringDiagram& d, const BoxDecl& box) {
  return {port_space(d, box.inputs), port_space(d, box.outputs)};
}

Interface inner_interface(const DirectedWiringDiagram& d) {
  std::vector<FiniteSpace> ins, outs;
  for (const auto& b : d.boxes) {
    auto iface = box_interface(d, b);
    ins.push_back(iface.input);
    outs.push_back(iface.output);
  }
  return {product(ins), product(outs)};
}

namespace {

struct Radix {
  std::vector<std::size_t> sizes;

  std::size_t total() const {
    std::size_t n = 1;
    for (auto s : sizes) n *= s;
    return n;
  }
  std::vector<std::size_t> decode(std::size_t index) const {
    std::vector<std::size_t> digits(sizes.size());
    for (std::size_t k = sizes.size(); k-- > 0;) {
      digits[k] = index % sizes[k];
      index /= sizes[k];
    }
    return digits;
  }
  std::size_t encode(std::span<const std::size_t> digits) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) index = index * sizes[k] + digits[k];
    return index;
  }
};

constexpr std::size_t max_table_rows = std::size_t{1} << 24;

}  // namespace

Lens dwd_to_lens(const DirectedWiringDiagram& d) {
  d.validate();
  Lens out{inner_interface(d), box_interface(d, d.outer), {}, {}};

  // Flat positions of every inner output port, in box-major order.
  std::vector<std::size_t> out_base(d.boxes.size() + 1, 0);
  std::vector<std::size_t> in_base(d.boxes.size() + 1, 0);
  Radix inner_out, inner_in, outer_in, outer_out;
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    out_base[b + 1] = out_base[b] + d.boxes[b].outputs.size();
    in_base[b + 1] = in_base[b] + d.boxes[b].inputs.size();
    for (const auto& p : d.boxes[b].outputs) inner_out.sizes.push_back(d.type(p.type).values->size());
    for (const auto& p : d.boxes[b].inputs) inner_in.sizes.push_back(d.type(p.type).values->size());
  }
  for (const auto& p : d.outer.inputs) outer_in.sizes.push_back(d.type(p.type).values->size());
  for (const auto& p : d.outer.outputs) outer_out.sizes.push_back(d.type(p.type).values->size());
  if (inner_out.total() * std::max<std::size_t>(outer_in.total(), 1) > max_table_rows) {
    fail(ErrorCode::horizon_too_large, "wiring diagram lens table is too large to tabulate");
  }

  std::vector<PortRef> outer_sources;
  for (std::size_t p = 0; p < d.outer.outputs.size(); ++p) outer_sources.push_back(d.source_of({std::nullopt, p}));
  std::vector<PortRef> inner_sources;
  for (std::size_t b = 0; b < d.boxes.size(); ++b) {
    for (std::size_t p = 0; p < d.boxes[b].inputs.size(); ++p) inner_sources.push_back(d.source_of({b, p}));
  }

  std::vector<std::size_t> digits_out(outer_out.sizes.size());
  std::vector<std::size_t> digits_in(inner_in.sizes.size());
  for (std::size_t o = 0; o < inner_out.total(); ++o) {
    auto inner_vals = inner_out.decode(o);
    for (std::size_t p = 0; p < outer_sources.size(); ++p) {
      const auto& s = outer_sources[p];
      digits_out[p] = inner_vals[out_base[*s.box] + s.port];
    }
    out.fwd.push_back(outer_out.encode(digits_out));
    for (std::size_t i = 0; i < outer_in.total(); ++i) {
      auto outer_vals = outer_in.decode(i);
      for (std::size_t k = 0; k < inner_sources.size(); ++k) {
        const auto& s = inner_sources[k];
        digits_in[k] = s.box ? inner_vals[out_base[*s.box] + s.port] : outer_vals[s.port];
      }
      out.bwd.push_back(inner_in.encode(digits_in));
    }
  }
  return out;
}

DirectedWiringDiagram dwd_substitute(const DirectedWiringDiagram& outer, std::size_t k,
                                     const DirectedWiringDiagram& inner) {
  outer.validate();
  inner.validate();
  if (k >= outer.boxes.size()) fail(ErrorCode::index_out_of_range, "no box to substitute into");
  const auto& slot = outer.boxes[k];
  auto same_types = [](const std::vector<PortDecl>& a, const std::vector<PortDecl>& b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(),
                      [](const PortDecl& x, const PortDecl& y) { return x.type == y.type; });
  };
  if (!same_types(slot.inputs, inner.outer.inputs) || !same_types(slot.outputs, inner.outer.outputs)) {
    fail(ErrorCode::interface_mismatch,
         "diagram boundary does not match box '" + slot.name + "'");
  }

  DirectedWiringDiagram out;
  out.types = outer.types;
  for (const auto& t : inner.types) {
    auto it = std::find_if(out.types.begin(), out.types.end(),
                           [&](const PortType& u) { return u.name == t.name; });
    if (it == out.types.end()) {
      out.types.push_back(t);
    } else if (*it != t) {
      fail(ErrorCode::type_clash, "type '" + t.name + "' defined differently in the two diagrams");
    }
  }
  out.outer = outer.outer;
  const auto ni = inner.boxes.size();
  for (std::size_t b = 0; b < outer.boxes.size(); ++b) {
    if (b == k) {
      for (const auto& ib : inner.boxes) out.boxes.push_back(ib);
    } else {
      out.boxes.push_back(outer.boxes[b]);
    }
  }

  auto remap_outer_box = [&](std::size_t b) { return b < k ? b : b + ni - 1; };
  auto resolve = [&](const PortRef& src) -> PortRef {
    if (src.box && *src.box == k) {
      auto s = inner.source_of({std::nullopt, src.port});
      return {k + *s.box, s.port};
    }
    if (src.box) return {remap_outer_box(*src.box), src.port};
    return src;
  };
  for (const auto& w : outer.wires) {
    if (w.sink.box && *w.sink.box == k) continue;
    PortRef sink = w.sink;
    if (sink.box) sink.box = remap_outer_box(*sink.box);
    out.wires.push_back({resolve(w.source), sink});
  }
  for (const auto& w : inner.wires) {
    if (!w.sink.box) continue;
    PortRef sink{k + *w.sink.box, w.sink.port};
    PortRef source = w.source.box ? PortRef{k + *w.source.box, w.source.port}
                                  : resolve(outer.source_of({k, w.source.port}));
    out.wires.push_back({source, sink});
  }
  return out;
}

}  // namespace dots
