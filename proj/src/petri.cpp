#include "dots/petri.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace dots {

Multiset::Multiset(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  for (const auto& [s, k] : entries) {
    if (k == 0) continue;
    if (!entries_.empty() && entries_.back().first == s) {
      entries_.back().second += k;
    } else {
      entries_.emplace_back(s, k);
    }
  }
}

std::size_t Multiset::total() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.second;
  return n;
}

std::size_t Multiset::count(std::size_t species) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{species, 0});
  return (it != entries_.end() && it->first == species) ? it->second : 0;
}

Multiset multiset_push(const FinFunction& f, const Multiset& ms) {
  std::vector<Multiset::Entry> out;
  for (const auto& [s, k] : ms.entries()) {
    if (s >= f.dom()) {
      fail(ErrorCode::index_out_of_range,
           "species " + std::to_string(s) + " outside the domain of " + to_string(f));
    }
    out.emplace_back(f(s), k);
  }
  return Multiset(std::move(out));
}

void PetriNet::validate() const {
  if (src.size() != transitions.size() || tgt.size() != transitions.size()) {
    fail(ErrorCode::arity_mismatch, "every transition needs one source and one target multiset");
  }
  auto check = [&](const Multiset& ms, std::size_t t) {
    for (const auto& e : ms.entries()) {
      if (e.first >= species.size()) {
        fail(ErrorCode::index_out_of_range,
             "transition '" + transitions[t] + "' refers to a missing species");
      }
    }
  };
  for (std::size_t t = 0; t < transitions.size(); ++t) {
    check(src[t], t);
    check(tgt[t], t);
  }
}

PetriNet PetriNet::discrete(std::vector<std::string> species_names) {
  return {std::move(species_names), {}, {}, {}};
}

PetriMap PetriMap::identity(const PetriNet& p) {
  return {FinFunction::identity(p.num_species()), FinFunction::identity(p.num_transitions())};
}

PetriMap compose(const PetriMap& first, const PetriMap& second) {
  return {compose(first.species, second.species), compose(first.transitions, second.transitions)};
}

Verdict check_petri_map(const PetriMap& m, const PetriNet& p, const PetriNet& q) {
  if (m.species.dom() != p.num_species() || m.species.cod() != q.num_species() ||
      m.transitions.dom() != p.num_transitions() || m.transitions.cod() != q.num_transitions()) {
    fail(ErrorCode::arity_mismatch, "Petri map does not fit its source and target nets");
  }
  for (std::size_t t = 0; t < p.num_transitions(); ++t) {
    auto image = m.transitions(t);
    if (multiset_push(m.species, p.src[t]) != q.src[image]) {
      return Verdict::failure("source square fails at transition '" + p.transitions[t] + "'");
    }
    if (multiset_push(m.species, p.tgt[t]) != q.tgt[image]) {
      return Verdict::failure("target square fails at transition '" + p.transitions[t] + "'");
    }
  }
  return Verdict::pass();
}

namespace {

std::vector<std::string> merged_labels(const PushoutResult& po,
                                       const std::vector<std::string>& left_names,
                                       const std::vector<std::string>& right_names) {
  std::vector<std::vector<std::string>> from_left(po.apex), from_right(po.apex);
  auto add = [](std::vector<std::string>& bucket, const std::string& name) {
    if (std::find(bucket.begin(), bucket.end(), name) == bucket.end()) bucket.push_back(name);
  };
  for (std::size_t x = 0; x < left_names.size(); ++x) add(from_left[po.inj_left(x)], left_names[x]);
  for (std::size_t x = 0; x < right_names.size(); ++x) {
    add(from_right[po.inj_right(x)], right_names[x]);
  }

  std::vector<std::string> labels(po.apex);
  for (std::size_t c = 0; c < po.apex; ++c) {
    const auto& parts = from_left[c].empty() ? from_right[c] : from_left[c];
    for (std::size_t k = 0; k < parts.size(); ++k) labels[c] += (k ? "/" : "") + parts[k];
  }
  // Distinct classes may still share a label; suffix later ones.
  std::set<std::string> used;
  for (auto& label : labels) {
    if (used.insert(label).second) continue;
    for (int k = 2;; ++k) {
      auto candidate = label + "_" + std::to_string(k);
      if (used.insert(candidate).second) {
        label = candidate;
        break;
      }
    }
  }
  return labels;
}

}  // namespace

PetriPushout petri_pushout(const PetriMap& left, const PetriMap& right, const PetriNet& p,
                           const PetriNet& a, const PetriNet& q) {
  if (auto v = check_petri_map(left, a, p); !v) fail(ErrorCode::invalid_leg, "left leg: " + v.detail);
  if (auto v = check_petri_map(right, a, q); !v) {
    fail(ErrorCode::invalid_leg, "right leg: " + v.detail);
  }
  auto species = pushout(left.species, right.species);
  auto trans = pushout(left.transitions, right.transitions);

  PetriNet r;
  r.species = merged_labels(species, p.species, q.species);
  r.transitions = merged_labels(trans, p.transitions, q.transitions);
  r.src.resize(trans.apex);
  r.tgt.resize(trans.apex);
  std::vector<bool> filled(trans.apex, false);
  for (std::size_t t = 0; t < p.num_transitions(); ++t) {
    auto c = trans.inj_left(t);
    if (filled[c]) continue;
    r.src[c] = multiset_push(species.inj_left, p.src[t]);
    r.tgt[c] = multiset_push(species.inj_left, p.tgt[t]);
    filled[c] = true;
  }
  for (std::size_t t = 0; t < q.num_transitions(); ++t) {
    auto c = trans.inj_right(t);
    if (filled[c]) continue;
    r.src[c] = multiset_push(species.inj_right, q.src[t]);
    r.tgt[c] = multiset_push(species.inj_right, q.tgt[t]);
    filled[c] = true;
  }
  return {std::move(r), {species.inj_left, trans.inj_left}, {species.inj_right, trans.inj_right}};
}

void OpenPetriNet::validate() const {
  net.validate();
  if (ports.cod() != net.num_species()) {
    fail(ErrorCode::arity_mismatch, "port map must land in the species of the net");
  }
  if (!port_types.empty() && port_types.size() != ports.dom()) {
    fail(ErrorCode::arity_mismatch, "one port type per port expected");
  }
}

Verdict check_open_map(const OpenPetriMap& m, const OpenPetriNet& a, const OpenPetriNet& b) {
  if (m.interface_map.dom() != a.interface() || m.interface_map.cod() != b.interface()) {
    fail(ErrorCode::arity_mismatch, "interface map does not fit the two interfaces");
  }
  if (auto v = check_petri_map(m.net_map, a.net, b.net); !v) return v;
  for (std::size_t port = 0; port < a.interface(); ++port) {
    if (m.net_map.species(a.ports(port)) != b.ports(m.interface_map(port))) {
      return Verdict::failure("port square fails at port " + std::to_string(port));
    }
  }
  return Verdict::pass();
}

OpenPetriNet open_parallel(std::span<const OpenPetriNet> systems) {
  OpenPetriNet out;
  std::vector<FinFunction> ports;
  bool typed = false;
  for (const auto& s : systems) typed = typed || !s.port_types.empty();
  std::size_t offset = 0;
  for (const auto& s : systems) {
    auto shift = [offset](const Multiset& ms) {
      std::vector<Multiset::Entry> e(ms.entries().begin(), ms.entries().end());
      for (auto& entry : e) entry.first += offset;
      return Multiset(std::move(e));
    };
    out.net.species.insert(out.net.species.end(), s.net.species.begin(), s.net.species.end());
    out.net.transitions.insert(out.net.transitions.end(), s.net.transitions.begin(),
                               s.net.transitions.end());
    for (std::size_t t = 0; t < s.net.num_transitions(); ++t) {
      out.net.src.push_back(shift(s.net.src[t]));
      out.net.tgt.push_back(shift(s.net.tgt[t]));
    }
    ports.push_back(s.ports);
    if (typed) {
      if (s.port_types.empty()) {
        out.port_types.insert(out.port_types.end(), s.interface(), "*");
      } else {
        out.port_types.insert(out.port_types.end(), s.port_types.begin(), s.port_types.end());
      }
    }
    offset += s.net.num_species();
  }
  out.ports = coproduct(ports);
  return out;
}

OpenPetriNet open_parallel(const OpenPetriNet& a, const OpenPetriNet& b) {
  const OpenPetriNet systems[] = {a, b};
  return open_parallel(systems);
}

UwdComposite uwd_apply_detailed(const Cospan& uwd, std::span<const OpenPetriNet> systems,
                                std::span<const std::string> junction_names) {
  std::size_t total_ports = 0;
  for (const auto& s : systems) total_ports += s.interface();
  if (total_ports != uwd.inner()) {
    fail(ErrorCode::boundary_mismatch,
         "diagram has " + std::to_string(uwd.inner()) + " inner ports but the systems expose " +
             std::to_string(total_ports));
  }
  auto sum = open_parallel(systems);
  if (uwd.typing() && !sum.port_types.empty()) {
    const auto& ty = *uwd.typing();
    for (std::size_t port = 0; port < total_ports; ++port) {
      const auto& want = ty.types[ty.inner(port)];
      if (sum.port_types[port] != want) {
        fail(ErrorCode::type_clash, "port " + std::to_string(port) + " has type '" +
                                        sum.port_types[port] + "' but the diagram expects '" +
                                        want + "'");
      }
    }
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < uwd.apex(); ++j) {
    names.push_back(j < junction_names.size() ? junction_names[j] : "j" + std::to_string(j));
  }
  std::vector<std::string> port_names;
  for (std::size_t m = 0; m < total_ports; ++m) port_names.push_back("p" + std::to_string(m));
  auto boundary = PetriNet::discrete(std::move(port_names));
  auto junctions = PetriNet::discrete(std::move(names));

  PetriMap to_sum{sum.ports, FinFunction::initial(sum.net.num_transitions())};
  PetriMap to_junctions{uwd.left(), FinFunction::initial(0)};
  auto po = petri_pushout(to_sum, to_junctions, sum.net, boundary, junctions);

  OpenPetriNet composite;
  composite.net = std::move(po.net);
  composite.ports = compose(uwd.right(), po.inj_right.species);
  if (uwd.typing()) {
    const auto& ty = *uwd.typing();
    for (std::size_t n = 0; n < uwd.outer(); ++n) composite.port_types.push_back(ty.types[ty.outer(n)]);
  }
  return {std::move(composite), po.inj_left.species, po.inj_right.species};
}

OpenPetriNet uwd_apply(const Cospan& uwd, std::span<const OpenPetriNet> systems,
                       std::span<const std::string> junction_names) {
  return uwd_apply_detailed(uwd, systems, junction_names).system;
}

OpenPetriMap uwd_apply_map(const CospanMap& sq, const Cospan& src_uwd, const Cospan& tgt_uwd,
                           std::span<const OpenPetriMap> maps,
                           std::span<const OpenPetriNet> src_systems,
                           std::span<const OpenPetriNet> tgt_systems) {
  if (maps.size() != src_systems.size() || maps.size() != tgt_systems.size()) {
    fail(ErrorCode::arity_mismatch, "need one system map per box");
  }
  if (auto v = check_cospan_map(sq, src_uwd, tgt_uwd); !v) {
    fail(ErrorCode::invalid_leg, "interaction map: " + v.detail);
  }
  std::vector<FinFunction> iface, species, trans;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (auto v = check_open_map(maps[k], src_systems[k], tgt_systems[k]); !v) {
      fail(ErrorCode::invalid_leg, "system map " + std::to_string(k) + ": " + v.detail);
    }
    iface.push_back(maps[k].interface_map);
    species.push_back(maps[k].net_map.species);
    trans.push_back(maps[k].net_map.transitions);
  }
  if (coproduct(iface) != sq.m) {
    fail(ErrorCode::arity_mismatch, "inner boundary map disagrees with the system interface maps");
  }

  auto a = uwd_apply_detailed(src_uwd, src_systems);
  auto b = uwd_apply_detailed(tgt_uwd, tgt_systems);
  auto sum_species = coproduct(species);

  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> f(a.system.net.num_species(), unset);
  auto set = [&](std::size_t cls, std::size_t image) {
    if (f[cls] != unset && f[cls] != image) {
      fail(ErrorCode::invalid_leg, "induced species map is not well defined");
    }
    f[cls] = image;
  };
  for (std::size_t x = 0; x < sum_species.dom(); ++x) {
    set(a.species_from_components(x), b.species_from_components(sum_species(x)));
  }
  for (std::size_t j = 0; j < src_uwd.apex(); ++j) {
    set(a.species_from_junctions(j), b.species_from_junctions(sq.j(j)));
  }
  return {sq.n, {FinFunction(b.system.net.num_species(), std::move(f)), coproduct(trans)}};
}

namespace {

using TransitionKey = std::pair<Multiset, Multiset>;

/// Per-species signature: sorted (in-source, in-target) multiplicities.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> species_signatures(const PetriNet& p) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> sig(p.num_species());
  for (std::size_t t = 0; t < p.num_transitions(); ++t) {
    std::set<std::size_t> touched;
    for (const auto& e : p.src[t].entries()) touched.insert(e.first);
    for (const auto& e : p.tgt[t].entries()) touched.insert(e.first);
    for (auto s : touched) sig[s].emplace_back(p.src[t].count(s), p.tgt[t].count(s));
  }
  for (auto& v : sig) std::sort(v.begin(), v.end());
  return sig;
}

std::optional<PetriMap> iso_search(const PetriNet& p, const PetriNet& q,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& forced) {
  if (p.num_species() != q.num_species() || p.num_transitions() != q.num_transitions()) {
    return std::nullopt;
  }
  const auto ns = p.num_species();
  auto sig_p = species_signatures(p);
  auto sig_q = species_signatures(q);
  {
    auto a = sig_p, b = sig_q;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }

  std::map<TransitionKey, std::vector<std::size_t>> q_by_key;
  for (std::size_t t = 0; t < q.num_transitions(); ++t) {
    q_by_key[{q.src[t], q.tgt[t]}].push_back(t);
  }

  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> fwd(ns, unset), bwd(ns, unset);
  for (auto [x, y] : forced) {
    if (sig_p[x] != sig_q[y]) return std::nullopt;
    if ((fwd[x] != unset && fwd[x] != y) || (bwd[y] != unset && bwd[y] != x)) return std::nullopt;
    fwd[x] = y;
    bwd[y] = x;
  }

  // Most constrained species first: smallest candidate pool.
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < ns; ++s) {
    if (fwd[s] == unset) order.push_back(s);
  }
  auto pool = [&](std::size_t s) {
    return std::count(sig_q.begin(), sig_q.end(), sig_p[s]);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pool(a) < pool(b); });

  // A transition can be checked once every species it touches is placed.
  std::vector<std::size_t> position(ns, 0);
  for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k + 1;
  std::vector<std::vector<std::size_t>> ready_at(order.size() + 1);
  for (std::size_t t = 0; t < p.num_transitions(); ++t) {
    std::size_t last = 0;
    for (const auto& e : p.src[t].entries()) last = std::max(last, position[e.first]);
    for (const auto& e : p.tgt[t].entries()) last = std::max(last, position[e.first]);
    ready_at[last].push_back(t);
  }

  std::map<TransitionKey, std::size_t> used;
  auto partial_push = [&](const Multiset& ms) {
    std::vector<Multiset::Entry> e;
    for (const auto& [s, k] : ms.entries()) e.emplace_back(fwd[s], k);
    return Multiset(std::move(e));
  };
  auto image_key = [&](std::size_t t) {
    return TransitionKey{partial_push(p.src[t]), partial_push(p.tgt[t])};
  };
  auto admit = [&](std::size_t level, std::vector<TransitionKey>& taken) {
    for (auto t : ready_at[level]) {
      auto key = image_key(t);
      auto it = q_by_key.find(key);
      if (it == q_by_key.end() || used[key] >= it->second.size()) return false;
      ++used[key];
      taken.push_back(std::move(key));
    }
    return true;
  };
  auto release = [&](std::vector<TransitionKey>& taken) {
    for (const auto& k : taken) --used[k];
    taken.clear();
  };

  std::function<bool(std::size_t)> search = [&](std::size_t k) {
    if (k == order.size()) return true;
    auto x = order[k];
    for (std::size_t y = 0; y < ns; ++y) {
      if (bwd[y] != unset || sig_q[y] != sig_p[x]) continue;
      fwd[x] = y;
      bwd[y] = x;
      std::vector<TransitionKey> taken;
      if (admit(k + 1, taken) && search(k + 1)) return true;
      release(taken);
      fwd[x] = unset;
      bwd[y] = unset;
    }
    return false;
  };

  // Transitions touching only pre-placed species are checked up front.
  std::vector<TransitionKey> initial;
  if (!admit(0, initial) || !search(0)) return std::nullopt;

  FinFunction species(ns, std::move(fwd));
  std::map<TransitionKey, std::size_t> next;
  std::vector<std::size_t> g(p.num_transitions());
  for (std::size_t t = 0; t < p.num_transitions(); ++t) {
    TransitionKey key{multiset_push(species, p.src[t]), multiset_push(species, p.tgt[t])};
    g[t] = q_by_key.at(key).at(next[key]++);
  }
  return PetriMap{std::move(species), FinFunction(q.num_transitions(), std::move(g))};
}

}  // namespace

std::optional<PetriMap> petri_iso(const PetriNet& p, const PetriNet& q) {
  return iso_search(p, q, {});
}

std::optional<PetriMap> open_petri_iso(const OpenPetriNet& a, const OpenPetriNet& b) {
  if (a.interface() != b.interface()) return std::nullopt;
  std::vector<std::pair<std::size_t, std::size_t>> forced;
  for (std::size_t port = 0; port < a.interface(); ++port) {
    forced.emplace_back(a.ports(port), b.ports(port));
  }
  return iso_search(a.net, b.net, forced);
}

}  // namespace dots
