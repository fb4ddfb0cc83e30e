#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dots/error.hpp"
#include "dots/finset.hpp"
#include "dots/wiring.hpp"

namespace dots {

/// Sparse multiset over species indices: sorted, unique, multiplicities >= 1.
class Multiset {
 public:
  using Entry = std::pair<std::size_t, std::size_t>;  // (species, multiplicity)

  Multiset() = default;
  /// Accepts any entries; duplicates are summed and zero counts dropped.
  explicit Multiset(std::vector<Entry> entries);

  std::span<const Entry> entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t total() const noexcept;
  std::size_t count(std::size_t species) const noexcept;

  friend bool operator==(const Multiset&, const Multiset&) = default;
  friend auto operator<=>(const Multiset&, const Multiset&) = default;

 private:
  std::vector<Entry> entries_;
};

/// N[f] applied to a multiset: counts summed over the fibres of f.
Multiset multiset_push(const FinFunction& f, const Multiset& ms);

struct PetriNet {
  std::vector<std::string> species;
  std::vector<std::string> transitions;
  std::vector<Multiset> src;
  std::vector<Multiset> tgt;

  std::size_t num_species() const noexcept { return species.size(); }
  std::size_t num_transitions() const noexcept { return transitions.size(); }

  /// Throws unless src/tgt have one entry per transition with in-range species.
  void validate() const;

  static PetriNet discrete(std::vector<std::string> species_names);
  friend bool operator==(const PetriNet&, const PetriNet&) = default;
};

struct PetriMap {
  FinFunction species;
  FinFunction transitions;

  static PetriMap identity(const PetriNet& p);
  friend bool operator==(const PetriMap&, const PetriMap&) = default;
};

PetriMap compose(const PetriMap& first, const PetriMap& second);

Verdict check_petri_map(const PetriMap& m, const PetriNet& p, const PetriNet& q);

struct PetriPushout {
  PetriNet net;
  PetriMap inj_left;
  PetriMap inj_right;
};

/// Pushout of P <-left- A -right-> Q, computed componentwise on species and
/// transitions. A merged class takes the distinct names of its P-members
/// joined by '/', falling back to the Q-members when it has none.
PetriPushout petri_pushout(const PetriMap& left, const PetriMap& right, const PetriNet& p,
                           const PetriNet& a, const PetriNet& q);

struct OpenPetriNet {
  PetriNet net;
  FinFunction ports;                    // interface -> species
  std::vector<std::string> port_types;  // empty when untyped

  std::size_t interface() const noexcept { return ports.dom(); }
  void validate() const;
};

struct OpenPetriMap {
  FinFunction interface_map;
  PetriMap net_map;
};

Verdict check_open_map(const OpenPetriMap& m, const OpenPetriNet& a, const OpenPetriNet& b);

OpenPetriNet open_parallel(const OpenPetriNet& a, const OpenPetriNet& b);
OpenPetriNet open_parallel(std::span<const OpenPetriNet> systems);

/// Result of gluing systems along a wiring diagram, with the pushout legs
/// from the summed species and from the junctions into the composite species.
struct UwdComposite {
  OpenPetriNet system;
  FinFunction species_from_components;  // sum of component species -> composite species
  FinFunction species_from_junctions;   // junctions -> composite species
};

UwdComposite uwd_apply_detailed(const Cospan& uwd, std::span<const OpenPetriNet> systems,
                                std::span<const std::string> junction_names = {});

OpenPetriNet uwd_apply(const Cospan& uwd, std::span<const OpenPetriNet> systems,
                       std::span<const std::string> junction_names = {});

/// The map of composites induced by an interaction map and one system map per box.
OpenPetriMap uwd_apply_map(const CospanMap& sq, const Cospan& src_uwd, const Cospan& tgt_uwd,
                           std::span<const OpenPetriMap> maps,
                           std::span<const OpenPetriNet> src_systems,
                           std::span<const OpenPetriNet> tgt_systems);

/// Whether every leg out of the outer boundary is injective (the mono-restricted case).
inline bool has_monic_outer_leg(const Cospan& uwd) { return uwd.right().is_injective(); }

/// A bijective Petri map P -> Q, found by signature-pruned backtracking.
/// Exponential in the worst case; intended for nets of at most a few dozen species.
std::optional<PetriMap> petri_iso(const PetriNet& p, const PetriNet& q);

/// As petri_iso, additionally commuting with the port maps (identity on interfaces).
std::optional<PetriMap> open_petri_iso(const OpenPetriNet& a, const OpenPetriNet& b);

}  // namespace dots
