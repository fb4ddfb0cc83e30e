#pragma once

#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dots/error.hpp"
#include "dots/finset.hpp"

namespace dots {

/// Port types of the three objects of a cospan, over one shared list of type names.
struct CospanTyping {
  std::vector<std::string> types;
  FinFunction inner;  // M -> types
  FinFunction outer;  // N -> types
  FinFunction apex;   // J -> types

  friend bool operator==(const CospanTyping&, const CospanTyping&) = default;
};

/// An undirected wiring diagram M -left-> J <-right- N. M is the (coproduct of
/// the) inner boundaries, J the junctions and N the outer boundary.
class Cospan {
 public:
  Cospan() = default;
  Cospan(FinFunction left, FinFunction right, std::optional<CospanTyping> typing = std::nullopt);

  static Cospan identity(std::size_t n);
  static Cospan identity(const TypedFinSet& boundary);

  const FinFunction& left() const noexcept { return left_; }
  const FinFunction& right() const noexcept { return right_; }
  const std::optional<CospanTyping>& typing() const noexcept { return typing_; }

  std::size_t inner() const noexcept { return left_.dom(); }
  std::size_t outer() const noexcept { return right_.dom(); }
  std::size_t apex() const noexcept { return left_.cod(); }

  TypedFinSet inner_set() const;
  TypedFinSet outer_set() const;
  TypedFinSet apex_set() const;

  friend bool operator==(const Cospan&, const Cospan&) = default;

 private:
  FinFunction left_;
  FinFunction right_;
  std::optional<CospanTyping> typing_;
};

/// Nesting: `first` feeds its outer boundary into the inner boundary of `second`.
Cospan compose_cospans(const Cospan& first, const Cospan& second);

Cospan parallel_cospans(const Cospan& a, const Cospan& b);
Cospan parallel_cospans(std::span<const Cospan> cs);

/// A map of interactions: the two squares M->J<-N over M'->J'<-N'.
struct CospanMap {
  FinFunction m;
  FinFunction n;
  FinFunction j;
};

Verdict check_cospan_map(const CospanMap& sq, const Cospan& src, const Cospan& tgt);

/// Vertical pasting of squares: `lower` after `upper`.
CospanMap paste(const CospanMap& upper, const CospanMap& lower);

/// A bijection of apexes commuting with both legs (and typing), if any.
std::optional<FinFunction> cospan_iso(const Cospan& a, const Cospan& b);

/// A <-left- X -right-> B.
struct Span {
  FinFunction left;
  FinFunction right;

  std::size_t apex() const noexcept { return left.dom(); }
};

Span make_span(FinFunction left, FinFunction right);
Span identity_span(std::size_t n);

/// Composite by pullback of s1.right against s2.left.
Span compose_spans(const Span& s1, const Span& s2);

/// Merges type lists, keeping `a`'s order and appending the new names of `b`.
std::vector<std::string> merge_types(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b);

/// Loose morphisms that compose through a (co)limit oracle with identities.
template <class C>
concept CompositionContract = requires(const typename C::Loose& x, const typename C::Object& o) {
  { C::source(x) } -> std::convertible_to<typename C::Object>;
  { C::target(x) } -> std::convertible_to<typename C::Object>;
  { C::identity(o) } -> std::same_as<typename C::Loose>;
  { C::compose(x, x) } -> std::same_as<typename C::Loose>;
  { C::legs_admissible(x) } -> std::convertible_to<bool>;
};

/// Cospans of finite sets: both leg classes are all functions, the oracle is the pushout.
struct CospanContract {
  using Object = TypedFinSet;
  using Loose = Cospan;
  static Object source(const Loose& c) { return c.inner_set(); }
  static Object target(const Loose& c) { return c.outer_set(); }
  static Loose identity(const Object& o) { return Cospan::identity(o); }
  static Loose compose(const Loose& a, const Loose& b) { return compose_cospans(a, b); }
  static bool legs_admissible(const Loose& c) { return c.left().cod() == c.right().cod(); }
};

/// Left-to-right composite of a nonempty chain.
template <CompositionContract C>
typename C::Loose compose_chain(std::span<const typename C::Loose> chain) {
  if (chain.empty()) fail(ErrorCode::boundary_mismatch, "cannot compose an empty chain");
  typename C::Loose acc = chain.front();
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (!C::legs_admissible(chain[k])) fail(ErrorCode::invalid_leg, "inadmissible legs in chain");
    acc = C::compose(acc, chain[k]);
  }
  return acc;
}

}  // namespace dots
