#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dots {

/// A total function {0..dom-1} -> {0..cod-1}, stored as a dense table.
class FinFunction {
 public:
  FinFunction() = default;
  FinFunction(std::size_t cod, std::vector<std::size_t> table);

  static FinFunction identity(std::size_t n);
  /// The unique map out of the empty set.
  static FinFunction initial(std::size_t cod) { return FinFunction(cod, {}); }
  static FinFunction constant(std::size_t dom, std::size_t cod, std::size_t value);

  std::size_t dom() const noexcept { return table_.size(); }
  std::size_t cod() const noexcept { return cod_; }
  std::span<const std::size_t> table() const noexcept { return table_; }
  std::size_t operator()(std::size_t i) const { return table_.at(i); }

  bool is_injective() const;
  bool is_surjective() const;

  friend bool operator==(const FinFunction&, const FinFunction&) = default;

 private:
  std::size_t cod_ = 0;
  std::vector<std::size_t> table_;
};

std::string to_string(const FinFunction& f);

/// g after f; requires f.cod() == g.dom().
FinFunction compose(const FinFunction& f, const FinFunction& g);

/// Blockwise sum with left-nested offsets.
FinFunction coproduct(std::span<const FinFunction> fs);
FinFunction coproduct(const FinFunction& a, const FinFunction& b);

/// Coproduct injection of block `k` into the sum of `sizes`.
FinFunction coproduct_injection(std::span<const std::size_t> sizes, std::size_t k);

/// Copairing [f, g]: A + B -> C.
FinFunction copair(const FinFunction& f, const FinFunction& g);

std::optional<FinFunction> inverse(const FinFunction& f);
inline bool is_iso(const FinFunction& f) { return inverse(f).has_value(); }

/// True when every element of the common codomain is hit by f or g.
bool jointly_surjective(const FinFunction& f, const FinFunction& g);

/// Disjoint-set forest with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_size_;
};

struct PushoutResult {
  std::size_t apex = 0;
  FinFunction inj_left;
  FinFunction inj_right;
};

/// Pushout of the span B <-f- A -g-> C. Classes of B + C are numbered by
/// their smallest member (B block first), so the output is canonical.
PushoutResult pushout(const FinFunction& f, const FinFunction& g);

struct PullbackResult {
  std::size_t apex = 0;
  FinFunction proj_left;
  FinFunction proj_right;
};

/// Pullback of the cospan B -f-> D <-g- C, apex enumerated in lexicographic
/// (b, c) order.
PullbackResult pullback(const FinFunction& f, const FinFunction& g);

/// A finite set typed over a fixed list of type names.
struct TypedFinSet {
  std::vector<std::string> types;
  FinFunction typing;  // size -> |types|

  std::size_t size() const noexcept { return typing.dom(); }
  static TypedFinSet untyped(std::size_t n);
  friend bool operator==(const TypedFinSet&, const TypedFinSet&) = default;
};

/// Checks that `f` carries the typing of `from` onto the typing of `to`.
bool preserves_typing(const FinFunction& f, const TypedFinSet& from, const TypedFinSet& to);

}  // namespace dots
