#include "dots/finset.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dots/error.hpp"

namespace dots {

FinFunction::FinFunction(std::size_t cod, std::vector<std::size_t> table)
    : cod_(cod), table_(std::move(table)) {
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i] >= cod_) {
      fail(ErrorCode::index_out_of_range,
           "table[" + std::to_string(i) + "] = " + std::to_string(table_[i]) +
               " is not below codomain " + std::to_string(cod_));
    }
  }
}

FinFunction FinFunction::identity(std::size_t n) {
  std::vector<std::size_t> t(n);
  std::iota(t.begin(), t.end(), std::size_t{0});
  return FinFunction(n, std::move(t));
}

FinFunction FinFunction::constant(std::size_t dom, std::size_t cod, std::size_t value) {
  return FinFunction(cod, std::vector<std::size_t>(dom, value));
}

bool FinFunction::is_injective() const {
  std::vector<bool> seen(cod_, false);
  for (auto v : table_) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

bool FinFunction::is_surjective() const {
  std::vector<bool> seen(cod_, false);
  for (auto v : table_) seen[v] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::string to_string(const FinFunction& f) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < f.dom(); ++i) os << (i ? "," : "") << f(i);
  os << "]:" << f.dom() << "->" << f.cod();
  return os.str();
}

FinFunction compose(const FinFunction& f, const FinFunction& g) {
  if (f.cod() != g.dom()) {
    fail(ErrorCode::domain_mismatch,
         "cannot compose " + to_string(f) + " with " + to_string(g));
  }
  std::vector<std::size_t> t(f.dom());
  for (std::size_t i = 0; i < f.dom(); ++i) t[i] = g(f(i));
  return FinFunction(g.cod(), std::move(t));
}

FinFunction coproduct(std::span<const FinFunction> fs) {
  std::size_t cod = 0;
  std::vector<std::size_t> t;
  for (const auto& f : fs) {
    for (auto v : f.table()) t.push_back(v + cod);
    cod += f.cod();
  }
  return FinFunction(cod, std::move(t));
}

FinFunction coproduct(const FinFunction& a, const FinFunction& b) {
  const FinFunction fs[] = {a, b};
  return coproduct(fs);
}

FinFunction coproduct_injection(std::span<const std::size_t> sizes, std::size_t k) {
  if (k >= sizes.size()) fail(ErrorCode::index_out_of_range, "no such coproduct block");
  std::size_t offset = std::accumulate(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(k),
                                       std::size_t{0});
  std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  std::vector<std::size_t> t(sizes[k]);
  std::iota(t.begin(), t.end(), offset);
  return FinFunction(total, std::move(t));
}

FinFunction copair(const FinFunction& f, const FinFunction& g) {
  if (f.cod() != g.cod()) {
    fail(ErrorCode::codomain_mismatch, "copairing needs a common codomain");
  }
  std::vector<std::size_t> t(f.table().begin(), f.table().end());
  t.insert(t.end(), g.table().begin(), g.table().end());
  return FinFunction(f.cod(), std::move(t));
}

std::optional<FinFunction> inverse(const FinFunction& f) {
  if (f.dom() != f.cod()) return std::nullopt;
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> inv(f.cod(), unset);
  for (std::size_t i = 0; i < f.dom(); ++i) {
    if (inv[f(i)] != unset) return std::nullopt;
    inv[f(i)] = i;
  }
  return FinFunction(f.dom(), std::move(inv));
}

bool jointly_surjective(const FinFunction& f, const FinFunction& g) {
  if (f.cod() != g.cod()) return false;
  std::vector<bool> hit(f.cod(), false);
  for (auto v : f.table()) hit[v] = true;
  for (auto v : g.table()) hit[v] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  std::size_t root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    std::size_t next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_size_[a] < rank_size_[b]) std::swap(a, b);
  parent_[b] = a;
  rank_size_[a] += rank_size_[b];
  return true;
}

PushoutResult pushout(const FinFunction& f, const FinFunction& g) {
  if (f.dom() != g.dom()) {
    fail(ErrorCode::domain_mismatch,
         "pushout legs " + to_string(f) + " and " + to_string(g) + " do not share a domain");
  }
  const std::size_t nb = f.cod();
  const std::size_t total = nb + g.cod();
  UnionFind uf(total);
  for (std::size_t a = 0; a < f.dom(); ++a) uf.unite(f(a), nb + g(a));

  // Scanning in ascending order meets each class first at its smallest member.
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label_of_root(total, unset);
  std::vector<std::size_t> label(total);
  std::size_t next = 0;
  for (std::size_t x = 0; x < total; ++x) {
    auto r = uf.find(x);
    if (label_of_root[r] == unset) label_of_root[r] = next++;
    label[x] = label_of_root[r];
  }
  std::vector<std::size_t> left(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(nb));
  std::vector<std::size_t> right(label.begin() + static_cast<std::ptrdiff_t>(nb), label.end());
  return {next, FinFunction(next, std::move(left)), FinFunction(next, std::move(right))};
}

PullbackResult pullback(const FinFunction& f, const FinFunction& g) {
  if (f.cod() != g.cod()) {
    fail(ErrorCode::codomain_mismatch,
         "pullback legs " + to_string(f) + " and " + to_string(g) + " do not share a codomain");
  }
  std::vector<std::size_t> pl, pr;
  for (std::size_t b = 0; b < f.dom(); ++b) {
    for (std::size_t c = 0; c < g.dom(); ++c) {
      if (f(b) == g(c)) {
        pl.push_back(b);
        pr.push_back(c);
      }
    }
  }
  const std::size_t apex = pl.size();
  return {apex, FinFunction(f.dom(), std::move(pl)), FinFunction(g.dom(), std::move(pr))};
}

TypedFinSet TypedFinSet::untyped(std::size_t n) {
  return {{"*"}, FinFunction::constant(n, 1, 0)};
}

bool preserves_typing(const FinFunction& f, const TypedFinSet& from, const TypedFinSet& to) {
  if (f.dom() != from.size() || f.cod() != to.size()) return false;
  for (std::size_t i = 0; i < f.dom(); ++i) {
    if (from.types[from.typing(i)] != to.types[to.typing(f(i))]) return false;
  }
  return true;
}

}  // namespace dots
