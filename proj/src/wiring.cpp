#include "dots/wiring.hpp"

#include <algorithm>
#include <functional>

namespace dots {

namespace {

bool legs_preserve(const FinFunction& leg, const FinFunction& from, const FinFunction& to) {
  for (std::size_t i = 0; i < leg.dom(); ++i) {
    if (from(i) != to(leg(i))) return false;
  }
  return true;
}

std::size_t type_index(const std::vector<std::string>& types, const std::string& name) {
  auto it = std::find(types.begin(), types.end(), name);
  if (it == types.end()) fail(ErrorCode::type_clash, "unknown port type '" + name + "'");
  return static_cast<std::size_t>(it - types.begin());
}

/// Re-expresses a typing table over a different (super)list of type names.
FinFunction retype(const FinFunction& typing, const std::vector<std::string>& from,
                   const std::vector<std::string>& to) {
  std::vector<std::size_t> t(typing.dom());
  for (std::size_t i = 0; i < typing.dom(); ++i) t[i] = type_index(to, from[typing(i)]);
  return FinFunction(to.size(), std::move(t));
}

CospanTyping typing_or_default(const Cospan& c) {
  if (c.typing()) return *c.typing();
  return {{"*"},
          FinFunction::constant(c.inner(), 1, 0),
          FinFunction::constant(c.outer(), 1, 0),
          FinFunction::constant(c.apex(), 1, 0)};
}

CospanTyping retype(const CospanTyping& t, const std::vector<std::string>& to) {
  return {to, retype(t.inner, t.types, to), retype(t.outer, t.types, to),
          retype(t.apex, t.types, to)};
}

/// Types the pushout apex from its two injections; mixed classes are a clash.
FinFunction quotient_typing(const PushoutResult& po, const FinFunction& left_types,
                            const FinFunction& right_types, std::size_t ntypes) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> t(po.apex, unset);
  auto assign = [&](std::size_t cls, std::size_t type) {
    if (t[cls] == unset) {
      t[cls] = type;
    } else if (t[cls] != type) {
      fail(ErrorCode::type_clash, "junction class " + std::to_string(cls) + " mixes port types");
    }
  };
  for (std::size_t x = 0; x < po.inj_left.dom(); ++x) assign(po.inj_left(x), left_types(x));
  for (std::size_t x = 0; x < po.inj_right.dom(); ++x) assign(po.inj_right(x), right_types(x));
  return FinFunction(ntypes, std::move(t));
}

}  // namespace

Cospan::Cospan(FinFunction left, FinFunction right, std::optional<CospanTyping> typing)
    : left_(std::move(left)), right_(std::move(right)), typing_(std::move(typing)) {
  if (left_.cod() != right_.cod()) {
    fail(ErrorCode::boundary_mismatch, "cospan legs land in different apexes");
  }
  if (typing_) {
    const auto& ty = *typing_;
    const auto nt = ty.types.size();
    if (ty.inner.dom() != inner() || ty.outer.dom() != outer() || ty.apex.dom() != apex() ||
        ty.inner.cod() != nt || ty.outer.cod() != nt || ty.apex.cod() != nt) {
      fail(ErrorCode::arity_mismatch, "cospan typing does not match its objects");
    }
    if (!legs_preserve(left_, ty.inner, ty.apex) || !legs_preserve(right_, ty.outer, ty.apex)) {
      fail(ErrorCode::type_clash, "cospan leg joins ports of different types");
    }
  }
}

Cospan Cospan::identity(std::size_t n) {
  return Cospan(FinFunction::identity(n), FinFunction::identity(n));
}

Cospan Cospan::identity(const TypedFinSet& boundary) {
  return Cospan(FinFunction::identity(boundary.size()), FinFunction::identity(boundary.size()),
                CospanTyping{boundary.types, boundary.typing, boundary.typing, boundary.typing});
}

TypedFinSet Cospan::inner_set() const {
  auto t = typing_or_default(*this);
  return {t.types, t.inner};
}

TypedFinSet Cospan::outer_set() const {
  auto t = typing_or_default(*this);
  return {t.types, t.outer};
}

TypedFinSet Cospan::apex_set() const {
  auto t = typing_or_default(*this);
  return {t.types, t.apex};
}

std::vector<std::string> merge_types(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  auto out = a;
  for (const auto& name : b) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

Cospan compose_cospans(const Cospan& first, const Cospan& second) {
  if (first.outer() != second.inner()) {
    fail(ErrorCode::boundary_mismatch,
         "outer boundary of size " + std::to_string(first.outer()) +
             " cannot feed an inner boundary of size " + std::to_string(second.inner()));
  }
  auto po = pushout(first.right(), second.left());
  auto left = compose(first.left(), po.inj_left);
  auto right = compose(second.right(), po.inj_right);
  if (!first.typing() && !second.typing()) return Cospan(std::move(left), std::move(right));

  auto types = merge_types(typing_or_default(first).types, typing_or_default(second).types);
  auto t1 = retype(typing_or_default(first), types);
  auto t2 = retype(typing_or_default(second), types);
  if (t1.outer != t2.inner) {
    fail(ErrorCode::type_clash, "boundary typings disagree between the composed diagrams");
  }
  auto apex = quotient_typing(po, t1.apex, t2.apex, types.size());
  return Cospan(std::move(left), std::move(right),
                CospanTyping{types, t1.inner, t2.outer, std::move(apex)});
}

Cospan parallel_cospans(std::span<const Cospan> cs) {
  std::vector<FinFunction> lefts, rights;
  bool typed = false;
  std::vector<std::string> types;
  for (const auto& c : cs) {
    lefts.push_back(c.left());
    rights.push_back(c.right());
    if (c.typing()) typed = true;
    types = merge_types(types, typing_or_default(c).types);
  }
  auto left = coproduct(lefts);
  auto right = coproduct(rights);
  if (!typed) return Cospan(std::move(left), std::move(right));

  std::vector<FinFunction> ti, to, ta;
  for (const auto& c : cs) {
    auto t = retype(typing_or_default(c), types);
    ti.push_back(t.inner);
    to.push_back(t.outer);
    ta.push_back(t.apex);
  }
  // Typings are maps into the shared type list, so their sum is copaired, not summed.
  auto flatten = [&](const std::vector<FinFunction>& parts) {
    std::vector<std::size_t> t;
    for (const auto& p : parts) t.insert(t.end(), p.table().begin(), p.table().end());
    return FinFunction(types.size(), std::move(t));
  };
  return Cospan(std::move(left), std::move(right),
                CospanTyping{types, flatten(ti), flatten(to), flatten(ta)});
}

Cospan parallel_cospans(const Cospan& a, const Cospan& b) {
  const Cospan cs[] = {a, b};
  return parallel_cospans(cs);
}

Verdict check_cospan_map(const CospanMap& sq, const Cospan& src, const Cospan& tgt) {
  if (sq.m.dom() != src.inner() || sq.m.cod() != tgt.inner() || sq.n.dom() != src.outer() ||
      sq.n.cod() != tgt.outer() || sq.j.dom() != src.apex() || sq.j.cod() != tgt.apex()) {
    fail(ErrorCode::arity_mismatch, "interaction map does not fit its source and target");
  }
  for (std::size_t x = 0; x < src.inner(); ++x) {
    if (sq.j(src.left()(x)) != tgt.left()(sq.m(x))) {
      return Verdict::failure("inner square fails at port " + std::to_string(x));
    }
  }
  for (std::size_t y = 0; y < src.outer(); ++y) {
    if (sq.j(src.right()(y)) != tgt.right()(sq.n(y))) {
      return Verdict::failure("outer square fails at port " + std::to_string(y));
    }
  }
  return Verdict::pass();
}

CospanMap paste(const CospanMap& upper, const CospanMap& lower) {
  return {compose(upper.m, lower.m), compose(upper.n, lower.n), compose(upper.j, lower.j)};
}

std::optional<FinFunction> cospan_iso(const Cospan& a, const Cospan& b) {
  if (a.inner() != b.inner() || a.outer() != b.outer() || a.apex() != b.apex()) return std::nullopt;
  const auto n = a.apex();
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> fwd(n, unset), bwd(n, unset);
  auto force = [&](std::size_t x, std::size_t y) {
    if (fwd[x] == unset && bwd[y] == unset) {
      fwd[x] = y;
      bwd[y] = x;
      return true;
    }
    return fwd[x] == y;
  };
  for (std::size_t p = 0; p < a.inner(); ++p) {
    if (!force(a.left()(p), b.left()(p))) return std::nullopt;
  }
  for (std::size_t p = 0; p < a.outer(); ++p) {
    if (!force(a.right()(p), b.right()(p))) return std::nullopt;
  }

  auto ta = a.apex_set();
  auto tb = b.apex_set();
  auto same_type = [&](std::size_t x, std::size_t y) {
    return ta.types[ta.typing(x)] == tb.types[tb.typing(y)];
  };
  for (std::size_t x = 0; x < n; ++x) {
    if (fwd[x] != unset && !same_type(x, fwd[x])) return std::nullopt;
  }

  // Junctions touched by no leg are unconstrained apart from their type.
  std::vector<std::size_t> free_src;
  for (std::size_t x = 0; x < n; ++x) {
    if (fwd[x] == unset) free_src.push_back(x);
  }
  std::function<bool(std::size_t)> search = [&](std::size_t k) {
    if (k == free_src.size()) return true;
    auto x = free_src[k];
    for (std::size_t y = 0; y < n; ++y) {
      if (bwd[y] != unset || !same_type(x, y)) continue;
      fwd[x] = y;
      bwd[y] = x;
      if (search(k + 1)) return true;
      fwd[x] = unset;
      bwd[y] = unset;
    }
    return false;
  };
  if (!search(0)) return std::nullopt;
  return FinFunction(n, std::move(fwd));
}

Span make_span(FinFunction left, FinFunction right) {
  if (left.dom() != right.dom()) fail(ErrorCode::domain_mismatch, "span legs need a common apex");
  return {std::move(left), std::move(right)};
}

Span identity_span(std::size_t n) {
  return {FinFunction::identity(n), FinFunction::identity(n)};
}

Span compose_spans(const Span& s1, const Span& s2) {
  if (s1.right.cod() != s2.left.cod()) {
    fail(ErrorCode::boundary_mismatch, "middle objects of the spans differ");
  }
  auto pb = pullback(s1.right, s2.left);
  return {compose(pb.proj_left, s1.left), compose(pb.proj_right, s2.right)};
}

}  // namespace dots
