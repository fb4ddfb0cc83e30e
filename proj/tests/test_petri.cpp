#include "doctest.h"
#include "support.hpp"

using namespace dots;
using namespace dots::test;

namespace {

Multiset random_multiset(std::size_t species) {
  std::vector<Multiset::Entry> es;
  for (std::size_t k = uniform(0, 3); k > 0; --k) es.emplace_back(uniform(0, species - 1), uniform(1, 2));
  return Multiset(es);
}

PetriNet random_net(std::size_t max_species = 3, std::size_t max_transitions = 3) {
  PetriNet n;
  std::size_t s = uniform(1, max_species), t = uniform(0, max_transitions);
  for (std::size_t k = 0; k < s; ++k) n.species.push_back("s" + std::to_string(k));
  for (std::size_t k = 0; k < t; ++k) {
    n.transitions.push_back("t" + std::to_string(k));
    n.src.push_back(random_multiset(s));
    n.tgt.push_back(random_multiset(s));
  }
  return n;
}

OpenPetriNet random_open(std::size_t max_ports = 3) {
  OpenPetriNet o;
  o.net = random_net();
  o.ports = random_function(uniform(0, max_ports), o.net.num_species());
  return o;
}

/// Collapses species along a random surjection; transitions are kept.
std::pair<OpenPetriNet, OpenPetriMap> random_quotient(const OpenPetriNet& a) {
  std::size_t n = uniform(1, a.net.num_species());
  std::vector<std::size_t> t(a.net.num_species());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = k < n ? k : uniform(0, n - 1);
  FinFunction f(n, t);
  OpenPetriNet b;
  for (std::size_t k = 0; k < n; ++k) b.net.species.push_back("q" + std::to_string(k));
  b.net.transitions = a.net.transitions;
  for (std::size_t k = 0; k < a.net.num_transitions(); ++k) {
    b.net.src.push_back(multiset_push(f, a.net.src[k]));
    b.net.tgt.push_back(multiset_push(f, a.net.tgt[k]));
  }
  b.ports = compose(a.ports, f);
  OpenPetriMap m{FinFunction::identity(a.interface()),
                 PetriMap{f, FinFunction::identity(a.net.num_transitions())}};
  return {b, m};
}

std::size_t total_interface(const std::vector<OpenPetriNet>& systems) {
  std::size_t n = 0;
  for (const auto& s : systems) n += s.interface();
  return n;
}

}  // namespace

TEST_CASE("multisets are canonical") {
  Multiset m({{2, 1}, {0, 1}, {2, 2}, {1, 0}});
  REQUIRE(m.entries().size() == 2);
  CHECK(m.entries()[0] == Multiset::Entry{0, 1});
  CHECK(m.entries()[1] == Multiset::Entry{2, 3});
  CHECK(m.total() == 4);
  CHECK(m.count(1) == 0);
}

TEST_CASE("multiset_push") {
  Multiset m({{0, 1}, {2, 1}});
  CHECK(multiset_push(FinFunction::identity(3), m) == m);
  CHECK(multiset_push(FinFunction(2, {0, 1, 0}), m) == Multiset({{0, 2}}));  // S, I, R -> S, I with R -> S
  CHECK(multiset_push(FinFunction(2, {0, 1, 0}), Multiset()).empty());
  CHECK(throws_code([&] { multiset_push(FinFunction(2, {0, 1}), m); }, ErrorCode::index_out_of_range));
  for (int trial = 0; trial < 200; ++trial) {
    auto ms = random_multiset(4);
    CHECK(multiset_push(random_function(4, uniform(1, 4)), ms).total() == ms.total());
  }
}

TEST_CASE("check_petri_map") {
  auto sir = sir_net().net, sis = sis_net().net;
  CHECK(check_petri_map(PetriMap::identity(sir), sir, sir).ok);
  PetriMap quotient{FinFunction(2, {0, 1, 0}), FinFunction(2, {0, 1})};
  CHECK(check_petri_map(quotient, sir, sis).ok);
  PetriMap wrong{FinFunction(2, {0, 1, 0}), FinFunction(2, {0, 0})};
  CHECK_FALSE(check_petri_map(wrong, sir, sis).ok);
  CHECK(throws_code([&] { check_petri_map(PetriMap{FinFunction(2, {0, 1}), FinFunction(2, {0, 1})}, sir, sis); },
                    ErrorCode::arity_mismatch));
}

TEST_CASE("petri_pushout") {
  SUBCASE("along identity legs") {
    for (int trial = 0; trial < 50; ++trial) {
      auto p = random_net();
      auto po = petri_pushout(PetriMap::identity(p), PetriMap::identity(p), p, p, p);
      CHECK(petri_iso(po.net, p).has_value());
    }
  }
  SUBCASE("infection and recovery glued along I") {
    auto inf = infection_net().net, rec = recovery_net().net;
    auto shared = PetriNet::discrete({"I"});
    PetriMap l{FinFunction(2, {1}), FinFunction::initial(1)}, r{FinFunction(2, {0}), FinFunction::initial(1)};
    auto po = petri_pushout(l, r, inf, shared, rec);
    CHECK(po.net.num_species() == 3);
    CHECK(po.net.num_transitions() == 2);
    CHECK(po.net.species == std::vector<std::string>{"S", "I", "R"});
    CHECK(petri_iso(po.net, sir_net().net).has_value());
    CHECK(check_petri_map(po.inj_left, inf, po.net).ok);
    CHECK(check_petri_map(po.inj_right, rec, po.net).ok);
  }
  SUBCASE("discrete nets reduce to the finite-set pushout") {
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t na = uniform(0, 4), np = uniform(1, 4), nq = uniform(1, 4);
      auto f = random_function(na, np), g = random_function(na, nq);
      auto name = [](std::size_t n, const char* p) {
        std::vector<std::string> v;
        for (std::size_t k = 0; k < n; ++k) v.push_back(p + std::to_string(k));
        return v;
      };
      auto po = petri_pushout(PetriMap{f, FinFunction::initial(0)}, PetriMap{g, FinFunction::initial(0)},
                              PetriNet::discrete(name(np, "p")), PetriNet::discrete(name(na, "a")),
                              PetriNet::discrete(name(nq, "q")));
      auto oracle = pushout_oracle(f, g);
      CHECK(po.net.num_species() == oracle.classes);
      CHECK(po.inj_left.species == pushout(f, g).inj_left);
      CHECK(po.inj_right.species == pushout(f, g).inj_right);
    }
  }
  SUBCASE("legs must be maps of nets") {
    auto inf = infection_net().net;
    PetriNet loop{{"x"}, {"t"}, {Multiset({{0, 1}})}, {Multiset({{0, 1}})}};
    PetriMap bad{FinFunction(2, {0}), FinFunction(1, {0})};
    PetriMap fine = PetriMap::identity(loop);
    CHECK_FALSE(check_petri_map(bad, loop, inf).ok);
    CHECK(throws_code([&] { petri_pushout(bad, fine, inf, loop, loop); }, ErrorCode::invalid_leg));
  }
  SUBCASE("injections are valid maps on random spans of nets") {
    for (int trial = 0; trial < 100; ++trial) {
      auto p = random_net(), q = random_net();
      auto a = PetriNet::discrete({"x", "y"});
      PetriMap l{random_function(2, p.num_species()), FinFunction::initial(p.num_transitions())};
      PetriMap r{random_function(2, q.num_species()), FinFunction::initial(q.num_transitions())};
      auto po = petri_pushout(l, r, p, a, q);
      CHECK(check_petri_map(po.inj_left, p, po.net).ok);
      CHECK(check_petri_map(po.inj_right, q, po.net).ok);
    }
  }
}

TEST_CASE("open_parallel") {
  auto both = open_parallel(infection_net(), recovery_net());
  CHECK(both.interface() == 4);
  CHECK(both.net.num_species() == 4);
  CHECK(both.net.num_transitions() == 2);
  CHECK(both.ports == FinFunction(4, {0, 1, 2, 3}));
  OpenPetriNet empty{PetriNet{}, FinFunction(0, {}), {}};
  auto a = random_open();
  auto ae = open_parallel(a, empty);
  CHECK(ae.ports == a.ports);
  CHECK(ae.net.src == a.net.src);
  auto b = random_open(), c = random_open();
  auto l = open_parallel(open_parallel(a, b), c), r = open_parallel(a, open_parallel(b, c));
  CHECK(l.ports == r.ports);
  CHECK(l.net.src == r.net.src);
  CHECK(l.net.tgt == r.net.tgt);
}

TEST_CASE("uwd_apply") {
  SUBCASE("identity diagram on one system") {
    for (int trial = 0; trial < 30; ++trial) {
      auto a = random_open();
      const OpenPetriNet one[] = {a};
      auto out = uwd_apply(Cospan::identity(a.interface()), one);
      // Species not exposed by any port survive; exposed ones are glued to their junctions.
      CHECK(out.interface() == a.interface());
      CHECK(out.net.num_transitions() == a.net.num_transitions());
      CHECK(petri_iso(out.net, a.net).has_value() == (out.net.num_species() == a.net.num_species()));
    }
  }
  SUBCASE("SIR from infection and recovery") {
    const OpenPetriNet parts[] = {infection_net(), recovery_net()};
    auto sir = uwd_apply(sir_uwd(), parts);
    CHECK(sir.interface() == 3);
    CHECK(sir.net.num_species() == 3);
    CHECK(sir.net.num_transitions() == 2);
    CHECK(open_petri_iso(sir, sir_net()).has_value());
    CHECK(has_monic_outer_leg(sir_uwd()));
  }
  SUBCASE("species count matches the closure oracle") {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<OpenPetriNet> systems(uniform(1, 3));
      for (auto& s : systems) s = random_open();
      std::size_t m = total_interface(systems);
      auto uwd = random_cospan(m, uniform(0, 3), 4);
      auto out = uwd_apply(uwd, systems);
      std::size_t species = 0;
      std::vector<std::size_t> offset;
      for (const auto& s : systems) {
        offset.push_back(species);
        species += s.net.num_species();
      }
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      std::size_t port = 0;
      for (std::size_t k = 0; k < systems.size(); ++k)
        for (std::size_t p = 0; p < systems[k].interface(); ++p, ++port)
          pairs.emplace_back(offset[k] + systems[k].ports(p), species + uwd.left()(port));
      auto q = closure_quotient(species + uwd.apex(), pairs);
      CHECK(out.net.num_species() == q.classes);
      std::size_t transitions = 0;
      for (const auto& s : systems) transitions += s.net.num_transitions();
      CHECK(out.net.num_transitions() == transitions);
      CHECK(out.interface() == uwd.outer());
    }
  }
  SUBCASE("errors") {
    const OpenPetriNet parts[] = {infection_net()};
    CHECK(throws_code([&] { uwd_apply(sir_uwd(), parts); }, ErrorCode::boundary_mismatch));
    auto typed_inf = infection_net();
    typed_inf.port_types = {"pop", "virus"};
    const OpenPetriNet typed[] = {typed_inf, recovery_net()};
    auto sir = sir_uwd();
    CospanTyping ty{{"pop"}, FinFunction::constant(4, 1, 0), FinFunction::constant(3, 1, 0),
                    FinFunction::constant(3, 1, 0)};
    auto recovery_typed = recovery_net();
    recovery_typed.port_types = {"pop", "pop"};
    const OpenPetriNet typed2[] = {typed_inf, recovery_typed};
    CHECK(throws_code([&] { uwd_apply(Cospan(sir.left(), sir.right(), ty), typed2); }, ErrorCode::type_clash));
    (void)typed;
  }
}

TEST_CASE("nesting diagrams acts like composing them") {
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<OpenPetriNet> systems(uniform(1, 3));
    for (auto& s : systems) s = random_open();
    std::size_t n = uniform(0, 3);
    auto c1 = random_cospan(total_interface(systems), n, 3);
    auto c2 = random_cospan(n, uniform(0, 3), 3);
    const OpenPetriNet inner[] = {uwd_apply(c1, systems)};
    auto stepwise = uwd_apply(c2, inner);
    auto at_once = uwd_apply(compose_cospans(c1, c2), systems);
    CHECK(open_petri_iso(stepwise, at_once).has_value());
  }
}

TEST_CASE("check_open_map") {
  auto sir = sir_net(), sis = sis_net();
  CHECK(check_open_map(OpenPetriMap{FinFunction::identity(3), PetriMap::identity(sir.net)}, sir, sir).ok);
  CHECK(check_open_map(sir_to_sis(), sir, sis).ok);
  auto perturbed = sir_to_sis();
  perturbed.interface_map = FinFunction(2, {0, 1, 1});
  CHECK_FALSE(check_open_map(perturbed, sir, sis).ok);
  auto bad_arity = sir_to_sis();
  bad_arity.interface_map = FinFunction(2, {0, 1});
  CHECK(throws_code([&] { check_open_map(bad_arity, sir, sis); }, ErrorCode::arity_mismatch));
}

TEST_CASE("interaction maps act on maps of systems") {
  SUBCASE("SIR to SIS induced from the diagrams") {
    // Target diagram: the recovery box's second port is glued back onto S.
    Cospan sis_uwd(FinFunction(2, {0, 1, 1, 0}), FinFunction(2, {0, 1}));
    CospanMap sq{FinFunction::identity(4), FinFunction(2, {0, 1, 0}), FinFunction(2, {0, 1, 0})};
    REQUIRE(check_cospan_map(sq, sir_uwd(), sis_uwd).ok);
    const OpenPetriNet parts[] = {infection_net(), recovery_net()};
    const OpenPetriMap ids[] = {{FinFunction::identity(2), PetriMap::identity(parts[0].net)},
                                {FinFunction::identity(2), PetriMap::identity(parts[1].net)}};
    auto map = uwd_apply_map(sq, sir_uwd(), sis_uwd, ids, parts, parts);
    auto src = uwd_apply(sir_uwd(), parts), tgt = uwd_apply(sis_uwd, parts);
    CHECK(check_open_map(map, src, tgt).ok);
    CHECK(open_petri_iso(tgt, sis_net()).has_value());
  }
  SUBCASE("random diagrams, squares and quotient maps") {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<OpenPetriNet> src(uniform(1, 3)), tgt;
      std::vector<OpenPetriMap> maps;
      for (auto& s : src) {
        s = random_open();
        auto [q, m] = random_quotient(s);
        tgt.push_back(q);
        maps.push_back(m);
      }
      std::size_t m = total_interface(src);
      auto c = random_cospan(m, uniform(0, 3), 3);
      // Target diagram: same inner boundary, junctions merged, outer ports added.
      std::size_t j2 = std::max<std::size_t>(1, uniform(1, c.apex() + 1));
      auto j = random_function(c.apex(), j2);
      std::vector<std::size_t> right;
      for (std::size_t y = 0; y < c.outer(); ++y) right.push_back(j(c.right()(y)));
      for (std::size_t k = uniform(0, 2); k > 0; --k) right.push_back(uniform(0, j2 - 1));
      std::vector<std::size_t> n(c.outer());
      for (std::size_t y = 0; y < n.size(); ++y) n[y] = y;
      Cospan c2(compose(c.left(), j), FinFunction(j2, right));
      CospanMap sq{FinFunction::identity(m), FinFunction(right.size(), n), j};
      REQUIRE(check_cospan_map(sq, c, c2).ok);
      auto map = uwd_apply_map(sq, c, c2, maps, src, tgt);
      CHECK(check_open_map(map, uwd_apply(c, src), uwd_apply(c2, tgt)).ok);
    }
  }
}

TEST_CASE("petri_iso") {
  auto sir = sir_net().net;
  auto self = petri_iso(sir, sir);
  REQUIRE(self);
  CHECK(check_petri_map(*self, sir, sir).ok);

  for (int trial = 0; trial < 50; ++trial) {
    auto p = random_net(4, 4);
    auto sigma = random_permutation(p.num_species()), tau = random_permutation(p.num_transitions());
    PetriNet q = p;
    for (std::size_t t = 0; t < p.num_transitions(); ++t) {
      q.src[tau(t)] = multiset_push(sigma, p.src[t]);
      q.tgt[tau(t)] = multiset_push(sigma, p.tgt[t]);
    }
    auto iso = petri_iso(p, q);
    REQUIRE(iso);
    CHECK(check_petri_map(*iso, p, q).ok);
    CHECK(is_iso(iso->species));
    CHECK(is_iso(iso->transitions));
  }
  CHECK_FALSE(petri_iso(sir, sis_net().net).has_value());
  PetriNet two{{"a"}, {"t"}, {Multiset({{0, 1}})}, {Multiset({{0, 2}})}};
  PetriNet one{{"a"}, {"t"}, {Multiset({{0, 1}})}, {Multiset({{0, 1}})}};
  CHECK_FALSE(petri_iso(two, one).has_value());
}
