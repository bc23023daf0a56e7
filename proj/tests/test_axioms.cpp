#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "pa/axioms.hpp"
#include "pa/config.hpp"
#include "pa/enumerate.hpp"
#include "pa/equivalence.hpp"
#include "pa/parse.hpp"

using namespace pa;

namespace {

SemanticsConfig cfg0() {
  return load_config(
      "alphabet=a,b,c,d; gamma a b = c; order=a<b<c<d; policy=optional");
}

SemanticsConfig cfge() {
  return load_config("alphabet=a,b,d; order=a<b<d; policy=optional");
}

std::string nf_of(const char* s, System sys, const SemanticsConfig& c) {
  return nf_display(normalize(parse_term(s, sys, &c), sys, c).nf);
}

}  // namespace

TEST_CASE("schema lists carry the expected names and side conditions") {
  std::set<std::string> pa1;
  for (const auto& a : axiom_schemas(System::PA1)) pa1.insert(a.name);
  CHECK(pa1 == std::set<std::string>{"A1", "A2", "A3", "A4", "A5", "P1", "P2",
                                     "P3", "P4", "P5", "P6", "P7"});
  std::set<std::string> pa2;
  int order_side = 0, gamma_side = 0;
  for (const auto& a : axiom_schemas(System::PA2)) {
    pa2.insert(a.name);
    if (a.side == SideCondition::OrderLE) ++order_side;
    if (a.side == SideCondition::GammaDefined) ++gamma_side;
  }
  CHECK(pa2 == std::set<std::string>{"A1", "A2", "A3", "A4", "A5", "P1", "L2",
                                     "L3", "L4", "L5", "C6", "C7", "C8", "C9",
                                     "C10", "C11"});
  CHECK(order_side == 3);  // L2, L3, L4
  CHECK(gamma_side == 4);  // C6..C9
}

TEST_CASE("instantiation") {
  auto c = cfg0();
  auto schemas = axiom_schemas(System::PA2);
  auto by_name = [&](const std::string& n) -> const AxiomSchema& {
    for (const auto& a : schemas)
      if (a.name == n) return a;
    throw std::runtime_error("missing schema");
  };

  SUBCASE("A3 with x := a.b") {
    auto inst = instantiate(by_name("A3"),
                            {{"x", parse_term("a.b", System::PA1)}}, {}, c);
    REQUIRE(inst.has_value());
    CHECK(format_term(inst->first) == "a . b + a . b");
    CHECK(format_term(inst->second) == "a . b");
  }

  SUBCASE("L2 skips when the order premise fails") {
    auto inst = instantiate(by_name("L2"),
                            {{"y", parse_term("a", System::PA1)}},
                            {{"e1", "b"}, {"e2", "a"}}, c);
    CHECK(!inst.has_value());
  }

  SUBCASE("C6 resolves gamma on the right-hand side") {
    auto inst =
        instantiate(by_name("C6"), {}, {{"e1", "a"}, {"e2", "b"}}, c);
    REQUIRE(inst.has_value());
    CHECK(format_term(inst->first) == "a | b");
    CHECK(format_term(inst->second) == "c");
  }

  SUBCASE("C6 skips when gamma is undefined") {
    CHECK(!instantiate(by_name("C6"), {}, {{"e1", "a"}, {"e2", "d"}}, c)
               .has_value());
  }

  SUBCASE("PA2 terms cannot enter PA1 schemas") {
    auto pa1_schemas = axiom_schemas(System::PA1);
    CHECK_THROWS_AS(
        instantiate(pa1_schemas[2],
                    {{"x", parse_term("a |_ b", System::PA2)}}, {}, c),
        std::invalid_argument);
  }
}

TEST_CASE("normalization reference outputs") {
  auto c0 = cfg0();
  auto ce = cfge();
  CHECK(nf_of("a+a", System::PA1, ce) == "{a}");
  CHECK(nf_of("(a+b).d", System::PA1, ce) == nf_of("a.d + b.d", System::PA1, ce));
  CHECK(nf_of("(a.b) || d", System::PA1, ce) == "{a,d}.{b}");
  CHECK(nf_of("b |_ a", System::PA2, c0) == "0");
  CHECK(nf_of("a || b", System::PA2, c0) == "{a,b} + {c}");
  CHECK(nf_of("a | b", System::PA2, c0) == "{c}");
  CHECK(nf_of("a | d", System::PA2, c0) == "0");
  // AC of + is baked into the folded form
  CHECK(nf_of("b + a", System::PA1, ce) == nf_of("a + b", System::PA1, ce));
  CHECK(nf_of("a || (b || d)", System::PA1, ce) ==
        nf_of("(d || a) || b", System::PA1, ce));
}

TEST_CASE("policy changes the folded parallel label") {
  auto c = cfg0();
  CHECK(nf_of("a || b", System::PA1, c) == "{a,b}");
  c.policy = Policy::Forced;
  CHECK(nf_of("a || b", System::PA1, c) == "{c}");
  CHECK(nf_of("a || d", System::PA1, c) == "{a,d}");
}

TEST_CASE("normal form equality decides provability for step classes") {
  auto ce = cfge();
  // same step class, same NF
  CHECK(nf_of("a.(b+b)", System::PA1, ce) == nf_of("(a+a).b", System::PA1, ce));
  // different classes, different NFs
  CHECK(nf_of("a||d", System::PA1, ce) != nf_of("a.d + d.a", System::PA1, ce));
}

TEST_CASE("rule traces replay to the same normal form") {
  auto c = cfg0();
  std::mt19937_64 rng(23);
  for (System sys : {System::PA1, System::PA2}) {
    EnumSpec spec{sys, {"a", "b"}, 7, Dedup::None};
    for (int it = 0; it < 200; ++it) {
      TermPtr t = sample_term(spec, rng());
      RewriteReport rep = normalize(t, sys, c);
      NormalForm replayed = replay_trace(t, rep.rule_trace, sys, c);
      CHECK(nf_code(replayed) == nf_code(rep.nf));
    }
  }
}

TEST_CASE("randomized application order converges (confluence)") {
  for (const SemanticsConfig& base : {cfge(), cfg0()}) {
    for (Policy p : {Policy::Optional, Policy::Forced}) {
      SemanticsConfig c = base;
      c.policy = p;
      std::mt19937_64 rng(17);
      for (System sys : {System::PA1, System::PA2}) {
        EnumSpec spec{sys, {"a", "b"}, 7, Dedup::None};
        for (int it = 0; it < 100; ++it) {
          TermPtr t = sample_term(spec, rng());
          std::string ref = nf_code(normalize(t, sys, c).nf);
          for (std::uint64_t seed : {1ull, 2ull, 3ull})
            CHECK(nf_code(normalize_random(t, sys, c, seed).nf) == ref);
        }
      }
    }
  }
}

TEST_CASE("rewrite budget is enforced") {
  auto c = cfg0();
  TermPtr t = parse_term("(a+b)||(a+b)||(a+b)", System::PA1, &c);
  CHECK_THROWS_AS(normalize(t, System::PA1, c, 2), BudgetError);
}

TEST_CASE("gamma saturation closes step labels") {
  auto c = cfg0();
  NormalForm s1 = saturated_nf(parse_term("a||b", System::PA1, &c),
                               System::PA1, c);
  NormalForm s2 = saturated_nf(parse_term("c + a||b", System::PA1, &c),
                               System::PA1, c);
  CHECK(nf_code(s1) == nf_code(s2));
  // saturation does not identify genuinely different processes
  NormalForm s3 = saturated_nf(parse_term("a||d", System::PA1, &c),
                               System::PA1, c);
  CHECK(nf_code(s1) != nf_code(s3));
}

TEST_CASE("folded normal forms respect the step semantics (PA1)") {
  // the NF is a term-shaped presentation of the step tree: its fingerprint
  // data must match the original term whenever no communication is possible
  auto ce = cfge();
  EnumSpec spec{System::PA1, {"a", "b"}, 6, Dedup::None};
  for (const auto& t : enum_terms(spec)) {
    auto fp1 = step_fingerprint(t, System::PA1, ce);
    // rebuild a term from the NF and fingerprint it
    std::function<TermPtr(const NormalForm&)> back =
        [&](const NormalForm& nf) -> TermPtr {
      TermPtr sum;
      for (const auto& s : nf.summands) {
        TermPtr head;
        for (const auto& lab : s.step)
          head = head ? par(head, atom(lab)) : atom(lab);
        TermPtr summand = s.tail ? seq(head, back(*s.tail)) : head;
        sum = sum ? plus(sum, summand) : summand;
      }
      return sum;  // nullptr only for NIL, unreachable in PA1
    };
    TermPtr rebuilt = back(normalize(t, System::PA1, ce).nf);
    REQUIRE(rebuilt != nullptr);
    CHECK(step_fingerprint(rebuilt, System::PA1, ce) == fp1);
  }
}
