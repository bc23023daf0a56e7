#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pa/config.hpp"
#include "pa/harness.hpp"

using namespace pa;

namespace {

SemanticsConfig cfg0() {
  return load_config(
      "alphabet=a,b,c,d; gamma a b = c; order=a<b<c<d; policy=optional");
}

SemanticsConfig cfge() {
  return load_config("alphabet=a,b,d; order=a<b<d; policy=optional");
}

}  // namespace

TEST_CASE("step soundness sweeps pass at small bounds") {
  HarnessOptions opts;
  opts.size_bound = 2;
  for (const SemanticsConfig& base : {cfge(), cfg0()}) {
    for (Policy p : {Policy::Optional, Policy::Forced}) {
      SemanticsConfig c = base;
      c.policy = p;
      auto rep = check_soundness(System::PA1, EquivalenceKind::Step, c, opts);
      CHECK(rep.instances > 0);
      CHECK(rep.failures.empty());
    }
  }
}

TEST_CASE("A-axiom instances are sound at every level") {
  HarnessOptions opts;
  opts.size_bound = 3;
  SemanticsConfig c = cfg0();
  for (EquivalenceKind k : {EquivalenceKind::Step, EquivalenceKind::Pomset,
                            EquivalenceKind::Hp, EquivalenceKind::Hhp}) {
    auto rep = check_soundness(System::PA1, k, c, opts);
    for (const auto& f : rep.failures) CHECK(f.schema[0] != 'A');
  }
}

TEST_CASE("pomset-level failures carry full witnesses") {
  HarnessOptions opts;
  opts.size_bound = 2;
  auto rep =
      check_soundness(System::PA1, EquivalenceKind::Pomset, cfge(), opts);
  // folding a sequential tail out of a parallel composition changes the
  // causal order, so some P-instances are reported here; each report must
  // name the schema, the substitution and a usable explanation
  CHECK(!rep.failures.empty());
  for (const auto& f : rep.failures) {
    CHECK((f.schema == "P3" || f.schema == "P4" || f.schema == "P5"));
    CHECK((!f.substitution.empty() || !f.events.empty()));
    CHECK(!f.lhs.empty());
    CHECK(!f.rhs.empty());
    CHECK(!f.witness.empty());
  }
}

TEST_CASE("skip accounting: order and gamma side conditions") {
  HarnessOptions opts;
  opts.size_bound = 1;
  auto rep =
      check_soundness(System::PA2, EquivalenceKind::Step, cfg0(), opts);
  CHECK(rep.skipped > 0);  // L2-L4 with e1 > e2, C6-C9 with gamma undefined
}

TEST_CASE("completeness: clean pass without communication") {
  HarnessOptions opts;
  opts.size_bound = 5;
  auto rep =
      check_completeness(System::PA1, EquivalenceKind::Step, cfge(), opts);
  CHECK(rep.terms > 0);
  CHECK(rep.violations.empty());
  CHECK(rep.classes > 0);
}

TEST_CASE("completeness: the communication caveat pair is flagged, not hidden") {
  HarnessOptions opts;
  opts.size_bound = 5;
  opts.term_alphabet = {"a", "b", "c"};
  auto rep =
      check_completeness(System::PA1, EquivalenceKind::Step, cfg0(), opts);
  CHECK(rep.hard_violations() == 0);
  REQUIRE(rep.violations.size() == 1);
  const auto& v = rep.violations.front();
  CHECK(v.gamma_caveat);
  CHECK(!v.cross_class);
  CHECK(((v.term1 == "a || b" && v.term2 == "c + a || b") ||
         (v.term2 == "a || b" && v.term1 == "c + a || b")));
}

TEST_CASE("parallel jobs produce the serial report") {
  HarnessOptions serial, par;
  serial.size_bound = par.size_bound = 2;
  serial.jobs = 1;
  par.jobs = 4;
  auto c = cfg0();
  auto r1 = check_soundness(System::PA2, EquivalenceKind::Pomset, c, serial);
  auto r2 = check_soundness(System::PA2, EquivalenceKind::Pomset, c, par);
  CHECK(r1.instances == r2.instances);
  CHECK(r1.skipped == r2.skipped);
  REQUIRE(r1.failures.size() == r2.failures.size());
  for (size_t i = 0; i < r1.failures.size(); ++i) {
    CHECK(r1.failures[i].schema == r2.failures[i].schema);
    CHECK(r1.failures[i].lhs == r2.failures[i].lhs);
    CHECK(r1.failures[i].rhs == r2.failures[i].rhs);
  }

  auto c1 = check_completeness(System::PA2, EquivalenceKind::Step, c, serial);
  auto c2 = check_completeness(System::PA2, EquivalenceKind::Step, c, par);
  CHECK(c1.classes == c2.classes);
  CHECK(c1.violations.size() == c2.violations.size());
}

TEST_CASE("hhp witness search finds the discarded-branch instance") {
  HarnessOptions opts;
  opts.size_bound = 2;
  auto rep = find_hhp_witness(cfge(), opts);
  CHECK(rep.instances_searched > 0);
  REQUIRE(rep.witness.has_value());
  CHECK((rep.witness->schema == "P6" || rep.witness->schema == "P7"));
  CHECK(!rep.witness->lhs.empty());
  CHECK(!rep.witness->note.empty());
}
