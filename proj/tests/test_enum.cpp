#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <set>

#include "pa/enumerate.hpp"
#include "pa/parse.hpp"

using namespace pa;

namespace {

// Independent counting oracle: recursively count shapes by size, one op and
// leaf choice at a time, sharing nothing with the generator.
std::uint64_t oracle_count(System sys, std::uint64_t atoms, int size) {
  std::uint64_t ops = sys == System::PA1 ? 3 : 5;
  std::function<std::uint64_t(int)> exact = [&](int n) -> std::uint64_t {
    if (n < 1) return 0;
    if (n == 1) return atoms;
    std::uint64_t total = 0;
    for (int l = 1; l <= n - 2; ++l) total += ops * exact(l) * exact(n - 1 - l);
    return total;
  };
  std::uint64_t total = 0;
  for (int n = 1; n <= size; ++n) total += exact(n);
  return total;
}

}  // namespace

TEST_CASE("small exact enumerations") {
  EnumSpec one_atom{System::PA1, {"a"}, 3, Dedup::None};
  std::set<std::string> got;
  for (const auto& t : enum_terms(one_atom)) got.insert(format_term(t));
  CHECK(got == std::set<std::string>{"a", "a + a", "a . a", "a || a"});

  EnumSpec atoms_only{System::PA1, {"a", "b"}, 1, Dedup::None};
  std::set<std::string> atoms;
  for (const auto& t : enum_terms(atoms_only)) atoms.insert(format_term(t));
  CHECK(atoms == std::set<std::string>{"a", "b"});
}

TEST_CASE("counts match the independent oracle and the stream length") {
  for (System sys : {System::PA1, System::PA2})
    for (int atoms = 1; atoms <= 2; ++atoms)
      for (int size = 1; size <= 7; ++size) {
        EnumSpec spec{sys, atoms == 1 ? std::vector<std::string>{"a"}
                                      : std::vector<std::string>{"a", "b"},
                      size, Dedup::None};
        auto terms = enum_terms(spec);
        CHECK(count_terms(spec) == terms.size());
        CHECK(count_terms(spec) ==
              oracle_count(sys, static_cast<std::uint64_t>(atoms), size));
      }
}

TEST_CASE("reference counts") {
  CHECK(count_terms({System::PA1, {"a"}, 3, Dedup::None}) == 4);
  CHECK(count_terms({System::PA1, {"a", "b"}, 3, Dedup::None}) == 14);
  CHECK(count_terms({System::PA2, {"a"}, 3, Dedup::None}) == 6);
  CHECK(count_terms({System::PA1, {"a", "b"}, 6, Dedup::None}) == 158);
  CHECK(count_terms({System::PA2, {"a", "b"}, 5, Dedup::None}) == 422);
}

TEST_CASE("no duplicates; all terms in bounds and round-trip") {
  EnumSpec spec{System::PA2, {"a", "b"}, 5, Dedup::None};
  std::set<std::string> seen;
  for (const auto& t : enum_terms(spec)) {
    CHECK(term_size(t) <= 5);
    std::string s = format_term(t);
    CHECK(seen.insert(s).second);
    CHECK(structurally_equal(parse_term(s, System::PA2), t));
  }
}

TEST_CASE("modulo-AC dedup keeps one representative per AC class") {
  EnumSpec spec{System::PA1, {"a", "b"}, 3, Dedup::ModuloAC};
  auto terms = enum_terms(spec);
  // 14 raw terms; a+b ~ b+a, a||b ~ b||a collapse, nothing else does
  CHECK(terms.size() == 12);
  std::set<std::string> keys;
  for (const auto& t : terms)
    CHECK(keys.insert(format_term(ac_canonical(t))).second);
}

TEST_CASE("sampler stays in bounds") {
  EnumSpec spec{System::PA2, {"a", "b"}, 6, Dedup::None};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    TermPtr t = sample_term(spec, seed);
    CHECK(term_size(t) <= 6);
    CHECK_NOTHROW(parse_term(format_term(t), System::PA2));
  }
}
