// Acceptance harness: nine end-to-end criteria, one verdict line each.
// Exit status is the number of failed criteria. A FAIL line is a genuine
// property violation discovered by the sweep, not a harness error; the
// indented lines underneath give concrete witnesses.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pa/axioms.hpp"
#include "pa/config.hpp"
#include "pa/enumerate.hpp"
#include "pa/equivalence.hpp"
#include "pa/harness.hpp"
#include "pa/parse.hpp"
#include "pa/semantics.hpp"
#include "pa/term.hpp"

using namespace pa;

namespace {

int failed = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s — %s\n", n, ok ? "PASS" : "FAIL",
              detail.c_str());
  if (!ok) ++failed;
}

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

SemanticsConfig cfg0(Policy p = Policy::Optional) {
  auto c = load_config(
      "alphabet=a,b,c,d; gamma a b = c; order=a<b<c<d; policy=optional");
  c.policy = p;
  return c;
}

SemanticsConfig cfge() {
  return load_config("alphabet=a,b; order=a<b; policy=optional");
}

std::string kname(EquivalenceKind k) { return kind_name(k); }

std::string failure_line(const SoundnessFailure& f) {
  std::string s = f.schema + " [" + f.substitution;
  if (!f.events.empty()) s += (f.substitution.empty() ? "" : ", ") + f.events;
  s += "]: " + f.lhs + "  vs  " + f.rhs + "  (" + kname(f.kind) + ")";
  if (!f.witness.empty()) s += "  witness: " + f.witness;
  return s;
}

struct SweepTally {
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::vector<std::string> samples;          // first few failure lines
  std::map<std::string, std::size_t> by_schema;
};

void run_sweep(System sys, EquivalenceKind k, const SemanticsConfig& cfg,
               const HarnessOptions& opts, SweepTally& t, size_t sample_cap) {
  auto rep = check_soundness(sys, k, cfg, opts);
  t.instances += rep.instances;
  t.failures += rep.failures.size();
  for (const auto& f : rep.failures) {
    ++t.by_schema[f.schema + "/" + kname(f.kind)];
    if (t.samples.size() < sample_cap) t.samples.push_back(failure_line(f));
  }
}

std::string schema_summary(const SweepTally& t) {
  std::string s;
  for (const auto& [key, n] : t.by_schema) {
    if (!s.empty()) s += ", ";
    s += key + ":" + std::to_string(n);
  }
  return s;
}

// criterion 1: every axiom of the interleaving-free fragment holds modulo
// the step, pomset and history-preserving equivalences, over terms of size
// <= 3 on a two-letter alphabet without communication.
void criterion1() {
  HarnessOptions opts;
  opts.size_bound = 3;
  auto c = cfge();
  SweepTally t;
  for (auto k :
       {EquivalenceKind::Step, EquivalenceKind::Pomset, EquivalenceKind::Hp})
    run_sweep(System::PA1, k, c, opts, t, 6);
  verdict(1, t.failures == 0,
          std::to_string(t.instances) + " instances checked, " +
              std::to_string(t.failures) + " unsound (" + schema_summary(t) +
              ")");
  for (const auto& s : t.samples) note(s);
  if (t.failures)
    note("folding a sequential tail out of a parallel composition changes "
         "the causal order; step equivalence is blind to this, the pomset "
         "and hp games are not");
}

// criterion 2: as criterion 1, with communication and both synchronization
// policies active.
void criterion2() {
  HarnessOptions opts;
  opts.size_bound = 3;
  SweepTally t;
  for (auto p : {Policy::Optional, Policy::Forced}) {
    auto c = cfg0(p);
    for (auto k :
         {EquivalenceKind::Step, EquivalenceKind::Pomset, EquivalenceKind::Hp})
      run_sweep(System::PA1, k, c, opts, t, 6);
  }
  verdict(2, t.failures == 0,
          std::to_string(t.instances) + " instances checked, " +
              std::to_string(t.failures) + " unsound (" + schema_summary(t) +
              ")");
  for (const auto& s : t.samples) note(s);
}

// criterion 3: rewriting is complete for step equivalence on the
// communication-free system: equal normal forms exactly on the step classes.
void criterion3() {
  HarnessOptions opts;
  opts.size_bound = 6;
  auto rep =
      check_completeness(System::PA1, EquivalenceKind::Step, cfge(), opts);
  verdict(3, rep.violations.empty(),
          std::to_string(rep.terms) + " terms, " +
              std::to_string(rep.classes) + " step classes, " +
              std::to_string(rep.violations.size()) + " violations");
}

// criterion 4: on the same enumeration, the step classes are NOT refined by
// the finer equivalences — i.e. within each step class everything should
// also be pomset- and hp-equivalent — and sampled cross-class pairs are
// inequivalent under all three.
void criterion4() {
  EnumSpec es;
  es.system = System::PA1;
  es.alphabet = {"a", "b"};
  es.max_size = 6;
  auto terms = enum_terms(es);
  auto c = cfge();
  std::map<std::string, std::vector<int>> buckets;
  for (int i = 0; i < (int)terms.size(); ++i)
    buckets[step_fingerprint(terms[i], System::PA1, c)].push_back(i);

  std::size_t intra_pairs = 0, intra_bad = 0;
  std::vector<std::string> samples;
  for (const auto& [fp, idx] : buckets)
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = i + 1; j < idx.size(); ++j) {
        ++intra_pairs;
        const auto &t1 = terms[idx[i]], &t2 = terms[idx[j]];
        bool p = pomset_bisim(t1, t2, System::PA1, c);
        bool h = p && hp_bisim(t1, t2, System::PA1, c);
        if (!(p && h)) {
          ++intra_bad;
          if (samples.size() < 4)
            samples.push_back(format_term(t1) + "  vs  " + format_term(t2) +
                              (p ? "  (hp only)" : "  (pomset and hp)"));
        }
      }

  std::vector<std::string> bucket_keys;
  for (const auto& [fp, idx] : buckets) bucket_keys.push_back(fp);
  std::mt19937_64 rng(7);
  std::size_t cross_pairs = 0, cross_bad = 0;
  while (cross_pairs < 1000) {
    size_t b1 = rng() % bucket_keys.size(), b2 = rng() % bucket_keys.size();
    if (b1 == b2) continue;
    const auto& i1 = buckets[bucket_keys[b1]];
    const auto& i2 = buckets[bucket_keys[b2]];
    const auto& t1 = terms[i1[rng() % i1.size()]];
    const auto& t2 = terms[i2[rng() % i2.size()]];
    ++cross_pairs;
    if (step_bisim(t1, t2, System::PA1, c) ||
        pomset_bisim(t1, t2, System::PA1, c) ||
        hp_bisim(t1, t2, System::PA1, c))
      ++cross_bad;
  }

  verdict(4, intra_bad == 0 && cross_bad == 0,
          std::to_string(buckets.size()) + " step classes; " +
              std::to_string(intra_bad) + "/" + std::to_string(intra_pairs) +
              " same-class pairs split by a finer equivalence; " +
              std::to_string(cross_bad) + "/" + std::to_string(cross_pairs) +
              " sampled cross-class pairs wrongly related");
  for (const auto& s : samples) note(s);
  if (intra_bad)
    note("the step classes are strictly coarser than the pomset/hp classes, "
         "so a step-complete axiomatization cannot be complete for the finer "
         "equivalences");
}

// criterion 5: the full system with left merge and communication merge,
// all four equivalences, both policies.
void criterion5() {
  HarnessOptions opts;
  opts.size_bound = 3;
  SweepTally t;
  for (auto p : {Policy::Optional, Policy::Forced}) {
    auto c = cfg0(p);
    for (auto k : {EquivalenceKind::Step, EquivalenceKind::Pomset,
                   EquivalenceKind::Hp, EquivalenceKind::Hhp})
      run_sweep(System::PA2, k, c, opts, t, 8);
  }
  verdict(5, t.failures == 0,
          std::to_string(t.instances) + " instances checked, " +
              std::to_string(t.failures) + " unsound (" + schema_summary(t) +
              ")");
  for (const auto& s : t.samples) note(s);
}

// criterion 6: completeness of the full system for step and
// hereditary-history-preserving equivalence at size 5 with communication.
// Same-class normal-form splits explainable by closing labels under the
// communication function are listed as caveats and do not count as hard.
void criterion6() {
  HarnessOptions opts;
  opts.size_bound = 5;
  auto c = cfg0();
  std::size_t hard = 0, caveats = 0;
  std::vector<std::string> lines;
  for (auto k : {EquivalenceKind::Step, EquivalenceKind::Hhp}) {
    auto rep = check_completeness(System::PA2, k, c, opts);
    hard += rep.hard_violations();
    for (const auto& v : rep.violations) {
      if (v.gamma_caveat) {
        ++caveats;
        if (lines.size() < 12)
          lines.push_back("[caveat] " + v.term1 + "  vs  " + v.term2 +
                          "  (same class, NFs " + v.nf1 + " / " + v.nf2 +
                          "; " + kname(k) + ")");
      } else if (lines.size() < 12) {
        lines.push_back(std::string(v.cross_class ? "[collision] "
                                                  : "[split] ") +
                        v.term1 + "  vs  " + v.term2 + "  (NFs " + v.nf1 +
                        " / " + v.nf2 + "; " + kname(k) + ")");
      }
    }
  }
  verdict(6, hard == 0,
          std::to_string(hard) + " hard violations, " +
              std::to_string(caveats) + " communication-closure caveats");
  for (const auto& s : lines) note(s);
}

// criterion 7: the search for an axiom instance separating hp from hhp
// equivalence completes within the size-3 budget under every configuration,
// and the outcome is reported either way.
void criterion7() {
  HarnessOptions opts;
  opts.size_bound = 3;
  bool all_done = true;
  std::optional<HhpWitness> headline;
  std::size_t searched = 0;
  struct Run {
    std::string label;
    SemanticsConfig cfg;
  };
  std::vector<Run> runs = {{"no-comm/optional", cfge()},
                           {"comm/optional", cfg0(Policy::Optional)},
                           {"comm/forced", cfg0(Policy::Forced)}};
  {
    auto e = cfge();
    e.policy = Policy::Forced;
    runs.push_back({"no-comm/forced", e});
  }
  std::vector<std::string> lines;
  for (const auto& r : runs) {
    try {
      auto rep = find_hhp_witness(r.cfg, opts);
      searched += rep.instances_searched;
      if (rep.witness) {
        if (!headline) headline = rep.witness;
        lines.push_back(r.label + ": " + rep.witness->schema + " [" +
                        rep.witness->substitution + "]: " + rep.witness->lhs +
                        "  vs  " + rep.witness->rhs);
      } else {
        lines.push_back(r.label + ": no witness within budget");
      }
    } catch (const std::exception& e) {
      all_done = false;
      lines.push_back(r.label + ": aborted (" + e.what() + ")");
    }
  }
  verdict(7, all_done,
          std::to_string(searched) + " instances searched across 4 "
          "configurations" +
              (headline ? "; hp-but-not-hhp witness found: " +
                              headline->lhs + "  vs  " + headline->rhs
                        : "; no witness found"));
  for (const auto& s : lines) note(s);
  if (headline) note("why: " + headline->note);
}

// criterion 8: on every pair of terms of size <= 4, the equivalences form
// the expected chain (hhp implies hp implies pomset implies step) and the
// step game agrees with the independent fingerprint oracle.
void criterion8() {
  EnumSpec es;
  es.system = System::PA1;
  es.alphabet = {"a", "b"};
  es.max_size = 4;
  auto terms = enum_terms(es);
  auto c = cfg0();
  std::size_t pairs = 0, chain_bad = 0, oracle_bad = 0;
  for (size_t i = 0; i < terms.size(); ++i)
    for (size_t j = i; j < terms.size(); ++j) {
      ++pairs;
      bool s = step_bisim(terms[i], terms[j], System::PA1, c);
      bool p = pomset_bisim(terms[i], terms[j], System::PA1, c);
      bool h = hp_bisim(terms[i], terms[j], System::PA1, c);
      bool hh = hhp_bisim(terms[i], terms[j], System::PA1, c);
      if ((hh && !h) || (h && !p) || (p && !s)) ++chain_bad;
      bool fp = step_fingerprint(terms[i], System::PA1, c) ==
                step_fingerprint(terms[j], System::PA1, c);
      if (fp != s) ++oracle_bad;
    }
  verdict(8, chain_bad == 0 && oracle_bad == 0,
          std::to_string(pairs) + " pairs: " + std::to_string(chain_bad) +
              " chain violations, " + std::to_string(oracle_bad) +
              " step-game/fingerprint disagreements");
}

// criterion 9: the rewriter is confluent in practice (1000 random terms,
// randomized rule order, identical normal forms), a size-10 term's full
// transition system builds in under a second, and output is reproducible.
void criterion9() {
  auto c = cfg0();
  EnumSpec es;
  es.system = System::PA2;
  es.alphabet = {"a", "b", "c", "d"};
  es.max_size = 7;
  std::size_t confl_bad = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto t = sample_term(es, i);
    auto base = nf_code(normalize(t, System::PA2, c).nf);
    for (std::uint64_t seed : {11u, 12u}) {
      if (nf_code(normalize_random(t, System::PA2, c, seed).nf) != base)
        ++confl_bad;
    }
  }

  auto big = parse_term("(a . b . c . d) || (a . b)", System::PA2, &c);
  auto t0 = std::chrono::steady_clock::now();
  auto lts = build_lts(big, System::PA2, c);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  bool fast = ms < 1000;

  bool stable = lts_to_json(lts) == lts_to_json(build_lts(big, System::PA2, c));
  auto probe = parse_term("a || b + c . d", System::PA2, &c);
  stable = stable && nf_display(normalize(probe, System::PA2, c).nf) ==
                         nf_display(normalize(probe, System::PA2, c).nf);

  verdict(9, confl_bad == 0 && fast && stable,
          "confluence: " + std::to_string(confl_bad) +
              "/2000 divergent reruns; size-" + std::to_string(term_size(big)) +
              " term's transition system: " +
              std::to_string(lts.states.size()) + " states in " +
              std::to_string(ms) + " ms; serialization reproducible: " +
              (stable ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed;
}
