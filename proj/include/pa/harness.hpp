#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pa/axioms.hpp"
#include "pa/config.hpp"
#include "pa/equivalence.hpp"
#include "pa/term.hpp"

namespace pa {

// Soundness / completeness harnesses. The instance sweeps are data
// parallel: jobs > 1 distributes instances over OpenMP threads, jobs == 1
// runs the serial reference path. Reports are deterministic either way.

struct HarnessOptions {
  int size_bound = 3;
  std::vector<std::string> term_alphabet = {"a", "b"};
  int jobs = 1;
  std::size_t state_cap = 1000000;
};

struct SoundnessFailure {
  std::string schema;
  std::string substitution;  // "x:=a+b, y:=a"
  std::string events;        // "e1:=a, e2:=b"
  EquivalenceKind kind;
  std::string lhs, rhs;
  std::string witness;  // distinguishing move sequence when available
};

struct SoundnessReport {
  System system;
  EquivalenceKind kind;
  Policy policy;
  std::size_t instances = 0;
  std::size_t skipped = 0;
  std::vector<SoundnessFailure> failures;
};

SoundnessReport check_soundness(System system, EquivalenceKind kind,
                                const SemanticsConfig& cfg,
                                const HarnessOptions& opts);

struct CompletenessViolation {
  bool cross_class;  // same NF in different semantic classes
  std::string term1, term2;
  std::string nf1, nf2;
  bool gamma_caveat;  // saturated refolds agree: documented caveat pair
};

struct CompletenessReport {
  System system;
  EquivalenceKind kind;
  Policy policy;
  std::size_t terms = 0;
  std::size_t classes = 0;
  std::vector<CompletenessViolation> violations;
  std::size_t hard_violations() const {
    std::size_t n = 0;
    for (const auto& v : violations)
      if (!v.gamma_caveat) ++n;
    return n;
  }
};

CompletenessReport check_completeness(System system, EquivalenceKind kind,
                                      const SemanticsConfig& cfg,
                                      const HarnessOptions& opts);

struct HhpWitness {
  std::string schema;
  std::string substitution;
  std::string events;
  std::string lhs, rhs;
  std::string note;  // backtracking explanation
};

struct HhpWitnessReport {
  Policy policy;
  std::size_t instances_searched = 0;
  std::optional<HhpWitness> witness;
};

/// Search P1-P7 instances for LHS ~hp RHS but LHS !~hhp RHS.
HhpWitnessReport find_hhp_witness(const SemanticsConfig& cfg,
                                  const HarnessOptions& opts);

}  // namespace pa
