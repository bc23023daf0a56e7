#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pa/config.hpp"
#include "pa/semantics.hpp"
#include "pa/term.hpp"

namespace pa {

enum class EquivalenceKind { Step, Pomset, Hp, Hhp };

std::string kind_name(EquivalenceKind k);
std::optional<EquivalenceKind> kind_from_name(const std::string& s);

/// Game/fixpoint decision of t1 ~kind t2. Termination is observable: TERM
/// relates only to TERM, a stuck state only to a stuck state.
bool equivalent(EquivalenceKind kind, const TermPtr& t1, const TermPtr& t2,
                System system, const SemanticsConfig& cfg);

bool step_bisim(const TermPtr& t1, const TermPtr& t2, System system,
                const SemanticsConfig& cfg);
bool pomset_bisim(const TermPtr& t1, const TermPtr& t2, System system,
                  const SemanticsConfig& cfg);
bool hp_bisim(const TermPtr& t1, const TermPtr& t2, System system,
              const SemanticsConfig& cfg);
bool hhp_bisim(const TermPtr& t1, const TermPtr& t2, System system,
               const SemanticsConfig& cfg);

/// Independent oracle for ~s: canonical code of the bisimulation-collapsed
/// step tree. Equal fingerprints iff step-bisimilar (LTS finite, acyclic).
std::string step_fingerprint(const TermPtr& t, System system,
                             const SemanticsConfig& cfg);

/// A distinguishing move sequence when t1 !~s t2 (for CLI verdicts):
/// each entry is a step label fired on the side that cannot be matched.
std::optional<std::vector<std::string>> step_distinguisher(
    const TermPtr& t1, const TermPtr& t2, System system,
    const SemanticsConfig& cfg);

}  // namespace pa
