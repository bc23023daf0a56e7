#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pa/config.hpp"
#include "pa/term.hpp"

namespace pa {

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A step label: nonempty sorted multiset of event labels.
using Step = std::vector<std::string>;

std::string step_code(const Step& s);  // "a+b" sorted-joined

/// One fired event occurrence. Identity within a run is the set of atom
/// leaves (in-order leaf indices of the run's root term) it consumed; a
/// communication occurrence owns the union of both component leaf sets.
struct Event {
  std::vector<int> leaves;  // sorted, nonempty
  std::string label;

  bool operator==(const Event& o) const {
    return leaves == o.leaves && label == o.label;
  }
  bool operator<(const Event& o) const {
    return leaves != o.leaves ? leaves < o.leaves : label < o.label;
  }
};

/// The events fired by one SOS transition.
using StepEvents = std::vector<Event>;

Step labels_of(const StepEvents& se);

/// Per-root-term context: leaf labels and the leaf-level sequential
/// precedence relation (l before l' via some Seq ancestor). The causal
/// order on events is the transitive closure of the leaf-induced causes.
struct RootCtx {
  TermPtr root;
  int nleaves = 0;
  std::vector<std::string> leaf_label;
  std::vector<std::vector<bool>> seq_prec;  // [l][l']

  explicit RootCtx(TermPtr t);
};

/// A run state over a fixed root term: which events fired so far.
/// The residual term is derived; ~empty fired set is the initial state.
struct Marking {
  std::vector<Event> events;   // in firing order
  std::vector<bool> fired;     // per leaf

  explicit Marking(const RootCtx& ctx)
      : fired(static_cast<size_t>(ctx.nleaves), false) {}
  void fire(const StepEvents& se);
  void unfire(const Event& e);  // removes by identity
};

/// All transitions of the residual denoted by (ctx.root, fired leaves).
/// Lockstep ||: both sides fire, labels merged through gamma matchings
/// under the configured policy. |_ and | require singleton steps on both
/// sides (plus the order / gamma-defined premise) for their first step and
/// continue as || afterwards.
std::vector<StepEvents> transitions(const RootCtx& ctx,
                                    const std::vector<bool>& fired,
                                    System system,
                                    const SemanticsConfig& cfg);

/// Residual term of a marking; nullptr denotes successful termination.
TermPtr residual(const RootCtx& ctx, const std::vector<bool>& fired);

/// True when the subtree rooted at the whole term is completely executed.
bool marking_done(const RootCtx& ctx, const std::vector<bool>& fired);

/// Possible joint step labels of two component steps (pairwise gamma
/// matchings over cross pairs; optional = every matching including the
/// empty one, forced = maximal matchings only).
std::set<Step> compose_steps(const Step& x, const Step& y,
                             const SemanticsConfig& cfg);

/// Causal order matrix over a list of events: strict partial order,
/// transitive closure of the leaf-induced cause relation.
std::vector<std::vector<bool>> causal_order(const RootCtx& ctx,
                                            const std::vector<Event>& events);

// ---------------------------------------------------------------------------
// LTS

struct Lts {
  struct Edge {
    int from;
    Step label;
    int to;
  };
  std::vector<std::string> states;  // formatted residuals; TERM printed "√"
  std::vector<TermPtr> state_terms;  // nullptr for TERM
  std::vector<Edge> edges;
  int initial = 0;
  int term_state = -1;              // -1 when unreachable
  std::vector<int> stuck;           // non-TERM states without edges

  bool is_term(int s) const { return s == term_state; }
};

/// Exhaustive forward closure; states quotiented by structural identity of
/// the (guard-erased) residual term. Throws BudgetError past state_cap.
Lts build_lts(const TermPtr& t, System system, const SemanticsConfig& cfg,
              std::size_t state_cap = 1000000);

std::string lts_to_dot(const Lts& lts);
std::string lts_to_json(const Lts& lts);

// ---------------------------------------------------------------------------
// Pomsets

struct Pomset {
  std::vector<std::string> labels;
  std::vector<std::vector<bool>> order;  // strict partial order
};

/// Canonical code, equal iff pomsets are isomorphic. Exhaustive
/// backtracking over label-compatible bijections. Throws BudgetError when
/// the pomset exceeds `budget` occurrences.
std::string canonical_pomset(const Pomset& p, int budget = 12);

/// All nonempty run-prefix pomset transitions from the state denoted by
/// term t: canonical pomset code paired with the formatted end state
/// ("√" for TERM). Deterministic (sorted).
std::set<std::pair<std::string, std::string>> pomset_transitions(
    const TermPtr& t, System system, const SemanticsConfig& cfg,
    int occurrence_budget = 12);

/// As above but also reporting the concrete pomsets (for the CLI).
struct PomsetTransition {
  Pomset pomset;
  std::string code;
  std::string end_state;
};
std::vector<PomsetTransition> enumerate_pomset_transitions(
    const TermPtr& t, System system, const SemanticsConfig& cfg,
    int occurrence_budget = 12);

}  // namespace pa
