#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pa/config.hpp"
#include "pa/term.hpp"

namespace pa {

// ---------------------------------------------------------------------------
// Axiom schemas (Tables 2 and 4)

struct SchemaTerm;
using SchemaPtr = std::shared_ptr<const SchemaTerm>;

struct SchemaTerm {
  enum class Kind { Var, EVar, Gamma, Node };
  Kind kind;
  std::string name;          // Var / EVar
  Op op = Op::Atom;          // Node
  SchemaPtr left, right;     // Node; Gamma uses left/right as EVar refs
};

enum class SideCondition { None, OrderLE, GammaDefined };

struct AxiomSchema {
  std::string name;
  System system = System::PA1;
  SchemaPtr lhs, rhs;
  SideCondition side = SideCondition::None;
  std::string e1, e2;  // metavariables the side condition constrains
  std::vector<std::string> vars;   // schema term variables, in order
  std::vector<std::string> evars;  // event metavariables, in order
};

/// Verbatim schema lists: PA1 = A1-A5, P1-P7; PA2 = A1-A5, P1, L2-L5,
/// C6-C11.
std::vector<AxiomSchema> axiom_schemas(System system);

/// Instantiate a schema; nullopt = SKIP (side condition failed).
/// Gamma nodes evaluate to the communication result atom.
std::optional<std::pair<TermPtr, TermPtr>> instantiate(
    const AxiomSchema& schema, const std::map<std::string, TermPtr>& subst,
    const std::map<std::string, std::string>& events,
    const SemanticsConfig& cfg);

// ---------------------------------------------------------------------------
// Normal forms

/// Canonical step tree: NIL (no summands, the internal empty process) or a
/// sorted deduplicated set of step-prefixed summands. A null tail denotes
/// successful termination after the step.
struct NormalForm {
  struct Summand {
    std::vector<std::string> step;  // sorted multiset
    std::shared_ptr<const NormalForm> tail;  // nullptr = TERMINAL
  };
  std::vector<Summand> summands;  // empty = NIL

  bool is_nil() const { return summands.empty(); }
};

std::string nf_code(const NormalForm& nf);
std::string nf_display(const NormalForm& nf);

struct RewriteStep {
  std::string rule;
  std::string path;  // L/R moves from the root
};

struct RewriteReport {
  TermPtr input;
  NormalForm nf;
  std::vector<RewriteStep> rule_trace;
  System system;
  Policy policy;
};

/// Exhaustive innermost-first oriented rewriting (A4, A5; PA1 adds P3-P7;
/// PA2 adds P1, L2-L5, C6-C11 and the derived 0-rules), then folding into
/// the canonical NormalForm. Throws BudgetError past step_budget rewrites.
RewriteReport normalize(const TermPtr& t, System system,
                        const SemanticsConfig& cfg,
                        std::size_t step_budget = 1000000);

/// Randomized rule-application order (confluence experiments). Same result
/// contract as normalize.
RewriteReport normalize_random(const TermPtr& t, System system,
                               const SemanticsConfig& cfg, std::uint64_t seed,
                               std::size_t step_budget = 1000000);

/// Replay a rule trace from the input term; returns the folded NF.
NormalForm replay_trace(const TermPtr& t, const std::vector<RewriteStep>& trace,
                        System system, const SemanticsConfig& cfg);

/// Gamma-saturated refold of a term's normal form: every step label is
/// closed under in-step communication matchings per the active policy.
/// Used to classify completeness violations as the documented gamma caveat.
NormalForm saturated_nf(const TermPtr& t, System system,
                        const SemanticsConfig& cfg);

}  // namespace pa
