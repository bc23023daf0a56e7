#include "pa/axioms.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pa/semantics.hpp"

namespace pa {

// ---------------------------------------------------------------------------
// Schema construction

namespace {

SchemaPtr sv(const std::string& n) {
  return std::make_shared<SchemaTerm>(
      SchemaTerm{SchemaTerm::Kind::Var, n, Op::Atom, nullptr, nullptr});
}

SchemaPtr se(const std::string& n) {
  return std::make_shared<SchemaTerm>(
      SchemaTerm{SchemaTerm::Kind::EVar, n, Op::Atom, nullptr, nullptr});
}

SchemaPtr sg(const std::string& e1, const std::string& e2) {
  return std::make_shared<SchemaTerm>(
      SchemaTerm{SchemaTerm::Kind::Gamma, "", Op::Atom, se(e1), se(e2)});
}

SchemaPtr sn(Op op, SchemaPtr l, SchemaPtr r) {
  return std::make_shared<SchemaTerm>(
      SchemaTerm{SchemaTerm::Kind::Node, "", op, std::move(l), std::move(r)});
}

void collect_names(const SchemaPtr& s, std::vector<std::string>& vars,
                   std::vector<std::string>& evars) {
  if (!s) return;
  if (s->kind == SchemaTerm::Kind::Var) {
    if (std::find(vars.begin(), vars.end(), s->name) == vars.end())
      vars.push_back(s->name);
    return;
  }
  if (s->kind == SchemaTerm::Kind::EVar) {
    if (std::find(evars.begin(), evars.end(), s->name) == evars.end())
      evars.push_back(s->name);
    return;
  }
  collect_names(s->left, vars, evars);
  collect_names(s->right, vars, evars);
}

AxiomSchema mk(System sys, const std::string& name, SchemaPtr lhs,
               SchemaPtr rhs, SideCondition side = SideCondition::None,
               const std::string& e1 = "", const std::string& e2 = "") {
  AxiomSchema a;
  a.name = name;
  a.system = sys;
  a.lhs = std::move(lhs);
  a.rhs = std::move(rhs);
  a.side = side;
  a.e1 = e1;
  a.e2 = e2;
  collect_names(a.lhs, a.vars, a.evars);
  collect_names(a.rhs, a.vars, a.evars);
  return a;
}

std::vector<AxiomSchema> a_axioms(System sys) {
  auto x = sv("x"), y = sv("y"), z = sv("z");
  return {
      mk(sys, "A1", sn(Op::Plus, x, y), sn(Op::Plus, y, x)),
      mk(sys, "A2", sn(Op::Plus, sn(Op::Plus, x, y), z),
         sn(Op::Plus, x, sn(Op::Plus, y, z))),
      mk(sys, "A3", sn(Op::Plus, x, x), x),
      mk(sys, "A4", sn(Op::Seq, sn(Op::Plus, x, y), z),
         sn(Op::Plus, sn(Op::Seq, x, z), sn(Op::Seq, y, z))),
      mk(sys, "A5", sn(Op::Seq, sn(Op::Seq, x, y), z),
         sn(Op::Seq, x, sn(Op::Seq, y, z))),
  };
}

}  // namespace

std::vector<AxiomSchema> axiom_schemas(System system) {
  auto x = sv("x"), y = sv("y"), z = sv("z");
  auto e1 = se("e1"), e2 = se("e2");
  std::vector<AxiomSchema> out = a_axioms(system);
  if (system == System::PA1) {
    out.push_back(mk(system, "P1", sn(Op::Par, x, y), sn(Op::Par, y, x)));
    out.push_back(mk(system, "P2", sn(Op::Par, sn(Op::Par, x, y), z),
                     sn(Op::Par, x, sn(Op::Par, y, z))));
    out.push_back(mk(system, "P3", sn(Op::Par, e1, sn(Op::Seq, e2, y)),
                     sn(Op::Seq, sn(Op::Par, e1, e2), y)));
    out.push_back(mk(system, "P4", sn(Op::Par, sn(Op::Seq, e1, x), e2),
                     sn(Op::Seq, sn(Op::Par, e1, e2), x)));
    out.push_back(mk(system, "P5",
                     sn(Op::Par, sn(Op::Seq, e1, x), sn(Op::Seq, e2, y)),
                     sn(Op::Seq, sn(Op::Par, e1, e2), sn(Op::Par, x, y))));
    out.push_back(mk(system, "P6", sn(Op::Par, sn(Op::Plus, x, y), z),
                     sn(Op::Plus, sn(Op::Par, x, z), sn(Op::Par, y, z))));
    out.push_back(mk(system, "P7", sn(Op::Par, x, sn(Op::Plus, y, z)),
                     sn(Op::Plus, sn(Op::Par, x, y), sn(Op::Par, x, z))));
    return out;
  }
  out.push_back(mk(system, "P1", sn(Op::Par, x, y),
                   sn(Op::Plus,
                      sn(Op::Plus, sn(Op::LMerge, x, y), sn(Op::LMerge, y, x)),
                      sn(Op::CMerge, x, y))));
  out.push_back(mk(system, "L2", sn(Op::LMerge, e1, sn(Op::Seq, e2, y)),
                   sn(Op::Seq, sn(Op::LMerge, e1, e2), y),
                   SideCondition::OrderLE, "e1", "e2"));
  out.push_back(mk(system, "L3", sn(Op::LMerge, sn(Op::Seq, e1, x), e2),
                   sn(Op::Seq, sn(Op::LMerge, e1, e2), x),
                   SideCondition::OrderLE, "e1", "e2"));
  out.push_back(mk(system, "L4",
                   sn(Op::LMerge, sn(Op::Seq, e1, x), sn(Op::Seq, e2, y)),
                   sn(Op::Seq, sn(Op::LMerge, e1, e2), sn(Op::Par, x, y)),
                   SideCondition::OrderLE, "e1", "e2"));
  out.push_back(mk(system, "L5", sn(Op::LMerge, sn(Op::Plus, x, y), z),
                   sn(Op::Plus, sn(Op::LMerge, x, z), sn(Op::LMerge, y, z))));
  out.push_back(mk(system, "C6", sn(Op::CMerge, e1, e2), sg("e1", "e2"),
                   SideCondition::GammaDefined, "e1", "e2"));
  out.push_back(mk(system, "C7", sn(Op::CMerge, e1, sn(Op::Seq, e2, y)),
                   sn(Op::Seq, sg("e1", "e2"), y), SideCondition::GammaDefined,
                   "e1", "e2"));
  out.push_back(mk(system, "C8", sn(Op::CMerge, sn(Op::Seq, e1, x), e2),
                   sn(Op::Seq, sg("e1", "e2"), x), SideCondition::GammaDefined,
                   "e1", "e2"));
  out.push_back(mk(system, "C9",
                   sn(Op::CMerge, sn(Op::Seq, e1, x), sn(Op::Seq, e2, y)),
                   sn(Op::Seq, sg("e1", "e2"), sn(Op::Par, x, y)),
                   SideCondition::GammaDefined, "e1", "e2"));
  out.push_back(mk(system, "C10", sn(Op::CMerge, sn(Op::Plus, x, y), z),
                   sn(Op::Plus, sn(Op::CMerge, x, z), sn(Op::CMerge, y, z))));
  out.push_back(mk(system, "C11", sn(Op::CMerge, x, sn(Op::Plus, y, z)),
                   sn(Op::Plus, sn(Op::CMerge, x, y), sn(Op::CMerge, x, z))));
  return out;
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

TermPtr build_instance(const SchemaPtr& s,
                       const std::map<std::string, TermPtr>& subst,
                       const std::map<std::string, std::string>& events,
                       const SemanticsConfig& cfg, bool& ok) {
  if (!ok) return nullptr;
  switch (s->kind) {
    case SchemaTerm::Kind::Var: {
      auto it = subst.find(s->name);
      if (it == subst.end()) {
        ok = false;
        return nullptr;
      }
      return it->second;
    }
    case SchemaTerm::Kind::EVar: {
      auto it = events.find(s->name);
      if (it == events.end()) {
        ok = false;
        return nullptr;
      }
      return atom(it->second);
    }
    case SchemaTerm::Kind::Gamma: {
      auto g = cfg.comm(events.at(s->left->name), events.at(s->right->name));
      if (!g) {
        ok = false;
        return nullptr;
      }
      return atom(*g);
    }
    case SchemaTerm::Kind::Node: {
      TermPtr l = build_instance(s->left, subst, events, cfg, ok);
      TermPtr r = build_instance(s->right, subst, events, cfg, ok);
      if (!ok) return nullptr;
      return binop(s->op, l, r);
    }
  }
  return nullptr;
}

}  // namespace

std::optional<std::pair<TermPtr, TermPtr>> instantiate(
    const AxiomSchema& schema, const std::map<std::string, TermPtr>& subst,
    const std::map<std::string, std::string>& events,
    const SemanticsConfig& cfg) {
  if (schema.system == System::PA1)
    for (const auto& [name, t] : subst)
      if (!is_pa1(t))
        throw std::invalid_argument("ill-typed substitution for variable " +
                                    name + ": term uses PA2 operators");
  if (schema.side == SideCondition::OrderLE) {
    if (!cfg.leq(events.at(schema.e1), events.at(schema.e2)))
      return std::nullopt;
  } else if (schema.side == SideCondition::GammaDefined) {
    if (!cfg.comm(events.at(schema.e1), events.at(schema.e2)))
      return std::nullopt;
  }
  bool ok = true;
  TermPtr lhs = build_instance(schema.lhs, subst, events, cfg, ok);
  TermPtr rhs = build_instance(schema.rhs, subst, events, cfg, ok);
  if (!ok) return std::nullopt;
  return std::make_pair(lhs, rhs);
}

// ---------------------------------------------------------------------------
// Rewrite rules

namespace {

bool is_zero(const TermPtr& t) { return t->op == Op::Zero; }
bool is_atom(const TermPtr& t) { return t->op == Op::Atom; }

// Pure parallel combination of atoms (a unit summand head in PA1).
bool is_step_atom(const TermPtr& t) {
  if (t->op == Op::Atom) return true;
  if (t->op == Op::Par) return is_step_atom(t->left) && is_step_atom(t->right);
  return false;
}

// Unit summand head in PA2: 'a' or 'a |_ b' (order respected, checked by
// the L-rules before such a unit survives rewriting).
bool is_merge_unit(const TermPtr& t) {
  return is_atom(t) ||
         (t->op == Op::LMerge && is_atom(t->left) && is_atom(t->right));
}

// First-step head of a rewritten PA2 merge operand; nullptr when the
// operand is not in head shape (a + or 0 to be handled by other rules).
TermPtr head_of(const TermPtr& t) {
  if (is_merge_unit(t)) return t;
  if (t->op == Op::Seq && is_merge_unit(t->left)) return t->left;
  return nullptr;
}

struct Rule {
  std::string name;
  System system;  // PA1 = shared by both; rules specific to PA2 tagged so
  bool shared;
  std::function<TermPtr(const TermPtr&, const SemanticsConfig&)> apply;
};

const std::vector<Rule>& rule_table() {
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> r;
    auto add = [&](const std::string& name, System sys, bool shared, auto fn) {
      r.push_back(Rule{name, sys, shared, fn});
    };
    // Shared structural rules.
    add("A4", System::PA1, true,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Seq || t->left->op != Op::Plus) return nullptr;
          return plus(seq(t->left->left, t->right),
                      seq(t->left->right, t->right));
        });
    add("A5", System::PA1, true,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Seq || t->left->op != Op::Seq) return nullptr;
          return seq(t->left->left, seq(t->left->right, t->right));
        });
    add("Z-plus", System::PA1, true,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Plus) return nullptr;
          if (is_zero(t->left)) return t->right;
          if (is_zero(t->right)) return t->left;
          return nullptr;
        });
    add("Z-seq", System::PA1, true,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op == Op::Seq && is_zero(t->left)) return zero();
          return nullptr;
        });
    add("Z-merge", System::PA1, true,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Par && t->op != Op::LMerge && t->op != Op::CMerge)
            return nullptr;
          if (is_zero(t->left) || is_zero(t->right)) return zero();
          return nullptr;
        });

    // PA1 parallel composition.
    add("P6", System::PA1, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Par || t->left->op != Op::Plus) return nullptr;
          return plus(par(t->left->left, t->right),
                      par(t->left->right, t->right));
        });
    add("P7", System::PA1, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Par || t->right->op != Op::Plus) return nullptr;
          return plus(par(t->left, t->right->left),
                      par(t->left, t->right->right));
        });
    add("P5", System::PA1, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Par || t->left->op != Op::Seq ||
              t->right->op != Op::Seq || !is_step_atom(t->left->left) ||
              !is_step_atom(t->right->left))
            return nullptr;
          return seq(par(t->left->left, t->right->left),
                     par(t->left->right, t->right->right));
        });
    add("P3", System::PA1, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Par || !is_step_atom(t->left) ||
              t->right->op != Op::Seq || !is_step_atom(t->right->left))
            return nullptr;
          return seq(par(t->left, t->right->left), t->right->right);
        });
    add("P4", System::PA1, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Par || t->left->op != Op::Seq ||
              !is_step_atom(t->left->left) || !is_step_atom(t->right))
            return nullptr;
          return seq(par(t->left->left, t->right), t->left->right);
        });

    // PA2 parallel expansion and merge rules.
    add("P1", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::Par || is_zero(t->left) || is_zero(t->right))
            return nullptr;
          return plus(plus(lmerge(t->left, t->right),
                           lmerge(t->right, t->left)),
                      cmerge(t->left, t->right));
        });
    add("L5", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::LMerge || t->left->op != Op::Plus) return nullptr;
          return plus(lmerge(t->left->left, t->right),
                      lmerge(t->left->right, t->right));
        });
    add("L5r", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::LMerge || t->right->op != Op::Plus) return nullptr;
          return plus(lmerge(t->left, t->right->left),
                      lmerge(t->left, t->right->right));
        });
    add("L2", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::LMerge || !is_atom(t->left) ||
              t->right->op != Op::Seq || !is_atom(t->right->left))
            return nullptr;
          if (!cfg.leq(t->left->label, t->right->left->label)) return nullptr;
          return seq(lmerge(t->left, t->right->left), t->right->right);
        });
    add("L3", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::LMerge || t->left->op != Op::Seq ||
              !is_atom(t->left->left) || !is_atom(t->right))
            return nullptr;
          if (!cfg.leq(t->left->left->label, t->right->label)) return nullptr;
          return seq(lmerge(t->left->left, t->right), t->left->right);
        });
    add("L4", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::LMerge || t->left->op != Op::Seq ||
              !is_atom(t->left->left) || t->right->op != Op::Seq ||
              !is_atom(t->right->left))
            return nullptr;
          if (!cfg.leq(t->left->left->label, t->right->left->label))
            return nullptr;
          return seq(lmerge(t->left->left, t->right->left),
                     par(t->left->right, t->right->right));
        });
    add("C6", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::CMerge || !is_atom(t->left) || !is_atom(t->right))
            return nullptr;
          auto g = cfg.comm(t->left->label, t->right->label);
          return g ? atom(*g) : nullptr;
        });
    add("C7", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::CMerge || !is_atom(t->left) ||
              t->right->op != Op::Seq || !is_atom(t->right->left))
            return nullptr;
          auto g = cfg.comm(t->left->label, t->right->left->label);
          return g ? seq(atom(*g), t->right->right) : nullptr;
        });
    add("C8", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::CMerge || t->left->op != Op::Seq ||
              !is_atom(t->left->left) || !is_atom(t->right))
            return nullptr;
          auto g = cfg.comm(t->left->left->label, t->right->label);
          return g ? seq(atom(*g), t->left->right) : nullptr;
        });
    add("C9", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::CMerge || t->left->op != Op::Seq ||
              !is_atom(t->left->left) || t->right->op != Op::Seq ||
              !is_atom(t->right->left))
            return nullptr;
          auto g = cfg.comm(t->left->left->label, t->right->left->label);
          return g ? seq(atom(*g), par(t->left->right, t->right->right))
                   : nullptr;
        });
    add("C10", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::CMerge || t->left->op != Op::Plus) return nullptr;
          return plus(cmerge(t->left->left, t->right),
                      cmerge(t->left->right, t->right));
        });
    add("C11", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig&) -> TermPtr {
          if (t->op != Op::CMerge || t->right->op != Op::Plus) return nullptr;
          return plus(cmerge(t->left, t->right->left),
                      cmerge(t->left, t->right->right));
        });
    // Derived infeasible-first-step rules: a merge whose first joint step
    // cannot happen is the empty process. L0: order premise fails, or an
    // operand head is itself a two-event unit (no singleton first step).
    // C0: analogous for | with an undefined communication.
    add("L0", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::LMerge) return nullptr;
          TermPtr h1 = head_of(t->left), h2 = head_of(t->right);
          if (!h1 || !h2) return nullptr;
          if (!is_atom(h1) || !is_atom(h2)) return zero();
          if (!cfg.leq(h1->label, h2->label)) return zero();
          return nullptr;
        });
    add("C0", System::PA2, false,
        [](const TermPtr& t, const SemanticsConfig& cfg) -> TermPtr {
          if (t->op != Op::CMerge) return nullptr;
          TermPtr h1 = head_of(t->left), h2 = head_of(t->right);
          if (!h1 || !h2) return nullptr;
          if (!is_atom(h1) || !is_atom(h2)) return zero();
          if (!cfg.comm(h1->label, h2->label)) return zero();
          return nullptr;
        });
    return r;
  }();
  return rules;
}

std::vector<const Rule*> active_rules(System system) {
  std::vector<const Rule*> out;
  for (const auto& r : rule_table())
    if (r.shared || r.system == system) out.push_back(&r);
  return out;
}

const Rule* rule_by_name(const std::string& name) {
  for (const auto& r : rule_table())
    if (r.name == name) return &r;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Rewriting strategies

struct Budget {
  std::size_t left;
  void spend() {
    if (left == 0) throw BudgetError("rewrite step budget exceeded");
    --left;
  }
};

TermPtr rewrite_fix(const TermPtr& t, const std::vector<const Rule*>& rules,
                    const SemanticsConfig& cfg, const std::string& path,
                    std::vector<RewriteStep>& trace, Budget& budget) {
  TermPtr cur = t;
  for (;;) {
    if (cur->op != Op::Atom && cur->op != Op::Zero) {
      TermPtr l = rewrite_fix(cur->left, rules, cfg, path + "L", trace, budget);
      TermPtr r =
          rewrite_fix(cur->right, rules, cfg, path + "R", trace, budget);
      if (l != cur->left || r != cur->right) cur = binop(cur->op, l, r);
    }
    const Rule* hit = nullptr;
    TermPtr next;
    for (const Rule* rule : rules) {
      next = rule->apply(cur, cfg);
      if (next) {
        hit = rule;
        break;
      }
    }
    if (!hit) return cur;
    budget.spend();
    trace.push_back({hit->name, path});
    cur = next;
  }
}

TermPtr apply_at(const TermPtr& t, const std::string& path, std::size_t i,
                 const std::function<TermPtr(const TermPtr&)>& fn) {
  if (i == path.size()) {
    TermPtr r = fn(t);
    if (!r) throw std::runtime_error("trace replay: rule not applicable");
    return r;
  }
  if (t->op == Op::Atom || t->op == Op::Zero)
    throw std::runtime_error("trace replay: path leaves the term");
  if (path[i] == 'L')
    return binop(t->op, apply_at(t->left, path, i + 1, fn), t->right);
  return binop(t->op, t->left, apply_at(t->right, path, i + 1, fn));
}

void collect_redexes(const TermPtr& t, const std::vector<const Rule*>& rules,
                     const SemanticsConfig& cfg, const std::string& path,
                     std::vector<std::pair<std::string, const Rule*>>& out) {
  for (const Rule* rule : rules)
    if (rule->apply(t, cfg)) out.push_back({path, rule});
  if (t->op != Op::Atom && t->op != Op::Zero) {
    collect_redexes(t->left, rules, cfg, path + "L", out);
    collect_redexes(t->right, rules, cfg, path + "R", out);
  }
}

// ---------------------------------------------------------------------------
// Folding rewritten terms into NormalForm

using NfPtr = std::shared_ptr<const NormalForm>;

std::string tail_code(const NfPtr& tail) {
  return tail ? "." + nf_code(*tail) : "";
}

void sort_dedup(NormalForm& nf) {
  std::sort(nf.summands.begin(), nf.summands.end(),
            [](const NormalForm::Summand& a, const NormalForm::Summand& b) {
              auto ka = std::make_pair(step_code(a.step), tail_code(a.tail));
              auto kb = std::make_pair(step_code(b.step), tail_code(b.tail));
              return ka < kb;
            });
  nf.summands.erase(
      std::unique(nf.summands.begin(), nf.summands.end(),
                  [](const NormalForm::Summand& a,
                     const NormalForm::Summand& b) {
                    return step_code(a.step) == step_code(b.step) &&
                           tail_code(a.tail) == tail_code(b.tail);
                  }),
      nf.summands.end());
}

// Step labels denoted by a unit head. PA1 parallel units resolve through
// the configured policy: under forced every communication matching must
// happen (maximal matchings), under optional the axioms provide no
// communication collapse for ||, so the plain multiset label is kept.
std::set<Step> unit_steps(const TermPtr& u, System system,
                          const SemanticsConfig& cfg) {
  if (u->op == Op::Atom) return {{u->label}};
  if (u->op == Op::LMerge && is_merge_unit(u)) {
    Step s{u->left->label, u->right->label};
    std::sort(s.begin(), s.end());
    return {s};
  }
  if (u->op == Op::Par && system == System::PA1 && is_step_atom(u)) {
    auto ls = unit_steps(u->left, system, cfg);
    auto rs = unit_steps(u->right, system, cfg);
    if (cfg.policy == Policy::Optional) {
      // exactly the no-communication matching
      Step s = *ls.begin();
      const Step& r = *rs.begin();
      s.insert(s.end(), r.begin(), r.end());
      std::sort(s.begin(), s.end());
      return {s};
    }
    std::set<Step> out;
    for (const auto& a : ls)
      for (const auto& b : rs)
        for (const auto& s : compose_steps(a, b, cfg)) out.insert(s);
    return out;
  }
  throw std::runtime_error("term not in normal shape: " + format_term(u));
}

NfPtr fold_term(const TermPtr& t, System system, const SemanticsConfig& cfg,
                std::vector<RewriteStep>* trace) {
  auto nf = std::make_shared<NormalForm>();
  if (t->op == Op::Zero) return nf;
  std::vector<TermPtr> summands;
  std::function<void(const TermPtr&)> flatten = [&](const TermPtr& s) {
    if (s->op == Op::Plus) {
      flatten(s->left);
      flatten(s->right);
    } else {
      summands.push_back(s);
    }
  };
  flatten(t);
  for (const TermPtr& s : summands) {
    TermPtr head = s;
    NfPtr tail;  // nullptr = TERMINAL
    if (s->op == Op::Seq) {
      head = s->left;
      tail = fold_term(s->right, system, cfg, trace);
    }
    auto steps = unit_steps(head, system, cfg);
    if (trace && head->op == Op::Par)
      trace->push_back({"step-fold", format_term(head)});
    for (const auto& step : steps)
      nf->summands.push_back({step, tail});
  }
  sort_dedup(*nf);
  return nf;
}

}  // namespace

std::string nf_code(const NormalForm& nf) {
  if (nf.is_nil()) return "0";
  std::string out = "{";
  for (const auto& s : nf.summands) {
    out += step_code(s.step);
    if (s.tail) out += "." + nf_code(*s.tail);
    out += ";";
  }
  out += "}";
  return out;
}

std::string nf_display(const NormalForm& nf) {
  if (nf.is_nil()) return "0";
  std::string out;
  for (size_t i = 0; i < nf.summands.size(); ++i) {
    if (i) out += " + ";
    const auto& s = nf.summands[i];
    out += "{";
    for (size_t j = 0; j < s.step.size(); ++j) {
      if (j) out += ",";
      out += s.step[j];
    }
    out += "}";
    if (s.tail) {
      std::string t = nf_display(*s.tail);
      out += "." + (s.tail->summands.size() > 1 ? "(" + t + ")" : t);
    }
  }
  return out;
}

RewriteReport normalize(const TermPtr& t, System system,
                        const SemanticsConfig& cfg, std::size_t step_budget) {
  RewriteReport rep;
  rep.input = t;
  rep.system = system;
  rep.policy = cfg.policy;
  Budget budget{step_budget};
  auto rules = active_rules(system);
  TermPtr r = rewrite_fix(t, rules, cfg, "", rep.rule_trace, budget);
  rep.nf = *fold_term(r, system, cfg, &rep.rule_trace);
  return rep;
}

RewriteReport normalize_random(const TermPtr& t, System system,
                               const SemanticsConfig& cfg, std::uint64_t seed,
                               std::size_t step_budget) {
  RewriteReport rep;
  rep.input = t;
  rep.system = system;
  rep.policy = cfg.policy;
  std::mt19937_64 rng(seed);
  Budget budget{step_budget};
  auto rules = active_rules(system);
  TermPtr cur = t;
  for (;;) {
    std::vector<std::pair<std::string, const Rule*>> redexes;
    collect_redexes(cur, rules, cfg, "", redexes);
    if (redexes.empty()) break;
    auto& [path, rule] =
        redexes[std::uniform_int_distribution<size_t>(0, redexes.size() - 1)(
            rng)];
    budget.spend();
    rep.rule_trace.push_back({rule->name, path});
    cur = apply_at(cur, path, 0, [&](const TermPtr& n) {
      return rule->apply(n, cfg);
    });
  }
  rep.nf = *fold_term(cur, system, cfg, &rep.rule_trace);
  return rep;
}

NormalForm replay_trace(const TermPtr& t, const std::vector<RewriteStep>& trace,
                        System system, const SemanticsConfig& cfg) {
  TermPtr cur = t;
  for (const auto& st : trace) {
    if (st.rule == "step-fold") continue;  // folding artifact, not a rewrite
    const Rule* rule = rule_by_name(st.rule);
    if (!rule) throw std::runtime_error("trace replay: unknown rule " + st.rule);
    cur = apply_at(cur, st.path, 0, [&](const TermPtr& n) {
      return rule->apply(n, cfg);
    });
  }
  return *fold_term(cur, system, cfg, nullptr);
}

// ---------------------------------------------------------------------------
// Gamma saturation (completeness caveat classification)

namespace {

std::set<Step> step_closure(const Step& start, const SemanticsConfig& cfg) {
  std::set<Step> seen{start};
  std::vector<Step> work{start};
  while (!work.empty()) {
    Step s = work.back();
    work.pop_back();
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j) {
        auto g = cfg.comm(s[i], s[j]);
        if (!g) continue;
        Step m;
        for (size_t k = 0; k < s.size(); ++k)
          if (k != i && k != j) m.push_back(s[k]);
        m.push_back(*g);
        std::sort(m.begin(), m.end());
        if (seen.insert(m).second) work.push_back(m);
      }
  }
  return seen;
}

NfPtr saturate(const NormalForm& nf, const SemanticsConfig& cfg) {
  auto out = std::make_shared<NormalForm>();
  for (const auto& s : nf.summands) {
    NfPtr tail = s.tail ? saturate(*s.tail, cfg) : nullptr;
    for (const auto& step : step_closure(s.step, cfg))
      out->summands.push_back({step, tail});
  }
  sort_dedup(*out);
  return out;
}

}  // namespace

NormalForm saturated_nf(const TermPtr& t, System system,
                        const SemanticsConfig& cfg) {
  RewriteReport rep = normalize(t, system, cfg);
  return *saturate(rep.nf, cfg);
}

}  // namespace pa
