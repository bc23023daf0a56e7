#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pa/config.hpp"
#include "pa/enumerate.hpp"
#include "pa/equivalence.hpp"
#include "pa/harness.hpp"
#include "pa/parse.hpp"
#include "pa/semantics.hpp"
#include "pa/term.hpp"

using nlohmann::json;
using namespace pa;

namespace {

System parse_system(const std::string& s) {
  if (s == "pa1" || s == "PA1") return System::PA1;
  if (s == "pa2" || s == "PA2") return System::PA2;
  throw CLI::ValidationError("--system must be pa1 or pa2");
}

EquivalenceKind parse_rel(const std::string& s) {
  auto k = kind_from_name(s);
  if (!k) throw CLI::ValidationError("--rel must be one of s, p, hp, hhp");
  return *k;
}

SemanticsConfig load_cfg(const std::string& path, const std::string& policy) {
  SemanticsConfig cfg = load_config_file(path);
  if (policy == "optional")
    cfg.policy = Policy::Optional;
  else if (policy == "forced")
    cfg.policy = Policy::Forced;
  else if (!policy.empty())
    throw CLI::ValidationError("--policy must be optional or forced");
  return cfg;
}

const char* policy_name(Policy p) {
  return p == Policy::Optional ? "optional" : "forced";
}

std::string join_step(const Step& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += s[i];
  }
  return out + "}";
}

json soundness_json(const SoundnessReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"schema", f.schema},
                        {"substitution", f.substitution},
                        {"events", f.events},
                        {"rel", kind_name(f.kind)},
                        {"lhs", f.lhs},
                        {"rhs", f.rhs},
                        {"witness", f.witness}});
  return {{"system", r.system == System::PA1 ? "pa1" : "pa2"},
          {"rel", kind_name(r.kind)},
          {"policy", policy_name(r.policy)},
          {"instances", r.instances},
          {"skipped", r.skipped},
          {"failures", failures}};
}

json completeness_json(const CompletenessReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"cross_class", v.cross_class},
                          {"term1", v.term1},
                          {"term2", v.term2},
                          {"nf1", v.nf1},
                          {"nf2", v.nf2},
                          {"gamma_caveat", v.gamma_caveat}});
  return {{"system", r.system == System::PA1 ? "pa1" : "pa2"},
          {"rel", kind_name(r.kind)},
          {"policy", policy_name(r.policy)},
          {"terms", r.terms},
          {"classes", r.classes},
          {"hard_violations", r.hard_violations()},
          {"violations", violations}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"process algebra workbench: SOS execution, truly concurrent "
               "equivalence checking, axiom-oriented normalization"};
  app.require_subcommand(1);

  std::string term_text, term2_text, system_s = "pa1", rel_s = "s";
  std::string config_path, policy_s, alphabet_s = "a,b", dedup_s = "none";
  bool want_json = false, want_dot = false, want_trace = false;
  bool want_count = false;
  int size = 3, jobs = 1;
  std::size_t state_cap = 1000000, rewrite_cap = 1000000;
  int pomset_budget = 12;

  auto add_common = [&](CLI::App* c, bool needs_config) {
    c->add_option("--system", system_s, "pa1 or pa2")
        ->check(CLI::IsMember({"pa1", "pa2", "PA1", "PA2"}));
    auto* opt = c->add_option("--config", config_path, "semantics config file");
    if (needs_config) opt->required();
    c->add_option("--policy", policy_s,
                  "override the config's communication policy")
        ->check(CLI::IsMember({"optional", "forced"}));
    c->add_flag("--json", want_json, "machine-readable output");
  };

  auto* cparse = app.add_subcommand("parse", "parse a term and print it back");
  cparse->add_option("term", term_text)->required();
  add_common(cparse, false);

  auto* clts = app.add_subcommand("lts", "build the step-labeled LTS");
  clts->add_option("term", term_text)->required();
  add_common(clts, true);
  clts->add_flag("--dot", want_dot, "graphviz output");
  clts->add_option("--state-cap", state_cap, "state budget");

  auto* cpom = app.add_subcommand("pomsets", "pomset transitions of a term");
  cpom->add_option("term", term_text)->required();
  add_common(cpom, true);
  cpom->add_option("--budget", pomset_budget, "max occurrences per pomset");

  auto* ceq = app.add_subcommand("equiv", "decide a behavioral equivalence");
  ceq->add_option("term1", term_text)->required();
  ceq->add_option("term2", term2_text)->required();
  add_common(ceq, true);
  ceq->add_option("--rel", rel_s, "s, p, hp or hhp")->required();

  auto* cnorm = app.add_subcommand("normalize", "rewrite to normal form");
  cnorm->add_option("term", term_text)->required();
  add_common(cnorm, true);
  cnorm->add_flag("--trace", want_trace, "print the rule applications");
  cnorm->add_option("--rewrite-cap", rewrite_cap, "rewrite step budget");

  auto* csound = app.add_subcommand("soundness", "axiom soundness sweep");
  add_common(csound, true);
  csound->add_option("--rel", rel_s)->required();
  csound->add_option("--size", size, "term size bound for substitutions");
  csound->add_option("--jobs", jobs, "parallel workers");
  csound->add_option("--alphabet", alphabet_s, "atoms for closed terms");

  auto* ccomp = app.add_subcommand("completeness", "normal-form completeness "
                                                   "sweep");
  add_common(ccomp, true);
  ccomp->add_option("--rel", rel_s)->required();
  ccomp->add_option("--size", size, "term size bound");
  ccomp->add_option("--jobs", jobs, "parallel workers");
  ccomp->add_option("--alphabet", alphabet_s, "atoms for enumerated terms");

  auto* chhp = app.add_subcommand("hhp-witness",
                                  "search P-axiom instances for an "
                                  "hp-but-not-hhp witness");
  add_common(chhp, true);
  chhp->add_option("--size", size, "term size bound for substitutions");
  chhp->add_option("--jobs", jobs, "parallel workers");
  chhp->add_option("--alphabet", alphabet_s, "atoms for closed terms");

  auto* cenum = app.add_subcommand("enumerate", "closed terms, one per line");
  cenum->add_option("--system", system_s)
      ->check(CLI::IsMember({"pa1", "pa2", "PA1", "PA2"}));
  cenum->add_option("--size", size, "node-count bound")->required();
  cenum->add_option("--alphabet", alphabet_s, "comma-separated atoms");
  cenum->add_option("--dedup", dedup_s)->check(CLI::IsMember({"none", "ac"}));
  cenum->add_flag("--count", want_count, "print only the count");

  CLI11_PARSE(app, argc, argv);

  try {
    System sys = parse_system(system_s);

    if (cparse->parsed()) {
      const SemanticsConfig* cfgp = nullptr;
      SemanticsConfig cfg;
      if (!config_path.empty()) {
        cfg = load_cfg(config_path, policy_s);
        cfgp = &cfg;
      }
      TermPtr t = parse_term(term_text, sys, cfgp);
      if (want_json)
        std::cout << json{{"term", format_term(t)},
                          {"size", term_size(t)},
                          {"leaves", leaf_count(t)}}
                         .dump()
                  << "\n";
      else
        std::cout << format_term(t) << "\n";
      return 0;
    }

    if (cenum->parsed()) {
      EnumSpec spec;
      spec.system = sys;
      spec.max_size = size;
      spec.dedup = dedup_s == "ac" ? Dedup::ModuloAC : Dedup::None;
      for (size_t pos = 0, next; pos < alphabet_s.size(); pos = next + 1) {
        next = alphabet_s.find(',', pos);
        if (next == std::string::npos) next = alphabet_s.size();
        if (next > pos) spec.alphabet.push_back(alphabet_s.substr(pos, next - pos));
      }
      if (want_count) {
        std::cout << count_terms(spec) << "\n";
        return 0;
      }
      for (const auto& t : enum_terms(spec)) std::cout << format_term(t) << "\n";
      return 0;
    }

    SemanticsConfig cfg = load_cfg(config_path, policy_s);

    if (clts->parsed()) {
      TermPtr t = parse_term(term_text, sys, &cfg);
      Lts lts = build_lts(t, sys, cfg, state_cap);
      if (want_dot)
        std::cout << lts_to_dot(lts);
      else if (want_json)
        std::cout << lts_to_json(lts) << "\n";
      else {
        std::cout << "states: " << lts.states.size() << "\n";
        for (size_t i = 0; i < lts.states.size(); ++i)
          std::cout << "  " << i << ": " << lts.states[i]
                    << (static_cast<int>(i) == lts.initial ? "  (initial)" : "")
                    << "\n";
        std::cout << "edges: " << lts.edges.size() << "\n";
        for (const auto& e : lts.edges)
          std::cout << "  " << e.from << " -" << join_step(e.label) << "-> "
                    << e.to << "\n";
        if (!lts.stuck.empty()) {
          std::cout << "stuck:";
          for (int s : lts.stuck) std::cout << " " << s;
          std::cout << "\n";
        }
      }
      return 0;
    }

    if (cpom->parsed()) {
      TermPtr t = parse_term(term_text, sys, &cfg);
      auto pts = enumerate_pomset_transitions(t, sys, cfg, pomset_budget);
      if (want_json) {
        json arr = json::array();
        for (const auto& pt : pts) {
          json order = json::array();
          for (size_t i = 0; i < pt.pomset.labels.size(); ++i)
            for (size_t j = 0; j < pt.pomset.labels.size(); ++j)
              if (pt.pomset.order[i][j]) order.push_back({i, j});
          arr.push_back({{"labels", pt.pomset.labels},
                         {"order", order},
                         {"code", pt.code},
                         {"end_state", pt.end_state}});
        }
        std::cout << json{{"term", format_term(t)}, {"pomsets", arr}}.dump()
                  << "\n";
      } else {
        for (const auto& pt : pts)
          std::cout << pt.code << "  ->  " << pt.end_state << "\n";
        std::cout << pts.size() << " pomset transitions\n";
      }
      return 0;
    }

    if (ceq->parsed()) {
      EquivalenceKind rel = parse_rel(rel_s);
      TermPtr t1 = parse_term(term_text, sys, &cfg);
      TermPtr t2 = parse_term(term2_text, sys, &cfg);
      bool eq = equivalent(rel, t1, t2, sys, cfg);
      std::string witness;
      if (!eq) {
        if (auto w = step_distinguisher(t1, t2, sys, cfg)) {
          for (const auto& m : *w) {
            if (!witness.empty()) witness += "; ";
            witness += m;
          }
        } else {
          witness = "step-equivalent; distinguished at the " +
                    std::string(kind_name(rel)) + " level";
        }
      }
      if (want_json)
        std::cout << json{{"term1", format_term(t1)},
                          {"term2", format_term(t2)},
                          {"rel", kind_name(rel)},
                          {"equivalent", eq},
                          {"witness", witness}}
                         .dump()
                  << "\n";
      else if (eq)
        std::cout << "equivalent (~" << kind_name(rel) << ")\n";
      else
        std::cout << "NOT equivalent (~" << kind_name(rel) << "): " << witness
                  << "\n";
      return eq ? 0 : 1;
    }

    if (cnorm->parsed()) {
      TermPtr t = parse_term(term_text, sys, &cfg);
      RewriteReport rep = normalize(t, sys, cfg, rewrite_cap);
      if (want_json) {
        json trace = json::array();
        for (const auto& st : rep.rule_trace)
          trace.push_back({{"rule", st.rule}, {"path", st.path}});
        json out{{"input", format_term(t)},
                 {"nf", nf_display(rep.nf)},
                 {"nf_code", nf_code(rep.nf)}};
        if (want_trace) out["trace"] = trace;
        std::cout << out.dump() << "\n";
      } else {
        std::cout << nf_display(rep.nf) << "\n";
        if (want_trace)
          for (const auto& st : rep.rule_trace)
            std::cout << "  " << st.rule << " @ " << (st.path.empty() ? "." : st.path)
                      << "\n";
      }
      return 0;
    }

    HarnessOptions opts;
    opts.size_bound = size;
    opts.jobs = jobs;
    opts.state_cap = state_cap;
    opts.term_alphabet.clear();
    for (size_t pos = 0, next; pos < alphabet_s.size(); pos = next + 1) {
      next = alphabet_s.find(',', pos);
      if (next == std::string::npos) next = alphabet_s.size();
      if (next > pos)
        opts.term_alphabet.push_back(alphabet_s.substr(pos, next - pos));
    }

    if (csound->parsed()) {
      auto rep = check_soundness(sys, parse_rel(rel_s), cfg, opts);
      if (want_json)
        std::cout << soundness_json(rep).dump() << "\n";
      else {
        std::cout << rep.instances << " instances (" << rep.skipped
                  << " skipped), " << rep.failures.size() << " failures\n";
        for (const auto& f : rep.failures)
          std::cout << "  " << f.schema << " [" << f.substitution
                    << (f.events.empty() ? "" : "; " + f.events) << "]: "
                    << f.lhs << "  vs  " << f.rhs << "  -- " << f.witness
                    << "\n";
      }
      return rep.failures.empty() ? 0 : 1;
    }

    if (ccomp->parsed()) {
      auto rep = check_completeness(sys, parse_rel(rel_s), cfg, opts);
      if (want_json)
        std::cout << completeness_json(rep).dump() << "\n";
      else {
        std::cout << rep.terms << " terms, " << rep.classes << " classes, "
                  << rep.hard_violations() << " violations, "
                  << rep.violations.size() - rep.hard_violations()
                  << " gamma-caveat pairs\n";
        for (const auto& v : rep.violations)
          std::cout << "  " << (v.gamma_caveat ? "[caveat] " : "")
                    << (v.cross_class ? "cross-class NF collision: "
                                      : "intra-class NF split: ")
                    << v.term1 << " -> " << v.nf1 << "  vs  " << v.term2
                    << " -> " << v.nf2 << "\n";
      }
      return rep.hard_violations() == 0 ? 0 : 1;
    }

    if (chhp->parsed()) {
      auto rep = find_hhp_witness(cfg, opts);
      if (want_json) {
        json out{{"policy", policy_name(rep.policy)},
                 {"instances_searched", rep.instances_searched},
                 {"witness_found", rep.witness.has_value()}};
        if (rep.witness)
          out["witness"] = {{"schema", rep.witness->schema},
                            {"substitution", rep.witness->substitution},
                            {"events", rep.witness->events},
                            {"lhs", rep.witness->lhs},
                            {"rhs", rep.witness->rhs},
                            {"note", rep.witness->note}};
        std::cout << out.dump() << "\n";
      } else if (rep.witness) {
        std::cout << "WITNESS: " << rep.witness->schema << " ["
                  << rep.witness->substitution
                  << (rep.witness->events.empty()
                          ? ""
                          : "; " + rep.witness->events)
                  << "]: " << rep.witness->lhs << "  vs  " << rep.witness->rhs
                  << "\n  " << rep.witness->note << "\n";
      } else {
        std::cout << "no witness within bound (" << rep.instances_searched
                  << " instances searched)\n";
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
