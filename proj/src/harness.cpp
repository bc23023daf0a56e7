#include "pa/harness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "pa/enumerate.hpp"
#include "pa/semantics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pa {

namespace {

struct Instance {
  std::size_t schema;
  std::uint64_t combo;  // mixed-radix: evar digits (base |alphabet|), then
                        // var digits (base |terms|)
};

struct InstanceGrid {
  std::vector<AxiomSchema> schemas;
  std::vector<TermPtr> terms;
  std::vector<std::string> alphabet;
  std::vector<Instance> instances;

  void decode(const Instance& in, std::map<std::string, TermPtr>& subst,
              std::map<std::string, std::string>& events) const {
    const auto& sch = schemas[in.schema];
    std::uint64_t c = in.combo;
    for (const auto& e : sch.evars) {
      events[e] = alphabet[static_cast<size_t>(c % alphabet.size())];
      c /= alphabet.size();
    }
    for (const auto& v : sch.vars) {
      subst[v] = terms[static_cast<size_t>(c % terms.size())];
      c /= terms.size();
    }
  }

  static std::string subst_text(const AxiomSchema& sch,
                                const std::map<std::string, TermPtr>& subst) {
    std::string out;
    for (const auto& v : sch.vars) {
      if (!out.empty()) out += ", ";
      out += v + ":=" + format_term(subst.at(v));
    }
    return out;
  }

  static std::string events_text(
      const AxiomSchema& sch, const std::map<std::string, std::string>& ev) {
    std::string out;
    for (const auto& e : sch.evars) {
      if (!out.empty()) out += ", ";
      out += e + ":=" + ev.at(e);
    }
    return out;
  }
};

InstanceGrid make_grid(System system, const SemanticsConfig& cfg,
                       const HarnessOptions& opts,
                       const std::vector<std::string>& schema_filter = {}) {
  InstanceGrid g;
  g.alphabet = cfg.alphabet;
  for (auto& sch : axiom_schemas(system)) {
    if (!schema_filter.empty() &&
        std::find(schema_filter.begin(), schema_filter.end(), sch.name) ==
            schema_filter.end())
      continue;
    g.schemas.push_back(sch);
  }
  EnumSpec espec{system, opts.term_alphabet, opts.size_bound, Dedup::None};
  g.terms = enum_terms(espec);
  for (std::size_t si = 0; si < g.schemas.size(); ++si) {
    const auto& sch = g.schemas[si];
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < sch.evars.size(); ++i)
      total *= g.alphabet.size();
    for (std::size_t i = 0; i < sch.vars.size(); ++i) total *= g.terms.size();
    for (std::uint64_t c = 0; c < total; ++c)
      g.instances.push_back({si, c});
  }
  return g;
}

template <typename Body>
void parallel_instances(std::size_t n, int jobs, Body body) {
  if (jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace

SoundnessReport check_soundness(System system, EquivalenceKind kind,
                                const SemanticsConfig& cfg,
                                const HarnessOptions& opts) {
  SoundnessReport rep;
  rep.system = system;
  rep.kind = kind;
  rep.policy = cfg.policy;

  InstanceGrid grid = make_grid(system, cfg, opts);
  std::size_t n = grid.instances.size();
  std::vector<char> skipped(n, 0);
  std::vector<char> failed(n, 0);
  std::vector<std::string> errors(n);
  std::vector<SoundnessFailure> details(n);

  parallel_instances(n, opts.jobs, [&](std::size_t i) {
    try {
      std::map<std::string, TermPtr> subst;
      std::map<std::string, std::string> events;
      grid.decode(grid.instances[i], subst, events);
      const auto& sch = grid.schemas[grid.instances[i].schema];
      auto inst = instantiate(sch, subst, events, cfg);
      if (!inst) {
        skipped[i] = 1;
        return;
      }
      if (equivalent(kind, inst->first, inst->second, system, cfg)) return;
      failed[i] = 1;
      SoundnessFailure f;
      f.schema = sch.name;
      f.substitution = InstanceGrid::subst_text(sch, subst);
      f.events = InstanceGrid::events_text(sch, events);
      f.kind = kind;
      f.lhs = format_term(inst->first);
      f.rhs = format_term(inst->second);
      if (auto w = step_distinguisher(inst->first, inst->second, system, cfg)) {
        for (const auto& m : *w) {
          if (!f.witness.empty()) f.witness += "; ";
          f.witness += m;
        }
      } else {
        f.witness = "step-equivalent; distinguished at the " +
                    std::string(kind_name(kind)) + " level";
      }
      details[i] = std::move(f);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) throw BudgetError("instance " + std::to_string(i) +
                                              ": " + errors[i]);
  for (std::size_t i = 0; i < n; ++i) {
    if (skipped[i]) {
      ++rep.skipped;
      continue;
    }
    ++rep.instances;
    if (failed[i]) rep.failures.push_back(details[i]);
  }
  return rep;
}

CompletenessReport check_completeness(System system, EquivalenceKind kind,
                                      const SemanticsConfig& cfg,
                                      const HarnessOptions& opts) {
  CompletenessReport rep;
  rep.system = system;
  rep.kind = kind;
  rep.policy = cfg.policy;

  EnumSpec espec{system, opts.term_alphabet, opts.size_bound, Dedup::None};
  std::vector<TermPtr> terms = enum_terms(espec);
  rep.terms = terms.size();
  std::size_t n = terms.size();

  std::vector<std::string> fps(n), nfs(n), sats(n), errors(n);
  parallel_instances(n, opts.jobs, [&](std::size_t i) {
    try {
      fps[i] = step_fingerprint(terms[i], system, cfg);
      nfs[i] = nf_code(normalize(terms[i], system, cfg).nf);
      sats[i] = nf_code(saturated_nf(terms[i], system, cfg));
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) throw BudgetError("term " + format_term(terms[i]) +
                                              ": " + errors[i]);

  // Semantic classes: step classes are exactly the fingerprint buckets; the
  // finer games only ever refine them, so refine per bucket.
  std::map<std::string, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < n; ++i) buckets[fps[i]].push_back(i);

  std::vector<std::vector<std::size_t>> classes;
  for (auto& [fp, members] : buckets) {
    if (kind == EquivalenceKind::Step) {
      classes.push_back(members);
      continue;
    }
    std::vector<std::vector<std::size_t>> sub;
    for (std::size_t i : members) {
      bool placed = false;
      for (auto& cls : sub)
        if (equivalent(kind, terms[cls.front()], terms[i], system, cfg)) {
          cls.push_back(i);
          placed = true;
          break;
        }
      if (!placed) sub.push_back({i});
    }
    for (auto& cls : sub) classes.push_back(std::move(cls));
  }
  rep.classes = classes.size();

  // Type A: equivalent terms whose normal forms differ.
  for (const auto& cls : classes) {
    std::map<std::string, std::size_t> first_with_nf;
    for (std::size_t i : cls) first_with_nf.insert({nfs[i], i});
    if (first_with_nf.size() <= 1) continue;
    std::size_t rep0 = first_with_nf.begin()->second;
    for (auto it = std::next(first_with_nf.begin());
         it != first_with_nf.end(); ++it) {
      CompletenessViolation v;
      v.cross_class = false;
      v.term1 = format_term(terms[rep0]);
      v.term2 = format_term(terms[it->second]);
      v.nf1 = nfs[rep0];
      v.nf2 = nfs[it->second];
      v.gamma_caveat = sats[rep0] == sats[it->second];
      rep.violations.push_back(std::move(v));
    }
  }

  // Type B: inequivalent terms that share a normal form.
  std::map<std::string, std::size_t> nf_owner;  // nf -> first class index
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    std::set<std::string> class_nfs;
    for (std::size_t i : classes[ci]) class_nfs.insert(nfs[i]);
    for (const auto& nf : class_nfs) {
      auto [it, fresh] = nf_owner.insert({nf, ci});
      if (fresh) continue;
      if (it->second == ci) continue;
      std::size_t a = classes[it->second].front();
      // pick the member of ci actually carrying this nf
      std::size_t b = classes[ci].front();
      for (std::size_t i : classes[ci])
        if (nfs[i] == nf) {
          b = i;
          break;
        }
      for (std::size_t i : classes[it->second])
        if (nfs[i] == nf) {
          a = i;
          break;
        }
      CompletenessViolation v;
      v.cross_class = true;
      v.term1 = format_term(terms[a]);
      v.term2 = format_term(terms[b]);
      v.nf1 = nfs[a];
      v.nf2 = nfs[b];
      v.gamma_caveat = false;
      rep.violations.push_back(std::move(v));
    }
  }
  return rep;
}

HhpWitnessReport find_hhp_witness(const SemanticsConfig& cfg,
                                  const HarnessOptions& opts) {
  HhpWitnessReport rep;
  rep.policy = cfg.policy;

  InstanceGrid grid =
      make_grid(System::PA1, cfg, opts,
                {"P1", "P2", "P3", "P4", "P5", "P6", "P7"});
  std::size_t n = grid.instances.size();
  std::vector<char> skipped(n, 0), hit(n, 0);
  std::vector<std::string> errors(n);
  std::vector<HhpWitness> details(n);

  parallel_instances(n, opts.jobs, [&](std::size_t i) {
    try {
      std::map<std::string, TermPtr> subst;
      std::map<std::string, std::string> events;
      grid.decode(grid.instances[i], subst, events);
      const auto& sch = grid.schemas[grid.instances[i].schema];
      auto inst = instantiate(sch, subst, events, cfg);
      if (!inst) {
        skipped[i] = 1;
        return;
      }
      if (hhp_bisim(inst->first, inst->second, System::PA1, cfg)) return;
      if (!hp_bisim(inst->first, inst->second, System::PA1, cfg)) return;
      hit[i] = 1;
      HhpWitness w;
      w.schema = sch.name;
      w.substitution = InstanceGrid::subst_text(sch, subst);
      w.events = InstanceGrid::events_text(sch, events);
      w.lhs = format_term(inst->first);
      w.rhs = format_term(inst->second);
      w.note =
          "hp-equivalent, but some backtracking of a matched maximal pair "
          "cannot be mirrored";
      details[i] = std::move(w);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) throw BudgetError("instance " + std::to_string(i) +
                                              ": " + errors[i]);
  for (std::size_t i = 0; i < n; ++i) {
    if (skipped[i]) continue;
    ++rep.instances_searched;
    if (hit[i] && !rep.witness) rep.witness = details[i];
  }
  return rep;
}

}  // namespace pa
