#include "pa/semantics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace pa {

std::string step_code(const Step& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += "+";
    out += s[i];
  }
  return out;
}

Step labels_of(const StepEvents& se) {
  Step s;
  s.reserve(se.size());
  for (const auto& e : se) s.push_back(e.label);
  std::sort(s.begin(), s.end());
  return s;
}

namespace {

int count_leaves(const Term* t) {
  if (t->op == Op::Atom) return 1;
  if (t->op == Op::Zero) return 0;
  return count_leaves(t->left.get()) + count_leaves(t->right.get());
}

void index_leaves(const Term* t, int base, RootCtx& ctx) {
  if (t->op == Op::Atom) {
    ctx.leaf_label[static_cast<size_t>(base)] = t->label;
    return;
  }
  if (t->op == Op::Zero) return;
  int nl = count_leaves(t->left.get());
  index_leaves(t->left.get(), base, ctx);
  index_leaves(t->right.get(), base + nl, ctx);
  if (t->op == Op::Seq) {
    int nr = count_leaves(t->right.get());
    for (int l = base; l < base + nl; ++l)
      for (int r = base + nl; r < base + nl + nr; ++r)
        ctx.seq_prec[static_cast<size_t>(l)][static_cast<size_t>(r)] = true;
  }
}

}  // namespace

RootCtx::RootCtx(TermPtr t) : root(std::move(t)) {
  nleaves = count_leaves(root.get());
  leaf_label.resize(static_cast<size_t>(nleaves));
  seq_prec.assign(static_cast<size_t>(nleaves),
                  std::vector<bool>(static_cast<size_t>(nleaves), false));
  index_leaves(root.get(), 0, *this);
}

void Marking::fire(const StepEvents& se) {
  for (const auto& e : se) {
    events.push_back(e);
    for (int l : e.leaves) fired[static_cast<size_t>(l)] = true;
  }
}

void Marking::unfire(const Event& e) {
  for (auto it = events.begin(); it != events.end(); ++it)
    if (*it == e) {
      events.erase(it);
      break;
    }
  for (int l : e.leaves) fired[static_cast<size_t>(l)] = false;
}

namespace {

bool any_fired(const std::vector<bool>& fired, int base, int n) {
  for (int i = base; i < base + n; ++i)
    if (fired[static_cast<size_t>(i)]) return true;
  return false;
}

bool node_done(const Term* t, int base, const std::vector<bool>& fired) {
  switch (t->op) {
    case Op::Atom:
      return fired[static_cast<size_t>(base)];
    case Op::Zero:
      return false;  // stuck, never terminates
    case Op::Plus: {
      int nl = count_leaves(t->left.get());
      int nr = count_leaves(t->right.get());
      if (any_fired(fired, base, nl)) return node_done(t->left.get(), base, fired);
      if (any_fired(fired, base + nl, nr))
        return node_done(t->right.get(), base + nl, fired);
      return false;
    }
    default: {
      int nl = count_leaves(t->left.get());
      return node_done(t->left.get(), base, fired) &&
             node_done(t->right.get(), base + nl, fired);
    }
  }
}

Event merge_events(const Event& a, const Event& b, const std::string& label) {
  Event e;
  e.leaves = a.leaves;
  e.leaves.insert(e.leaves.end(), b.leaves.begin(), b.leaves.end());
  std::sort(e.leaves.begin(), e.leaves.end());
  e.label = label;
  return e;
}

// All partial matchings of communicable cross pairs between two component
// steps. optional = every matching (including empty), forced = maximal only.
void enum_matchings(const StepEvents& xs, const StepEvents& ys,
                    const SemanticsConfig& cfg,
                    std::vector<StepEvents>& out) {
  size_t nx = xs.size(), ny = ys.size();
  std::vector<int> match(nx, -1);
  std::vector<bool> used(ny, false);

  auto emit = [&]() {
    if (cfg.policy == Policy::Forced) {
      for (size_t i = 0; i < nx; ++i) {
        if (match[i] != -1) continue;
        for (size_t j = 0; j < ny; ++j)
          if (!used[j] && cfg.comm(xs[i].label, ys[j].label)) return;  // extendable
      }
    }
    StepEvents se;
    for (size_t i = 0; i < nx; ++i) {
      if (match[i] == -1) {
        se.push_back(xs[i]);
      } else {
        const auto& y = ys[static_cast<size_t>(match[i])];
        se.push_back(merge_events(xs[i], y, *cfg.comm(xs[i].label, y.label)));
      }
    }
    for (size_t j = 0; j < ny; ++j)
      if (!used[j]) se.push_back(ys[j]);
    std::sort(se.begin(), se.end());
    out.push_back(std::move(se));
  };

  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == nx) {
      emit();
      return;
    }
    rec(i + 1);  // leave xs[i] unmatched
    for (size_t j = 0; j < ny; ++j) {
      if (used[j]) continue;
      if (!cfg.comm(xs[i].label, ys[j].label)) continue;
      match[i] = static_cast<int>(j);
      used[j] = true;
      rec(i + 1);
      match[i] = -1;
      used[j] = false;
    }
  };
  rec(0);
}

std::vector<StepEvents> trans_node(const Term* t, int base,
                                   const std::vector<bool>& fired,
                                   System sys, const SemanticsConfig& cfg);

std::vector<StepEvents> trans_parallel(const Term* t, int base,
                                       const std::vector<bool>& fired,
                                       System sys, const SemanticsConfig& cfg) {
  int nl = count_leaves(t->left.get());
  bool dl = node_done(t->left.get(), base, fired);
  bool dr = node_done(t->right.get(), base + nl, fired);
  if (dl && dr) return {};
  if (dl) return trans_node(t->right.get(), base + nl, fired, sys, cfg);
  if (dr) return trans_node(t->left.get(), base, fired, sys, cfg);
  auto lx = trans_node(t->left.get(), base, fired, sys, cfg);
  auto ly = trans_node(t->right.get(), base + nl, fired, sys, cfg);
  std::vector<StepEvents> out;
  for (const auto& sx : lx)
    for (const auto& sy : ly) enum_matchings(sx, sy, cfg, out);
  return out;
}

std::vector<StepEvents> trans_node(const Term* t, int base,
                                   const std::vector<bool>& fired,
                                   System sys, const SemanticsConfig& cfg) {
  switch (t->op) {
    case Op::Zero:
      return {};
    case Op::Atom: {
      if (fired[static_cast<size_t>(base)]) return {};
      return {{Event{{base}, t->label}}};
    }
    case Op::Plus: {
      int nl = count_leaves(t->left.get());
      int nr = count_leaves(t->right.get());
      if (any_fired(fired, base, nl))
        return trans_node(t->left.get(), base, fired, sys, cfg);
      if (any_fired(fired, base + nl, nr))
        return trans_node(t->right.get(), base + nl, fired, sys, cfg);
      auto out = trans_node(t->left.get(), base, fired, sys, cfg);
      auto r = trans_node(t->right.get(), base + nl, fired, sys, cfg);
      out.insert(out.end(), r.begin(), r.end());
      return out;
    }
    case Op::Seq: {
      int nl = count_leaves(t->left.get());
      if (!node_done(t->left.get(), base, fired))
        return trans_node(t->left.get(), base, fired, sys, cfg);
      return trans_node(t->right.get(), base + nl, fired, sys, cfg);
    }
    case Op::Par:
      return trans_parallel(t, base, fired, sys, cfg);
    case Op::LMerge:
    case Op::CMerge: {
      int nl = count_leaves(t->left.get());
      int nr = count_leaves(t->right.get());
      // After the first step the residual continues as ||.
      if (any_fired(fired, base, nl + nr))
        return trans_parallel(t, base, fired, sys, cfg);
      auto lx = trans_node(t->left.get(), base, fired, sys, cfg);
      auto ly = trans_node(t->right.get(), base + nl, fired, sys, cfg);
      std::vector<StepEvents> out;
      for (const auto& sx : lx) {
        if (sx.size() != 1) continue;
        for (const auto& sy : ly) {
          if (sy.size() != 1) continue;
          if (t->op == Op::LMerge) {
            if (!cfg.leq(sx[0].label, sy[0].label)) continue;
            StepEvents se = {sx[0], sy[0]};
            std::sort(se.begin(), se.end());
            out.push_back(std::move(se));
          } else {
            auto g = cfg.comm(sx[0].label, sy[0].label);
            if (!g) continue;
            out.push_back({merge_events(sx[0], sy[0], *g)});
          }
        }
      }
      return out;
    }
  }
  return {};
}

TermPtr residual_node(const Term* t, int base, const std::vector<bool>& fired,
                      const TermPtr& self) {
  switch (t->op) {
    case Op::Zero:
      return self;
    case Op::Atom:
      return fired[static_cast<size_t>(base)] ? nullptr : self;
    case Op::Plus: {
      int nl = count_leaves(t->left.get());
      int nr = count_leaves(t->right.get());
      if (any_fired(fired, base, nl))
        return residual_node(t->left.get(), base, fired, t->left);
      if (any_fired(fired, base + nl, nr))
        return residual_node(t->right.get(), base + nl, fired, t->right);
      return self;
    }
    case Op::Seq: {
      int nl = count_leaves(t->left.get());
      if (node_done(t->left.get(), base, fired))
        return residual_node(t->right.get(), base + nl, fired, t->right);
      TermPtr l = residual_node(t->left.get(), base, fired, t->left);
      return seq(l, t->right);
    }
    case Op::Par:
    case Op::LMerge:
    case Op::CMerge: {
      int nl = count_leaves(t->left.get());
      int nr = count_leaves(t->right.get());
      if (!any_fired(fired, base, nl + nr)) return self;
      TermPtr l = node_done(t->left.get(), base, fired)
                      ? nullptr
                      : residual_node(t->left.get(), base, fired, t->left);
      TermPtr r = node_done(t->right.get(), base + nl, fired)
                      ? nullptr
                      : residual_node(t->right.get(), base + nl, fired, t->right);
      if (!l && !r) return nullptr;
      if (!l) return r;
      if (!r) return l;
      return par(l, r);  // |_ and | conclusions continue as ||
    }
  }
  return self;
}

}  // namespace

std::vector<StepEvents> transitions(const RootCtx& ctx,
                                    const std::vector<bool>& fired,
                                    System system, const SemanticsConfig& cfg) {
  if (node_done(ctx.root.get(), 0, fired)) return {};
  auto out = trans_node(ctx.root.get(), 0, fired, system, cfg);
  std::sort(out.begin(), out.end());
  return out;
}

TermPtr residual(const RootCtx& ctx, const std::vector<bool>& fired) {
  return residual_node(ctx.root.get(), 0, fired, ctx.root);
}

bool marking_done(const RootCtx& ctx, const std::vector<bool>& fired) {
  return node_done(ctx.root.get(), 0, fired);
}

std::set<Step> compose_steps(const Step& x, const Step& y,
                             const SemanticsConfig& cfg) {
  StepEvents xs, ys;
  int leaf = 0;
  for (const auto& l : x) xs.push_back(Event{{leaf++}, l});
  for (const auto& l : y) ys.push_back(Event{{leaf++}, l});
  std::vector<StepEvents> merged;
  enum_matchings(xs, ys, cfg, merged);
  std::set<Step> out;
  for (const auto& se : merged) out.insert(labels_of(se));
  return out;
}

std::vector<std::vector<bool>> causal_order(const RootCtx& ctx,
                                            const std::vector<Event>& events) {
  size_t n = events.size();
  std::vector<std::vector<bool>> ord(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int li : events[i].leaves) {
        for (int lj : events[j].leaves)
          if (ctx.seq_prec[static_cast<size_t>(li)][static_cast<size_t>(lj)]) {
            ord[i][j] = true;
            break;
          }
        if (ord[i][j]) break;
      }
    }
  for (size_t k = 0; k < n; ++k)  // transitive closure
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (ord[i][k] && ord[k][j]) ord[i][j] = true;
  return ord;
}

// ---------------------------------------------------------------------------
// LTS

Lts build_lts(const TermPtr& t, System system, const SemanticsConfig& cfg,
              std::size_t state_cap) {
  Lts lts;
  std::map<std::string, int> index;

  auto intern = [&](const TermPtr& term) {
    std::string key = term ? format_term(term) : "√";
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (lts.states.size() >= state_cap)
      throw BudgetError("state budget exceeded while building LTS");
    int id = static_cast<int>(lts.states.size());
    index[key] = id;
    lts.states.push_back(key);
    lts.state_terms.push_back(term);
    if (!term) lts.term_state = id;
    return id;
  };

  lts.initial = intern(t);
  std::deque<int> work{lts.initial};
  std::set<int> seen{lts.initial};
  std::set<std::tuple<int, std::string, int>> edge_seen;

  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    TermPtr state = lts.state_terms[static_cast<size_t>(id)];
    if (!state) continue;  // TERM
    RootCtx ctx(state);
    std::vector<bool> none(static_cast<size_t>(ctx.nleaves), false);
    auto moves = transitions(ctx, none, system, cfg);
    for (const auto& se : moves) {
      std::vector<bool> fired = none;
      for (const auto& e : se)
        for (int l : e.leaves) fired[static_cast<size_t>(l)] = true;
      TermPtr next = residual(ctx, fired);
      int to = intern(next);
      Step label = labels_of(se);
      if (edge_seen.insert({id, step_code(label), to}).second)
        lts.edges.push_back({id, label, to});
      if (seen.insert(to).second) work.push_back(to);
    }
  }

  for (size_t s = 0; s < lts.states.size(); ++s) {
    if (static_cast<int>(s) == lts.term_state) continue;
    bool has_edge = false;
    for (const auto& e : lts.edges) has_edge = has_edge || e.from == static_cast<int>(s);
    if (!has_edge) lts.stuck.push_back(static_cast<int>(s));
  }
  return lts;
}

std::string lts_to_dot(const Lts& lts) {
  std::ostringstream os;
  os << "digraph lts {\n  rankdir=LR;\n";
  for (size_t s = 0; s < lts.states.size(); ++s) {
    os << "  s" << s << " [label=\"" << lts.states[s] << "\"";
    if (static_cast<int>(s) == lts.term_state) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  init [shape=point];\n  init -> s" << lts.initial << ";\n";
  for (const auto& e : lts.edges)
    os << "  s" << e.from << " -> s" << e.to << " [label=\""
       << step_code(e.label) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string lts_to_json(const Lts& lts) {
  std::ostringstream os;
  os << "{\"states\":[";
  for (size_t s = 0; s < lts.states.size(); ++s) {
    if (s) os << ",";
    os << "\"" << lts.states[s] << "\"";
  }
  os << "],\"edges\":[";
  for (size_t i = 0; i < lts.edges.size(); ++i) {
    const auto& e = lts.edges[i];
    if (i) os << ",";
    os << "{\"from\":" << e.from << ",\"label\":[";
    for (size_t j = 0; j < e.label.size(); ++j) {
      if (j) os << ",";
      os << "\"" << e.label[j] << "\"";
    }
    os << "],\"to\":" << e.to << "}";
  }
  os << "],\"initial\":" << lts.initial << ",\"stuck\":[";
  for (size_t i = 0; i < lts.stuck.size(); ++i) {
    if (i) os << ",";
    os << lts.stuck[i];
  }
  os << "]}";
  return os.str();
}

// ---------------------------------------------------------------------------
// Pomsets

std::string canonical_pomset(const Pomset& p, int budget) {
  size_t n = p.labels.size();
  if (static_cast<int>(n) > budget)
    throw BudgetError("pomset canonicalization budget exceeded");
  if (n == 0) return "[]";

  // Lexicographically minimal placement code over all label-compatible
  // orderings; the per-position segment fixes the code greedily.
  std::vector<int> placed;
  std::vector<bool> used(n, false);
  std::string best;
  bool have_best = false;
  std::string cur;

  auto segment = [&](size_t cand) {
    std::string seg = "|" + p.labels[cand] + ":";
    for (int q : placed) {
      seg += p.order[static_cast<size_t>(q)][cand] ? '<' : '.';
      seg += p.order[cand][static_cast<size_t>(q)] ? '>' : '.';
    }
    return seg;
  };

  std::function<void()> rec = [&]() {
    if (placed.size() == n) {
      if (!have_best || cur < best) {
        best = cur;
        have_best = true;
      }
      return;
    }
    std::string min_seg;
    std::vector<size_t> ties;
    for (size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      std::string seg = segment(c);
      if (ties.empty() || seg < min_seg) {
        min_seg = seg;
        ties.assign(1, c);
      } else if (seg == min_seg) {
        ties.push_back(c);
      }
    }
    for (size_t c : ties) {
      used[c] = true;
      placed.push_back(static_cast<int>(c));
      size_t len = cur.size();
      cur += min_seg;
      rec();
      cur.resize(len);
      placed.pop_back();
      used[c] = false;
    }
  };
  rec();
  return best;
}

std::vector<PomsetTransition> enumerate_pomset_transitions(
    const TermPtr& t, System system, const SemanticsConfig& cfg,
    int occurrence_budget) {
  RootCtx ctx(t);
  Marking m(ctx);
  std::map<std::pair<std::string, std::string>, Pomset> found;

  std::function<void()> dfs = [&]() {
    auto moves = transitions(ctx, m.fired, system, cfg);
    for (const auto& se : moves) {
      m.fire(se);
      if (static_cast<int>(m.events.size()) > occurrence_budget)
        throw BudgetError("pomset occurrence budget exceeded");
      Pomset p;
      for (const auto& e : m.events) p.labels.push_back(e.label);
      p.order = causal_order(ctx, m.events);
      std::string code = canonical_pomset(p, occurrence_budget);
      TermPtr rest = residual(ctx, m.fired);
      std::string end = rest ? format_term(rest) : "√";
      found.emplace(std::make_pair(code, end), p);
      dfs();
      for (size_t i = 0; i < se.size(); ++i) m.unfire(se[se.size() - 1 - i]);
    }
  };
  dfs();

  std::vector<PomsetTransition> out;
  for (const auto& [key, pom] : found)
    out.push_back({pom, key.first, key.second});
  return out;
}

std::set<std::pair<std::string, std::string>> pomset_transitions(
    const TermPtr& t, System system, const SemanticsConfig& cfg,
    int occurrence_budget) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& pt :
       enumerate_pomset_transitions(t, system, cfg, occurrence_budget))
    out.insert({pt.code, pt.end_state});
  return out;
}

}  // namespace pa
