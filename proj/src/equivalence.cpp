#include "pa/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace pa {

std::string kind_name(EquivalenceKind k) {
  switch (k) {
    case EquivalenceKind::Step: return "s";
    case EquivalenceKind::Pomset: return "p";
    case EquivalenceKind::Hp: return "hp";
    case EquivalenceKind::Hhp: return "hhp";
  }
  return "?";
}

std::optional<EquivalenceKind> kind_from_name(const std::string& s) {
  if (s == "s" || s == "step") return EquivalenceKind::Step;
  if (s == "p" || s == "pomset") return EquivalenceKind::Pomset;
  if (s == "hp") return EquivalenceKind::Hp;
  if (s == "hhp") return EquivalenceKind::Hhp;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Step bisimulation: memoized pair recursion on the two (acyclic) LTSs.

namespace {

struct LtsView {
  Lts lts;
  // per state: sorted (label code, target)
  std::vector<std::vector<std::pair<std::string, int>>> out;

  LtsView(const TermPtr& t, System sys, const SemanticsConfig& cfg)
      : lts(build_lts(t, sys, cfg)) {
    out.resize(lts.states.size());
    for (const auto& e : lts.edges)
      out[static_cast<size_t>(e.from)].push_back({step_code(e.label), e.to});
    for (auto& v : out) std::sort(v.begin(), v.end());
  }
};

struct StepBisim {
  LtsView a, b;
  std::map<std::pair<int, int>, bool> memo;

  StepBisim(const TermPtr& t1, const TermPtr& t2, System sys,
            const SemanticsConfig& cfg)
      : a(t1, sys, cfg), b(t2, sys, cfg) {}

  bool related(int u, int v) {
    auto key = std::make_pair(u, v);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = false;  // placeholder; graph is acyclic, never consulted
    bool ok = a.lts.is_term(u) == b.lts.is_term(v);
    if (ok) {
      for (const auto& [lab, u2] : a.out[static_cast<size_t>(u)]) {
        bool matched = false;
        for (const auto& [lab2, v2] : b.out[static_cast<size_t>(v)])
          if (lab2 == lab && related(u2, v2)) {
            matched = true;
            break;
          }
        if (!matched) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      for (const auto& [lab, v2] : b.out[static_cast<size_t>(v)]) {
        bool matched = false;
        for (const auto& [lab2, u2] : a.out[static_cast<size_t>(u)])
          if (lab2 == lab && related(u2, v2)) {
            matched = true;
            break;
          }
        if (!matched) {
          ok = false;
          break;
        }
      }
    }
    memo[key] = ok;
    return ok;
  }
};

}  // namespace

bool step_bisim(const TermPtr& t1, const TermPtr& t2, System sys,
                const SemanticsConfig& cfg) {
  StepBisim g(t1, t2, sys, cfg);
  return g.related(g.a.lts.initial, g.b.lts.initial);
}

std::optional<std::vector<std::string>> step_distinguisher(
    const TermPtr& t1, const TermPtr& t2, System sys,
    const SemanticsConfig& cfg) {
  StepBisim g(t1, t2, sys, cfg);
  if (g.related(g.a.lts.initial, g.b.lts.initial)) return std::nullopt;

  std::function<std::vector<std::string>(int, int)> trail = [&](int u, int v) {
    std::vector<std::string> w;
    if (g.a.lts.is_term(u) != g.b.lts.is_term(v)) {
      w.push_back(g.a.lts.is_term(u) ? "left terminates" : "right terminates");
      return w;
    }
    auto probe = [&](const LtsView& x, const LtsView& y, int su, int sv,
                     bool left) -> std::optional<std::vector<std::string>> {
      const char* side = left ? "left" : "right";
      for (const auto& [lab, u2] : x.out[static_cast<size_t>(su)]) {
        bool any_label = false, any_related = false;
        int partner = -1;
        for (const auto& [lab2, v2] : y.out[static_cast<size_t>(sv)])
          if (lab2 == lab) {
            any_label = true;
            bool rel = left ? g.related(u2, v2) : g.related(v2, u2);
            if (rel)
              any_related = true;
            else
              partner = v2;
          }
        if (!any_label)
          return std::vector<std::string>{std::string(side) + " fires {" + lab + "}"};
        if (!any_related) {
          std::vector<std::string> rest =
              left ? trail(u2, partner) : trail(partner, u2);
          rest.insert(rest.begin(), std::string(side) + " fires {" + lab + "}");
          return rest;
        }
      }
      return std::nullopt;
    };
    if (auto r = probe(g.a, g.b, u, v, true)) return *r;
    if (auto r = probe(g.b, g.a, v, u, false)) return *r;
    return w;
  };
  return trail(g.a.lts.initial, g.b.lts.initial);
}

// ---------------------------------------------------------------------------
// Step fingerprint (independent oracle)

namespace {

std::string fp_state(const LtsView& v, int s, std::map<int, std::string>& memo) {
  auto it = memo.find(s);
  if (it != memo.end()) return it->second;
  std::string out;
  if (v.lts.is_term(s)) {
    out = "T";
  } else {
    std::vector<std::string> kids;
    for (const auto& [lab, to] : v.out[static_cast<size_t>(s)])
      kids.push_back(lab + "->" + fp_state(v, to, memo));
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    out = "[";
    for (const auto& k : kids) out += k + ";";
    out += "]";
  }
  memo[s] = out;
  return out;
}

}  // namespace

std::string step_fingerprint(const TermPtr& t, System sys,
                             const SemanticsConfig& cfg) {
  LtsView v(t, sys, cfg);
  std::map<int, std::string> memo;
  return fp_state(v, v.lts.initial, memo);
}

// ---------------------------------------------------------------------------
// Pomset bisimulation

namespace {

struct PomsetBisim {
  LtsView a, b;
  System sys;
  const SemanticsConfig& cfg;
  std::map<std::string, int> aindex, bindex;
  std::vector<std::optional<std::set<std::pair<std::string, std::string>>>> pa_, pb_;
  std::map<std::pair<int, int>, bool> memo;

  PomsetBisim(const TermPtr& t1, const TermPtr& t2, System s,
              const SemanticsConfig& c)
      : a(t1, s, c), b(t2, s, c), sys(s), cfg(c) {
    for (size_t i = 0; i < a.lts.states.size(); ++i) aindex[a.lts.states[i]] = static_cast<int>(i);
    for (size_t i = 0; i < b.lts.states.size(); ++i) bindex[b.lts.states[i]] = static_cast<int>(i);
    pa_.resize(a.lts.states.size());
    pb_.resize(b.lts.states.size());
  }

  const std::set<std::pair<std::string, std::string>>& ptr_of(bool left, int s) {
    auto& slot = left ? pa_[static_cast<size_t>(s)] : pb_[static_cast<size_t>(s)];
    if (!slot) {
      const auto& lts = left ? a.lts : b.lts;
      TermPtr st = lts.state_terms[static_cast<size_t>(s)];
      slot = st ? pomset_transitions(st, sys, cfg, 16)
                : std::set<std::pair<std::string, std::string>>{};
    }
    return *slot;
  }

  bool related(int u, int v) {
    auto key = std::make_pair(u, v);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = false;
    bool ok = a.lts.is_term(u) == b.lts.is_term(v);
    if (ok) ok = match_all(true, u, v) && match_all(false, v, u);
    memo[key] = ok;
    return ok;
  }

  bool match_all(bool left_first, int u, int v) {
    const auto& pu = ptr_of(left_first, u);
    const auto& pv = ptr_of(!left_first, v);
    for (const auto& [code, end_u] : pu) {
      bool matched = false;
      for (const auto& [code2, end_v] : pv) {
        if (code2 != code) continue;
        int su = (left_first ? aindex : bindex).at(end_u);
        int sv = (left_first ? bindex : aindex).at(end_v);
        if (left_first ? related(su, sv) : related(sv, su)) {
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  }
};

}  // namespace

bool pomset_bisim(const TermPtr& t1, const TermPtr& t2, System sys,
                  const SemanticsConfig& cfg) {
  PomsetBisim g(t1, t2, sys, cfg);
  return g.related(g.a.lts.initial, g.b.lts.initial);
}

// ---------------------------------------------------------------------------
// hp- and hhp-bisimulation: games on posetal triples over run markings.

namespace {

struct GamePos {
  std::vector<Event> ev1, ev2;  // aligned matched pairs
  std::vector<bool> f1, f2;     // fired leaves per side
};

std::string pos_key(const GamePos& p) {
  std::vector<std::string> pairs;
  for (size_t i = 0; i < p.ev1.size(); ++i) {
    std::string s = p.ev1[i].label + "(";
    for (int l : p.ev1[i].leaves) s += std::to_string(l) + ",";
    s += "~";
    for (int l : p.ev2[i].leaves) s += std::to_string(l) + ",";
    s += ")";
    pairs.push_back(s);
  }
  std::sort(pairs.begin(), pairs.end());
  std::string key;
  for (const auto& s : pairs) key += s + "|";
  return key;
}

struct Game {
  RootCtx c1, c2;
  System sys;
  const SemanticsConfig& cfg;
  std::size_t position_cap;

  Game(const TermPtr& t1, const TermPtr& t2, System s, const SemanticsConfig& c,
       std::size_t cap = 2000000)
      : c1(t1), c2(t2), sys(s), cfg(c), position_cap(cap) {}

  GamePos initial() const {
    GamePos p;
    p.f1.assign(static_cast<size_t>(c1.nleaves), false);
    p.f2.assign(static_cast<size_t>(c2.nleaves), false);
    return p;
  }

  // All label-preserving bijections between two equal-label-multiset steps,
  // as index maps s1[i] -> s2[bij[i]].
  static std::vector<std::vector<int>> bijections(const StepEvents& s1,
                                                  const StepEvents& s2) {
    std::vector<std::vector<int>> out;
    size_t n = s1.size();
    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == n) {
        out.push_back(map);
        return;
      }
      for (size_t j = 0; j < n; ++j) {
        if (used[j] || s2[j].label != s1[i].label) continue;
        used[j] = true;
        map[i] = static_cast<int>(j);
        rec(i + 1);
        used[j] = false;
      }
    };
    rec(0);
    return out;
  }

  // Check that extending the matched history by (s1, s2 under bij) keeps
  // the bijection an order isomorphism; returns the extended position.
  std::optional<GamePos> extend(const GamePos& p, const StepEvents& s1,
                                const StepEvents& s2,
                                const std::vector<int>& bij) const {
    GamePos q = p;
    for (size_t i = 0; i < s1.size(); ++i) {
      q.ev1.push_back(s1[i]);
      q.ev2.push_back(s2[static_cast<size_t>(bij[i])]);
    }
    for (const auto& e : s1)
      for (int l : e.leaves) q.f1[static_cast<size_t>(l)] = true;
    for (const auto& e : s2)
      for (int l : e.leaves) q.f2[static_cast<size_t>(l)] = true;
    auto o1 = causal_order(c1, q.ev1);
    auto o2 = causal_order(c2, q.ev2);
    size_t n = q.ev1.size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (o1[i][j] != o2[i][j]) return std::nullopt;
    return q;
  }

  bool sides_consistent(const GamePos& p) const {
    return marking_done(c1, p.f1) == marking_done(c2, p.f2);
  }
};

// -- hp: memoized recursion (the forward game graph is a DAG).

struct HpGame : Game {
  using Game::Game;
  std::map<std::string, bool> memo;

  bool ok(const GamePos& p) {
    std::string key = pos_key(p);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    memo[key] = false;
    bool res = sides_consistent(p) && defend(p, true) && defend(p, false);
    memo[key] = res;
    return res;
  }

  bool defend(const GamePos& p, bool attacker_left) {
    const RootCtx& ca = attacker_left ? c1 : c2;
    const RootCtx& cd = attacker_left ? c2 : c1;
    const auto& fa = attacker_left ? p.f1 : p.f2;
    const auto& fd = attacker_left ? p.f2 : p.f1;
    auto amoves = transitions(ca, fa, sys, cfg);
    if (amoves.empty()) return true;
    auto dmoves = transitions(cd, fd, sys, cfg);
    for (const auto& ma : amoves) {
      Step la = labels_of(ma);
      bool answered = false;
      for (const auto& md : dmoves) {
        if (labels_of(md) != la) continue;
        const StepEvents& s1 = attacker_left ? ma : md;
        const StepEvents& s2 = attacker_left ? md : ma;
        for (const auto& bij : bijections(s1, s2)) {
          auto q = extend(p, s1, s2, bij);
          if (q && ok(*q)) {
            answered = true;
            break;
          }
        }
        if (answered) break;
      }
      if (!answered) return false;
    }
    return true;
  }
};

// -- hhp: greatest fixpoint over the closure of positions under forward
// extension and backtracking of matched maximal pairs.

struct HhpGame : Game {
  using Game::Game;

  struct Node {
    GamePos pos;
    bool flags_ok = false;
    std::vector<std::vector<int>> fwd1, fwd2;  // per attacker move: answers
    std::vector<int> back;                     // all must survive
  };

  bool run() {
    std::map<std::string, int> index;
    std::vector<Node> nodes;
    std::deque<int> work;

    std::function<int(const GamePos&)> intern = [&](const GamePos& p) {
      std::string key = pos_key(p);
      auto it = index.find(key);
      if (it != index.end()) return it->second;
      if (nodes.size() >= position_cap)
        throw BudgetError("hhp position budget exceeded");
      int id = static_cast<int>(nodes.size());
      index[key] = id;
      nodes.push_back(Node{p, sides_consistent(p), {}, {}, {}});
      work.push_back(id);
      return id;
    };

    int root = intern(initial());

    while (!work.empty()) {
      int id = work.front();
      work.pop_front();
      GamePos p = nodes[static_cast<size_t>(id)].pos;

      auto m1 = transitions(c1, p.f1, sys, cfg);
      auto m2 = transitions(c2, p.f2, sys, cfg);
      std::vector<std::vector<int>> fwd1, fwd2;
      for (const auto& ma : m1) {
        std::vector<int> answers;
        Step la = labels_of(ma);
        for (const auto& md : m2) {
          if (labels_of(md) != la) continue;
          for (const auto& bij : bijections(ma, md))
            if (auto q = extend(p, ma, md, bij)) answers.push_back(intern(*q));
        }
        fwd1.push_back(std::move(answers));
      }
      for (const auto& ma : m2) {
        std::vector<int> answers;
        Step la = labels_of(ma);
        for (const auto& md : m1) {
          if (labels_of(md) != la) continue;
          for (const auto& bij : bijections(md, ma))
            if (auto q = extend(p, md, ma, bij)) answers.push_back(intern(*q));
        }
        fwd2.push_back(std::move(answers));
      }

      // Backtracking: drop a matched pair that is maximal on both sides.
      std::vector<int> back;
      auto o1 = causal_order(c1, p.ev1);
      auto o2 = causal_order(c2, p.ev2);
      for (size_t k = 0; k < p.ev1.size(); ++k) {
        bool max1 = true, max2 = true;
        for (size_t j = 0; j < p.ev1.size(); ++j) {
          if (o1[k][j]) max1 = false;
          if (o2[k][j]) max2 = false;
        }
        if (!max1 || !max2) continue;
        GamePos q = p;
        for (int l : q.ev1[k].leaves) q.f1[static_cast<size_t>(l)] = false;
        for (int l : q.ev2[k].leaves) q.f2[static_cast<size_t>(l)] = false;
        q.ev1.erase(q.ev1.begin() + static_cast<long>(k));
        q.ev2.erase(q.ev2.begin() + static_cast<long>(k));
        back.push_back(intern(q));
      }

      nodes[static_cast<size_t>(id)].fwd1 = std::move(fwd1);
      nodes[static_cast<size_t>(id)].fwd2 = std::move(fwd2);
      nodes[static_cast<size_t>(id)].back = std::move(back);
    }

    // Iterated deletion.
    std::vector<bool> alive(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) alive[i] = nodes[i].flags_ok;
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < nodes.size(); ++i) {
        if (!alive[i]) continue;
        bool ok = true;
        for (const auto& answers : nodes[i].fwd1) {
          bool any = false;
          for (int a : answers) any = any || alive[static_cast<size_t>(a)];
          if (!any) {
            ok = false;
            break;
          }
        }
        if (ok)
          for (const auto& answers : nodes[i].fwd2) {
            bool any = false;
            for (int a : answers) any = any || alive[static_cast<size_t>(a)];
            if (!any) {
              ok = false;
              break;
            }
          }
        if (ok)
          for (int b : nodes[i].back)
            if (!alive[static_cast<size_t>(b)]) {
              ok = false;
              break;
            }
        if (!ok) {
          alive[i] = false;
          changed = true;
        }
      }
    }
    return alive[static_cast<size_t>(root)];
  }
};

}  // namespace

bool hp_bisim(const TermPtr& t1, const TermPtr& t2, System sys,
              const SemanticsConfig& cfg) {
  HpGame g(t1, t2, sys, cfg);
  return g.ok(g.initial());
}

bool hhp_bisim(const TermPtr& t1, const TermPtr& t2, System sys,
               const SemanticsConfig& cfg) {
  HhpGame g(t1, t2, sys, cfg);
  return g.run();
}

bool equivalent(EquivalenceKind kind, const TermPtr& t1, const TermPtr& t2,
                System sys, const SemanticsConfig& cfg) {
  switch (kind) {
    case EquivalenceKind::Step: return step_bisim(t1, t2, sys, cfg);
    case EquivalenceKind::Pomset: return pomset_bisim(t1, t2, sys, cfg);
    case EquivalenceKind::Hp: return hp_bisim(t1, t2, sys, cfg);
    case EquivalenceKind::Hhp: return hhp_bisim(t1, t2, sys, cfg);
  }
  return false;
}

}  // namespace pa
