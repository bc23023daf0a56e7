#include "pa/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

namespace pa {

namespace {

std::vector<Op> binary_ops(System system) {
  if (system == System::PA1) return {Op::Plus, Op::Seq, Op::Par};
  return {Op::Plus, Op::Seq, Op::Par, Op::LMerge, Op::CMerge};
}

// terms_by_size[n] = every term with exactly n nodes, enumeration order:
// atoms in alphabet order, then ops in signature order, then left size
// ascending, then recursively.
std::vector<std::vector<TermPtr>> strata(const EnumSpec& spec) {
  if (spec.max_size < 1) throw std::invalid_argument("max_size must be >= 1");
  if (spec.alphabet.empty()) throw std::invalid_argument("empty alphabet");
  std::vector<std::vector<TermPtr>> by_size(
      static_cast<size_t>(spec.max_size) + 1);
  for (const auto& a : spec.alphabet) by_size[1].push_back(atom(a));
  auto ops = binary_ops(spec.system);
  for (int n = 2; n <= spec.max_size; ++n)
    for (Op op : ops)
      for (int ls = 1; ls <= n - 2; ++ls)
        for (const auto& l : by_size[static_cast<size_t>(ls)])
          for (const auto& r : by_size[static_cast<size_t>(n - 1 - ls)])
            by_size[static_cast<size_t>(n)].push_back(binop(op, l, r));
  return by_size;
}

}  // namespace

std::vector<TermPtr> enum_terms(const EnumSpec& spec) {
  auto by_size = strata(spec);
  std::vector<TermPtr> out;
  if (spec.dedup == Dedup::None) {
    for (const auto& bucket : by_size)
      out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
  }
  std::set<std::string> seen;
  for (const auto& bucket : by_size)
    for (const auto& t : bucket)
      if (seen.insert(format_term(ac_canonical(t))).second) out.push_back(t);
  return out;
}

std::uint64_t count_terms(const EnumSpec& spec) {
  if (spec.dedup == Dedup::ModuloAC)
    return static_cast<std::uint64_t>(enum_terms(spec).size());
  if (spec.max_size < 1) throw std::invalid_argument("max_size must be >= 1");
  if (spec.alphabet.empty()) throw std::invalid_argument("empty alphabet");
  std::vector<std::uint64_t> c(static_cast<size_t>(spec.max_size) + 1, 0);
  c[1] = spec.alphabet.size();
  std::uint64_t nops = binary_ops(spec.system).size();
  for (int n = 2; n <= spec.max_size; ++n)
    for (int ls = 1; ls <= n - 2; ++ls)
      c[static_cast<size_t>(n)] +=
          nops * c[static_cast<size_t>(ls)] * c[static_cast<size_t>(n - 1 - ls)];
  std::uint64_t total = 0;
  for (int n = 1; n <= spec.max_size; ++n) total += c[static_cast<size_t>(n)];
  return total;
}

TermPtr sample_term(const EnumSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // pick a size uniformly, then a uniform term of that size via the same
  // recurrence the enumerator uses
  std::vector<std::uint64_t> c(static_cast<size_t>(spec.max_size) + 1, 0);
  c[1] = spec.alphabet.size();
  auto ops = binary_ops(spec.system);
  for (int n = 2; n <= spec.max_size; ++n)
    for (int ls = 1; ls <= n - 2; ++ls)
      c[static_cast<size_t>(n)] += ops.size() * c[static_cast<size_t>(ls)] *
                                   c[static_cast<size_t>(n - 1 - ls)];
  std::vector<int> sizes;
  for (int n = 1; n <= spec.max_size; ++n)
    if (c[static_cast<size_t>(n)] > 0) sizes.push_back(n);
  int size = sizes[std::uniform_int_distribution<size_t>(0, sizes.size() - 1)(
      rng)];
  std::function<TermPtr(int)> gen = [&](int n) -> TermPtr {
    if (n == 1) {
      auto i = std::uniform_int_distribution<size_t>(
          0, spec.alphabet.size() - 1)(rng);
      return atom(spec.alphabet[i]);
    }
    // weight left-size choices by the number of completions
    std::vector<std::uint64_t> w;
    std::uint64_t total = 0;
    for (int ls = 1; ls <= n - 2; ++ls) {
      std::uint64_t v =
          c[static_cast<size_t>(ls)] * c[static_cast<size_t>(n - 1 - ls)];
      w.push_back(v);
      total += v;
    }
    std::uint64_t pick =
        std::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
    int ls = 1;
    for (size_t i = 0; i < w.size(); ++i) {
      if (pick < w[i]) {
        ls = static_cast<int>(i) + 1;
        break;
      }
      pick -= w[i];
    }
    Op op = ops[std::uniform_int_distribution<size_t>(0, ops.size() - 1)(rng)];
    return binop(op, gen(ls), gen(n - 1 - ls));
  };
  return gen(size);
}

}  // namespace pa
