#pragma once

#include <memory>
#include <string>
#include <vector>

namespace pa {

enum class System { PA1, PA2 };

// Term constructors. Zero is internal to the normalizer (the empty process
// written "0" in normal-form output); it never appears in parsed input.
enum class Op { Atom, Plus, Seq, Par, LMerge, CMerge, Zero };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  Op op;
  std::string label;  // Atom only
  TermPtr left, right;
};

TermPtr atom(std::string label);
TermPtr plus(TermPtr l, TermPtr r);
TermPtr seq(TermPtr l, TermPtr r);
TermPtr par(TermPtr l, TermPtr r);
TermPtr lmerge(TermPtr l, TermPtr r);
TermPtr cmerge(TermPtr l, TermPtr r);
TermPtr zero();

TermPtr binop(Op op, TermPtr l, TermPtr r);

bool structurally_equal(const TermPtr& a, const TermPtr& b);

/// Minimal-parenthesis rendering; parse(format(t)) == t structurally.
std::string format_term(const TermPtr& t);

/// True when t uses only PA1 constructors (+, ., ||).
bool is_pa1(const TermPtr& t);

/// AST node count (atoms = 1, binary nodes = 1 + both sides).
int term_size(const TermPtr& t);

/// Number of atom leaves.
int leaf_count(const TermPtr& t);

/// Canonicalize argument order of + and || (used by modulo-AC dedup).
TermPtr ac_canonical(const TermPtr& t);

}  // namespace pa
