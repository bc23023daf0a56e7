#include "pa/term.hpp"

#include <algorithm>

namespace pa {

TermPtr atom(std::string label) {
  auto t = std::make_shared<Term>();
  t->op = Op::Atom;
  t->label = std::move(label);
  return t;
}

TermPtr binop(Op op, TermPtr l, TermPtr r) {
  auto t = std::make_shared<Term>();
  t->op = op;
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

TermPtr plus(TermPtr l, TermPtr r) { return binop(Op::Plus, std::move(l), std::move(r)); }
TermPtr seq(TermPtr l, TermPtr r) { return binop(Op::Seq, std::move(l), std::move(r)); }
TermPtr par(TermPtr l, TermPtr r) { return binop(Op::Par, std::move(l), std::move(r)); }
TermPtr lmerge(TermPtr l, TermPtr r) { return binop(Op::LMerge, std::move(l), std::move(r)); }
TermPtr cmerge(TermPtr l, TermPtr r) { return binop(Op::CMerge, std::move(l), std::move(r)); }

TermPtr zero() {
  auto t = std::make_shared<Term>();
  t->op = Op::Zero;
  return t;
}

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::Atom) return a->label == b->label;
  if (a->op == Op::Zero) return true;
  return structurally_equal(a->left, b->left) &&
         structurally_equal(a->right, b->right);
}

namespace {

int prec(Op op) {
  switch (op) {
    case Op::Seq: return 3;
    case Op::Par:
    case Op::LMerge:
    case Op::CMerge: return 2;
    case Op::Plus: return 1;
    default: return 4;  // atoms, zero
  }
}

const char* op_token(Op op) {
  switch (op) {
    case Op::Plus: return " + ";
    case Op::Seq: return " . ";
    case Op::Par: return " || ";
    case Op::LMerge: return " |_ ";
    case Op::CMerge: return " | ";
    default: return "?";
  }
}

void fmt(const TermPtr& t, std::string& out) {
  if (t->op == Op::Atom) {
    out += t->label;
    return;
  }
  if (t->op == Op::Zero) {
    out += "0";
    return;
  }
  auto child = [&](const TermPtr& c, bool is_right) {
    int cp = prec(c->op);
    int mp = prec(t->op);
    // Left-associative levels; the parallel level additionally refuses to
    // mix operator kinds without parentheses.
    bool need = cp < mp || (cp == mp && (is_right || c->op != t->op));
    if (need) out += "(";
    fmt(c, out);
    if (need) out += ")";
  };
  child(t->left, false);
  out += op_token(t->op);
  child(t->right, true);
}

}  // namespace

std::string format_term(const TermPtr& t) {
  std::string out;
  fmt(t, out);
  return out;
}

bool is_pa1(const TermPtr& t) {
  if (t->op == Op::LMerge || t->op == Op::CMerge) return false;
  if (t->op == Op::Atom || t->op == Op::Zero) return true;
  return is_pa1(t->left) && is_pa1(t->right);
}

int term_size(const TermPtr& t) {
  if (t->op == Op::Atom || t->op == Op::Zero) return 1;
  return 1 + term_size(t->left) + term_size(t->right);
}

int leaf_count(const TermPtr& t) {
  if (t->op == Op::Atom) return 1;
  if (t->op == Op::Zero) return 0;
  return leaf_count(t->left) + leaf_count(t->right);
}

TermPtr ac_canonical(const TermPtr& t) {
  if (t->op == Op::Atom || t->op == Op::Zero) return t;
  TermPtr l = ac_canonical(t->left);
  TermPtr r = ac_canonical(t->right);
  if (t->op == Op::Plus || t->op == Op::Par) {
    if (format_term(r) < format_term(l)) std::swap(l, r);
  }
  return binop(t->op, l, r);
}

}  // namespace pa
