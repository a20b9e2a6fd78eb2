#include "sepveri/printer.hpp"

#include <sstream>

namespace sepveri {

namespace {

bool is_builtin_op(const std::string& n) {
  return n == "+" || n == "-" || n == "*" || n == "/" || n == "%" || n == "&" || n == "|" ||
         n == "^" || n == "<<" || n == ">>" || n == "neg";
}

int op_prec(const std::string& n) {
  if (n == "*" || n == "/" || n == "%") return 5;
  if (n == "+" || n == "-") return 4;
  if (n == "<<" || n == ">>") return 3;
  if (n == "&" || n == "^" || n == "|") return 2;
  return 6;
}

std::string print_term_prec(const TermPtr& t, int parent_prec);

std::string print_addr(const TermPtr& t) {
  // location position: x, x -> f, a[i], *p
  switch (t->kind) {
    case TermKind::FieldAddr:
      return print_term_prec(t->args[0], 7) + " -> " + t->name;
    case TermKind::Index:
      return print_term_prec(t->args[0], 7) + "[" + print_term_prec(t->args[1], 0) + "]";
    default:
      return "*" + print_term_prec(t, 7);
  }
}

std::string print_term_prec(const TermPtr& t, int parent_prec) {
  switch (t->kind) {
    case TermKind::IntLit:
      if (t->int_val == kIntMin) return "INT_MIN";
      if (t->int_val == kIntMax) return "INT_MAX";
      return std::to_string(t->int_val);
    case TermKind::Null: return "NULL";
    case TermKind::Undef: return "__undef";
    case TermKind::ProgVar: return t->at_pre ? t->name + "@pre" : t->name;
    case TermKind::LogicVar: return t->name;
    case TermKind::FieldAddr:
      return print_term_prec(t->args[0], 7) + " -> " + t->name;
    case TermKind::Index:
      return print_term_prec(t->args[0], 7) + "[" + print_term_prec(t->args[1], 0) + "]";
    case TermKind::App: {
      if (t->app_kind == AppKind::Builtin && t->name == "neg")
        return "-" + print_term_prec(t->args[0], 7);
      if (t->name == "&" && t->args.size() == 1)
        return "&(" + print_term_prec(t->args[0], 0) + ")";
      if (t->name == "*" && t->args.size() == 1)
        return "*" + print_term_prec(t->args[0], 7);
      if (t->app_kind == AppKind::Builtin && is_builtin_op(t->name) && t->args.size() == 2) {
        int p = op_prec(t->name);
        std::string s = print_term_prec(t->args[0], p) + " " + t->name + " " +
                        print_term_prec(t->args[1], p + 1);
        if (p < parent_prec) return "(" + s + ")";
        return s;
      }
      if (t->app_kind == AppKind::Ctor && t->args.empty()) return t->name;
      std::ostringstream os;
      os << t->name << "(";
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        os << print_term_prec(t->args[i], 0);
      }
      os << ")";
      return os.str();
    }
  }
  return "?";
}

} // namespace

std::string print_term(const TermPtr& t) { return print_term_prec(t, 0); }

std::string print_pure(const PurePtr& p) {
  switch (p->kind) {
    case PureKind::Cmp:
      return print_term(p->lhs) + " " + cmp_str(p->op) + " " + print_term(p->rhs);
    case PureKind::Not:
      return "!(" + print_pure(p->sub[0]) + ")";
    case PureKind::And: {
      std::string s;
      for (std::size_t i = 0; i < p->sub.size(); ++i) {
        if (i) s += " && ";
        s += print_pure(p->sub[i]);
      }
      return "(" + s + ")";
    }
    case PureKind::Or: {
      std::string s;
      for (std::size_t i = 0; i < p->sub.size(); ++i) {
        if (i) s += " || ";
        s += print_pure(p->sub[i]);
      }
      return "(" + s + ")";
    }
    case PureKind::PredApp: {
      std::ostringstream os;
      os << p->pred << "(";
      for (std::size_t i = 0; i < p->args.size(); ++i) {
        if (i) os << ", ";
        os << print_term(p->args[i]);
      }
      os << ")";
      return os.str();
    }
    case PureKind::BoolLit:
      return p->bval ? "true" : "false";
  }
  return "?";
}

std::string print_spatial(const SpatialAtom& s) {
  switch (s.kind) {
    case SpatialKind::Emp: return "emp";
    case SpatialKind::PointsTo:
      if (s.is_permission()) {
        if (s.loc->kind == TermKind::FieldAddr || s.loc->kind == TermKind::Index)
          return "has_permission(&(" + print_addr(s.loc) + "))";
        return "has_permission(" + print_term(s.loc) + ")";
      }
      return print_addr(s.loc) + " == " + print_term(s.value);
    case SpatialKind::PredApp: {
      std::ostringstream os;
      os << s.pred << "(";
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) os << ", ";
        os << print_term(s.args[i]);
      }
      os << ")";
      return os.str();
    }
  }
  return "?";
}

std::string print_heap(const SymbolicHeap& h) {
  std::ostringstream os;
  if (!h.exists.empty()) {
    os << "exists";
    for (const auto& b : h.exists) os << " " << b.name;
    os << ", ";
  }
  bool first = true;
  for (const auto& p : h.pure) {
    if (!first) os << " && ";
    os << print_pure(p);
    first = false;
  }
  if (h.spatial.empty()) {
    if (!first) os << " && ";
    os << "emp";
  } else {
    for (std::size_t i = 0; i < h.spatial.size(); ++i) {
      if (!first) os << (i == 0 ? " && " : " * ");
      else if (i > 0) os << " * ";
      os << print_spatial(h.spatial[i]);
      first = false;
    }
  }
  return os.str();
}

std::string print_assertion(const Assertion& a) {
  if (a.branches.empty()) return "false";
  std::ostringstream os;
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    if (i) os << " || ";
    if (a.branches[i].name) os << *a.branches[i].name << ": ";
    os << print_heap(a.branches[i].heap);
  }
  return os.str();
}

} // namespace sepveri
