#include "sepveri/congruence.hpp"

#include <sstream>

namespace sepveri {

Congruence::Congruence() = default;

int Congruence::find(int a) {
  while (parent_[a] != a) {
    parent_[a] = parent_[parent_[a]];
    a = parent_[a];
  }
  return a;
}

std::string Congruence::sig_of(int id) {
  const Node& n = nodes_[id];
  std::ostringstream os;
  os << n.key;
  for (int c : n.children) os << "," << find(c);
  return os.str();
}

int Congruence::intern(const TermPtr& t) {
  auto it = term_ids_.find(t);
  if (it != term_ids_.end()) return find(it->second);

  Node n;
  n.term = t;
  std::ostringstream key;
  switch (t->kind) {
    case TermKind::IntLit:
      key << "i" << t->int_val;
      n.is_literal = true;
      break;
    case TermKind::Null:
      key << "null";
      n.is_literal = true;
      break;
    case TermKind::Undef: key << "undef"; break;
    case TermKind::ProgVar: key << "p" << t->name << (t->at_pre ? "@pre" : ""); break;
    case TermKind::LogicVar: key << "l" << t->name; break;
    case TermKind::FieldAddr:
      key << "fa." << t->name;
      n.children.push_back(intern(t->args[0]));
      break;
    case TermKind::Index:
      key << "ix";
      n.children.push_back(intern(t->args[0]));
      n.children.push_back(intern(t->args[1]));
      break;
    case TermKind::App:
      key << "f" << t->name << "/" << t->args.size();
      n.is_ctor = (t->app_kind == AppKind::Ctor);
      for (const auto& a : t->args) n.children.push_back(intern(a));
      break;
  }
  n.key = key.str();

  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(n);
  parent_.push_back(id);
  uses_.emplace_back();
  term_ids_[t] = id;

  std::string sig = sig_of(id);
  auto sit = sig_table_.find(sig);
  if (sit != sig_table_.end()) {
    pending_.emplace_back(id, sit->second);
    process_pending();
    return find(id);
  }
  sig_table_[sig] = id;
  for (int c : nodes_[id].children) uses_[find(c)].push_back(id);
  return id;
}

void Congruence::merge(int a, int b) {
  pending_.emplace_back(a, b);
  process_pending();
}

void Congruence::process_pending() {
  while (!pending_.empty()) {
    auto [x, y] = pending_.back();
    pending_.pop_back();
    int rx = find(x), ry = find(y);
    if (rx == ry) continue;

    // clash and injectivity between the classes' value nodes
    auto value_node = [&](int root) -> int {
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (find(static_cast<int>(i)) == root && (nodes_[i].is_literal || nodes_[i].is_ctor))
          return static_cast<int>(i);
      return -1;
    };
    int vx = value_node(rx), vy = value_node(ry);
    if (vx >= 0 && vy >= 0) {
      const Node& nx = nodes_[vx];
      const Node& ny = nodes_[vy];
      if (nx.key != ny.key) {
        contradiction_ = true;
        return;
      }
      if (nx.is_ctor && ny.is_ctor)
        for (std::size_t i = 0; i < nx.children.size(); ++i)
          pending_.emplace_back(nx.children[i], ny.children[i]);
    }

    if (rx > ry) std::swap(rx, ry);
    parent_[ry] = rx;

    // re-canonicalize signatures that mention the absorbed class
    std::vector<int> users = uses_[ry];
    uses_[ry].clear();
    for (int u : users) {
      std::string sig = sig_of(u);
      auto it = sig_table_.find(sig);
      if (it != sig_table_.end() && find(it->second) != find(u))
        pending_.emplace_back(u, it->second);
      else
        sig_table_[sig] = u;
      uses_[rx].push_back(u);
    }
  }

  for (const auto& [a, b] : diseqs_)
    if (find(a) == find(b)) {
      contradiction_ = true;
      return;
    }
}

void Congruence::add_equation(const TermPtr& a, const TermPtr& b) {
  if (contradiction_) return;
  int ia = intern(a), ib = intern(b);
  merge(ia, ib);
}

void Congruence::add_disequation(const TermPtr& a, const TermPtr& b) {
  if (contradiction_) return;
  int ia = intern(a), ib = intern(b);
  diseqs_.emplace_back(ia, ib);
  if (find(ia) == find(ib)) contradiction_ = true;
}

void Congruence::add_hyp(const PurePtr& p) {
  if (contradiction_) return;
  switch (p->kind) {
    case PureKind::Cmp:
      if (p->op == CmpOp::Eq) add_equation(p->lhs, p->rhs);
      else if (p->op == CmpOp::Ne) add_disequation(p->lhs, p->rhs);
      else atoms_.push_back(p);
      return;
    case PureKind::And:
      for (const auto& s : p->sub) add_hyp(s);
      return;
    case PureKind::BoolLit:
      if (!p->bval) contradiction_ = true;
      return;
    case PureKind::Not: {
      const PurePtr& inner = p->sub[0];
      if (inner->kind == PureKind::Cmp) {
        add_hyp(PureAtom::negate(inner));
        return;
      }
      atoms_.push_back(p);
      return;
    }
    default:
      atoms_.push_back(p);
      return;
  }
}

bool Congruence::equal(const TermPtr& a, const TermPtr& b) {
  if (term_eq(a, b)) return true;
  if (contradiction_) return true;
  return find(intern(a)) == find(intern(b));
}

bool Congruence::disequal(const TermPtr& a, const TermPtr& b) {
  if (contradiction_) return true;
  int ra = find(intern(a)), rb = find(intern(b));
  if (ra == rb) return false;
  auto value_node = [&](int root) -> const Node* {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (find(static_cast<int>(i)) == root && (nodes_[i].is_literal || nodes_[i].is_ctor))
        return &nodes_[i];
    return nullptr;
  };
  const Node* na = value_node(ra);
  const Node* nb = value_node(rb);
  if (na && nb && na->key != nb->key) return true;
  for (const auto& [x, y] : diseqs_) {
    int rx = find(x), ry = find(y);
    if ((rx == ra && ry == rb) || (rx == rb && ry == ra)) return true;
  }
  return false;
}

int Congruence::class_id(const TermPtr& t) { return find(intern(t)); }

std::optional<std::int64_t> Congruence::known_int(const TermPtr& t) {
  int r = find(intern(t));
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (find(static_cast<int>(i)) == r && nodes_[i].term->kind == TermKind::IntLit)
      return nodes_[i].term->int_val;
  return std::nullopt;
}

bool Congruence::entails_atom(const PurePtr& p) {
  if (contradiction_) return true;
  if (p->kind == PureKind::Cmp) {
    if (p->op == CmpOp::Eq) return equal(p->lhs, p->rhs);
    if (p->op == CmpOp::Ne) return disequal(p->lhs, p->rhs);
    for (const auto& a : atoms_)
      if (a->kind == PureKind::Cmp && a->op == p->op && equal(a->lhs, p->lhs) &&
          equal(a->rhs, p->rhs))
        return true;
    if (p->op == CmpOp::Le || p->op == CmpOp::Ge) {
      CmpOp strict = p->op == CmpOp::Le ? CmpOp::Lt : CmpOp::Gt;
      for (const auto& a : atoms_)
        if (a->kind == PureKind::Cmp && a->op == strict && equal(a->lhs, p->lhs) &&
            equal(a->rhs, p->rhs))
          return true;
      if (equal(p->lhs, p->rhs)) return true;
    }
    return false;
  }
  if (p->kind == PureKind::PredApp) {
    for (const auto& a : atoms_) {
      if (a->kind != PureKind::PredApp || a->pred != p->pred ||
          a->args.size() != p->args.size())
        continue;
      bool all = true;
      for (std::size_t i = 0; i < p->args.size() && all; ++i)
        all = equal(a->args[i], p->args[i]);
      if (all) return true;
    }
    return false;
  }
  if (p->kind == PureKind::BoolLit) return p->bval;
  if (p->kind == PureKind::And) {
    for (const auto& s : p->sub)
      if (!entails_atom(s)) return false;
    return true;
  }
  if (p->kind == PureKind::Or) {
    for (const auto& s : p->sub)
      if (entails_atom(s)) return true;
    return false;
  }
  if (p->kind == PureKind::Not) {
    const PurePtr& inner = p->sub[0];
    if (inner->kind == PureKind::Cmp) return entails_atom(PureAtom::negate(inner));
    for (const auto& a : atoms_)
      if (pure_eq(a, p)) return true;
    return false;
  }
  return false;
}

} // namespace sepveri
