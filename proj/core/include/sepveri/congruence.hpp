#pragma once

#include "sepveri/decls.hpp"
#include "sepveri/formula.hpp"

#include <map>
#include <string>
#include <vector>

namespace sepveri {

// Congruence closure over uninterpreted functions and constructors, with
// constructor clash detection and injectivity propagation. Build it from
// hypothesis atoms, then query equality of arbitrary terms.
class Congruence {
public:
  Congruence();

  /// Records a hypothesis: equalities merge, disequalities are remembered,
  /// conjunctions recurse; other atoms are kept for entails_atom lookups.
  void add_hyp(const PurePtr& p);
  void add_equation(const TermPtr& a, const TermPtr& b);
  void add_disequation(const TermPtr& a, const TermPtr& b);

  bool contradictory() const { return contradiction_; }

  bool equal(const TermPtr& a, const TermPtr& b);
  /// Provable disequality: constructor/literal clash between representatives
  /// or a recorded disequation connecting the classes.
  bool disequal(const TermPtr& a, const TermPtr& b);

  /// Stable class id for a term (used as a solver column index).
  int class_id(const TermPtr& t);
  /// Integer literal known equal to t's class, if any.
  std::optional<std::int64_t> known_int(const TermPtr& t);

  /// True when a hypothesis atom congruent to `p` was recorded (comparison
  /// operands matched per class, predicate arguments pairwise).
  bool entails_atom(const PurePtr& p);

private:
  struct Node {
    std::string key; // kind+name discriminator for signatures
    std::vector<int> children;
    TermPtr term;
    bool is_ctor = false;
    bool is_literal = false;
  };

  int intern(const TermPtr& t);
  int find(int a);
  void merge(int a, int b);
  void process_pending();
  std::string sig_of(int node);

  std::vector<Node> nodes_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> uses_; // class -> nodes whose signature mentions it
  std::map<TermPtr, int, TermLess> term_ids_;
  std::map<std::string, int> sig_table_;
  std::vector<std::pair<int, int>> pending_;
  std::vector<std::pair<int, int>> diseqs_;
  std::vector<PurePtr> atoms_;
  bool contradiction_ = false;
};

} // namespace sepveri
