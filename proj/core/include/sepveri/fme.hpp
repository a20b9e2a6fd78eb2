#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace sepveri {

// Fourier-Motzkin elimination for linear integer arithmetic over rationals:
// UNSAT over the rationals soundly implies UNSAT over the integers.
// Coefficients are 128-bit with overflow checks; an overflow or a constraint
// blowup yields Blowup (treated as "unknown" upstream).

// One inequality: sum(coeffs[v] * v) + constant <= 0.
struct LinIneq {
  std::map<int, __int128> coeffs;
  __int128 constant = 0;
};

struct LinearSystem {
  std::vector<LinIneq> ineqs;

  /// lhs <= rhs given as coefficient maps; equalities fold as two inequalities.
  void add_le(const std::map<int, __int128>& coeffs, __int128 constant);
  void add_eq(const std::map<int, __int128>& coeffs, __int128 constant);
  std::set<int> variables() const;
};

enum class FmeStatus { Sat, Unsat, Blowup };

struct FmeResult {
  FmeStatus status = FmeStatus::Sat;
  int eliminated = 0; // variables eliminated before deciding
};

FmeResult fme_decide(const LinearSystem& sys, std::size_t max_constraints = 4096);

} // namespace sepveri
