#include "sepveri/fme.hpp"

#include <algorithm>
#include <stdexcept>

namespace sepveri {

namespace {

struct Overflow {};

__int128 checked_add(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Divide through by the gcd of all coefficients and the constant; exact, so
// the rational solution set is unchanged.
void reduce(LinIneq& q) {
  __int128 g = 0;
  for (auto& [v, c] : q.coeffs) g = gcd128(g, c);
  g = gcd128(g, q.constant);
  if (g > 1) {
    for (auto& [v, c] : q.coeffs) c /= g;
    q.constant /= g;
  }
  for (auto it = q.coeffs.begin(); it != q.coeffs.end();)
    it = it->second == 0 ? q.coeffs.erase(it) : std::next(it);
}

} // namespace

void LinearSystem::add_le(const std::map<int, __int128>& coeffs, __int128 constant) {
  LinIneq q;
  q.coeffs = coeffs;
  q.constant = constant;
  reduce(q);
  ineqs.push_back(std::move(q));
}

void LinearSystem::add_eq(const std::map<int, __int128>& coeffs, __int128 constant) {
  add_le(coeffs, constant);
  std::map<int, __int128> neg;
  for (const auto& [v, c] : coeffs) neg[v] = -c;
  add_le(neg, -constant);
}

std::set<int> LinearSystem::variables() const {
  std::set<int> out;
  for (const auto& q : ineqs)
    for (const auto& [v, c] : q.coeffs)
      if (c != 0) out.insert(v);
  return out;
}

FmeResult fme_decide(const LinearSystem& sys, std::size_t max_constraints) {
  FmeResult result;
  try {
    std::vector<LinIneq> work = sys.ineqs;

    auto ground_unsat = [&](const std::vector<LinIneq>& qs) {
      for (const auto& q : qs)
        if (q.coeffs.empty() && q.constant > 0) return true;
      return false;
    };

    for (;;) {
      if (ground_unsat(work)) {
        result.status = FmeStatus::Unsat;
        return result;
      }
      std::set<int> vars;
      for (const auto& q : work)
        for (const auto& [v, c] : q.coeffs)
          if (c != 0) vars.insert(v);
      if (vars.empty()) {
        result.status = FmeStatus::Sat;
        return result;
      }

      // pick the variable minimizing lower*upper pairings
      int best_var = *vars.begin();
      std::size_t best_cost = SIZE_MAX;
      for (int v : vars) {
        std::size_t lo = 0, hi = 0;
        for (const auto& q : work) {
          auto it = q.coeffs.find(v);
          if (it == q.coeffs.end() || it->second == 0) continue;
          (it->second > 0 ? hi : lo)++;
        }
        std::size_t cost = lo * hi;
        if (cost < best_cost) {
          best_cost = cost;
          best_var = v;
        }
      }

      std::vector<LinIneq> lowers, uppers, rest;
      for (auto& q : work) {
        auto it = q.coeffs.find(best_var);
        if (it == q.coeffs.end() || it->second == 0) rest.push_back(std::move(q));
        else if (it->second > 0) uppers.push_back(std::move(q));
        else lowers.push_back(std::move(q));
      }

      for (const auto& up : uppers) {
        __int128 a = up.coeffs.at(best_var); // a > 0
        for (const auto& lo : lowers) {
          __int128 b = -lo.coeffs.at(best_var); // b > 0
          // b*up + a*lo eliminates best_var
          LinIneq q;
          for (const auto& [v, c] : up.coeffs)
            if (v != best_var) q.coeffs[v] = checked_mul(b, c);
          for (const auto& [v, c] : lo.coeffs) {
            if (v == best_var) continue;
            q.coeffs[v] = checked_add(q.coeffs.count(v) ? q.coeffs[v] : 0, checked_mul(a, c));
          }
          q.constant = checked_add(checked_mul(b, up.constant), checked_mul(a, lo.constant));
          reduce(q);
          rest.push_back(std::move(q));
          if (rest.size() > max_constraints) {
            result.status = FmeStatus::Blowup;
            return result;
          }
        }
      }
      work = std::move(rest);
      result.eliminated++;
    }
  } catch (const Overflow&) {
    result.status = FmeStatus::Blowup;
    return result;
  }
}

} // namespace sepveri
