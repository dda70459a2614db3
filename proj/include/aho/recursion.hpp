#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "aho/hyp_expr.hpp"

namespace aho {

// Index triple of one coefficient: perturbative order n, half-power index k
// (2k counts the even coordinate powers), split index l. Valid combinations
// satisfy 0 <= k, 2k <= 4n, 0 <= l <= 2k; everything else is dropped from
// the recursion.
struct CoeffKey {
  int n = 0, k = 0, l = 0;
  auto operator<=>(const CoeffKey&) const = default;
  static bool valid(int n, int k, int l) {
    return n >= 0 && k >= 0 && l >= 0 && 2 * k <= 4 * n && l <= 2 * k;
  }
};

struct CoeffStats {
  long long total;           // coefficients per order
  long long after_symmetry;  // distinct ones once mirrors are identified
  long long integrations;    // diagonal integrations actually required
};

// Coefficient store for the evolution-amplitude expansion
//
//   A(xb, xa, tau) = sum_{n,k,l} g^n c_{2k|l}^{(n)}(tau) / sinh^l(w tau)
//                    * xa^{2k-l} xb^l .
//
// Orders are built by the combined schedule: the diagonal c_{2k|2k} by
// integrating the master equation (descending k), the mirror l = 0 entry
// from the reflection symmetry, the remaining 0 < l <= k algebraically, and
// l > k again by mirroring. Every completed entry is checked against the
// master equation by exact differentiation.
class CoeffTable {
 public:
  static constexpr int kMaxOrder = 7;

  CoeffTable();

  int max_order() const { return max_order_; }
  void extend(int order);

  const HypExpr& at(int n, int k, int l) const;
  // Index-rule access: invalid keys contribute zero.
  HypExpr fetch(int n, int k, int l) const;

  const std::map<CoeffKey, HypExpr>& entries() const { return entries_; }
  std::size_t entries_at(int n) const;
  long long integrations(int n) const;

  // Integration constant d making (candidate + d)/sinh^l regular (in fact
  // vanishing) at tau = 0. Returns the constant as an expression carrying
  // the candidate's parameter monomial. Throws ConstraintViolation when an
  // obstruction other than the x^0 coefficient is nonzero.
  static HypExpr fix_constant(const HypExpr& candidate, int l);

  static CoeffStats stats(int n);

  // Right-hand side of the master equation for d c_{2k|l}^{(n)} / d tau,
  // assembled from stored entries with index-rule drops.
  HypExpr ode_rhs(int n, int k, int l) const;

 private:
  void build_order(int n);
  HypExpr algebraic_entry(int n, int k, int l) const;
  void put(int n, int k, int l, HypExpr e);

  std::map<CoeffKey, HypExpr> entries_;
  int max_order_ = -1;
  std::vector<long long> integrations_;
};

}  // namespace aho
