#pragma once

// Inertia (Maslov) index of Lagrangian triples and tuples, the triple
// invariants (n0, n_jk, tau), their admissibility conditions, and the
// identities tying tau to the index of the associated representation.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "lagrep/lagrangian.hpp"

namespace lagrep {

namespace detail {

// Orthonormal real basis of L as a 2n x n matrix [Re g; Im g].
inline RMatrix real_basis(const Lagrangian& l, const Tolerances& tol) {
  const CMatrix g = l.frame(tol).matrix();
  const Index n = g.rows();
  RMatrix r(2 * n, n);
  r.topRows(n) = g.real();
  r.bottomRows(n) = g.imag();
  return r;
}

// Index of the representation built from the tuple, from the spectra of the
// consecutive products.
inline double tuple_index(const LagrangianTuple& lambda, const Tolerances& tol) {
  double total = 0.0;
  for (std::size_t s = 0; s < lambda.size(); ++s)
    for (double a : spectrum(tau2(lambda.cyclic(s), lambda.cyclic(s + 1)), tol).alpha) total += a;
  return total;
}

inline int rounded_index(double value) {
  const double r = std::round(value);
  if (std::fabs(value - r) > 1e-8)
    throw NumericalError("index of a Lagrangian tuple is not an integer: " +
                         std::to_string(value));
  return static_cast<int>(r);
}

}  // namespace detail

/// Signature of q(x1,x2,x3) = w(x1,x2) + w(x2,x3) + w(x3,x1) on
/// L1 + L2 + L3, with w(z,w) = -Im <z,w> and <,> antilinear in the first
/// slot. This sign makes tau = 3n - 2I - (n12 + n23 + n31).
inline int inertia_index(const Lagrangian& l1, const Lagrangian& l2, const Lagrangian& l3,
                         const Tolerances& tol = {}) {
  detail::require(l1.dim() == l2.dim() && l2.dim() == l3.dim(),
                  "inertia_index: dimension mismatch");
  const Index n = l1.dim();
  const CMatrix g1 = l1.frame(tol).matrix();
  const CMatrix g2 = l2.frame(tol).matrix();
  const CMatrix g3 = l3.frame(tol).matrix();
  const RMatrix w12 = -(g1.adjoint() * g2).imag();
  const RMatrix w23 = -(g2.adjoint() * g3).imag();
  const RMatrix w31 = -(g3.adjoint() * g1).imag();
  RMatrix q = RMatrix::Zero(3 * n, 3 * n);
  q.block(0, n, n, n) = 0.5 * w12;
  q.block(n, 0, n, n) = 0.5 * w12.transpose();
  q.block(n, 2 * n, n, n) = 0.5 * w23;
  q.block(2 * n, n, n, n) = 0.5 * w23.transpose();
  q.block(2 * n, 0, n, n) = 0.5 * w31;
  q.block(0, 2 * n, n, n) = 0.5 * w31.transpose();
  return signature(q, tol.rank).value();
}

/// Real dimension of the common intersection of the Lagrangians.
inline int common_intersection_dim(const std::vector<Lagrangian>& ls, const Tolerances& tol = {}) {
  detail::require(!ls.empty(), "common_intersection_dim: empty list");
  const Index n = ls.front().dim();
  const Index m = 2 * n;
  RMatrix stacked(m * static_cast<Index>(ls.size()), m);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    detail::require(ls[i].dim() == n, "common_intersection_dim: dimension mismatch");
    const RMatrix r = detail::real_basis(ls[i], tol);
    stacked.middleRows(static_cast<Index>(i) * m, m) = RMatrix::Identity(m, m) - r * r.transpose();
  }
  Eigen::JacobiSVD<RMatrix> svd(stacked);
  int rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol.rank) ++rank;
  return static_cast<int>(m) - rank;
}

struct TripleInvariants {
  int n0 = 0;
  int n12 = 0;
  int n23 = 0;
  int n31 = 0;
  int tau = 0;

  int pair_sum() const { return n12 + n23 + n31; }
  bool operator==(const TripleInvariants&) const = default;
};

inline TripleInvariants triple_invariants(const Lagrangian& l1, const Lagrangian& l2,
                                          const Lagrangian& l3, const Tolerances& tol = {}) {
  detail::require(l1.dim() == l2.dim() && l2.dim() == l3.dim(),
                  "triple_invariants: dimension mismatch");
  TripleInvariants d;
  d.n0 = common_intersection_dim({l1, l2, l3}, tol);
  d.n12 = dim_intersection(l1, l2, tol);
  d.n23 = dim_intersection(l2, l3, tol);
  d.n31 = dim_intersection(l3, l1, tol);
  d.tau = inertia_index(l1, l2, l3, tol);
  return d;
}

/// The four admissibility conditions on (n0, n12, n23, n31, tau).
inline bool classify_valid(const TripleInvariants& d, int n) {
  const int sum = d.pair_sum();
  for (int njk : {d.n12, d.n23, d.n31})
    if (d.n0 < 0 || d.n0 > njk || njk > n) return false;
  if (sum > n + 2 * d.n0) return false;
  if (std::abs(d.tau) > n + 2 * d.n0 - sum) return false;
  return ((d.tau - (n - sum)) % 2) == 0;
}

/// tau(L1,...,Ll) = sum_k tau(L1, L_k, L_{k+1}) for k = 2, ..., l-1.
inline int generalized_maslov(const LagrangianTuple& lambda, const Tolerances& tol = {}) {
  detail::require(lambda.size() >= 3, "generalized_maslov: need at least three Lagrangians");
  int total = 0;
  for (std::size_t k = 1; k + 1 < lambda.size(); ++k)
    total += inertia_index(lambda[0], lambda[k], lambda[k + 1], tol);
  return total;
}

/// Both sides of the identities relating tau, the index I and the
/// intersection dimensions of a tuple.
struct IndexIdentityReport {
  int tau = 0;
  int index = 0;
  int n0 = 0;
  std::vector<int> njk;  // dim(L_s cap L_{s+1}), cyclically

  int tau_from_index = 0;          // n l - 2 I - sum njk
  int generalized_index = 0;       // sum I(L1,Lk,Lk+1) - sum_{i=3}^{l-1} (n - n_1i)
  int maslov_bound = 0;            // n(l-2) + 2 n0 - sum njk
  bool tau_identity = false;       // tau == tau_from_index
  bool index_identity = false;     // index == generalized_index
  bool bound_holds = false;        // |tau| <= maslov_bound
  bool index_bounds = false;       // n - N0 <= I <= n(l-1) + N0 - N1

  bool all() const { return tau_identity && index_identity && bound_holds && index_bounds; }
};

inline IndexIdentityReport check_index_identities(const LagrangianTuple& lambda,
                                                  const Tolerances& tol = {}) {
  detail::require(lambda.size() >= 3, "check_index_identities: need at least three Lagrangians");
  const int n = static_cast<int>(lambda.dim());
  const int ell = static_cast<int>(lambda.size());
  IndexIdentityReport r;
  r.tau = generalized_maslov(lambda, tol);
  r.index = detail::rounded_index(detail::tuple_index(lambda, tol));
  r.n0 = common_intersection_dim(lambda.items(), tol);
  int n1 = 0;
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    r.njk.push_back(dim_intersection(lambda.cyclic(s), lambda.cyclic(s + 1), tol));
    n1 += r.njk.back();
  }
  r.tau_from_index = n * ell - 2 * r.index - n1;
  r.tau_identity = r.tau == r.tau_from_index;

  int gen = 0;
  for (std::size_t k = 1; k + 1 < lambda.size(); ++k) {
    LagrangianTuple t({lambda[0], lambda[k], lambda[k + 1]});
    gen += detail::rounded_index(detail::tuple_index(t, tol));
  }
  for (std::size_t i = 2; i + 1 < lambda.size(); ++i)
    gen -= n - dim_intersection(lambda[0], lambda[i], tol);
  r.generalized_index = gen;
  r.index_identity = r.index == gen;

  r.maslov_bound = n * (ell - 2) + 2 * r.n0 - n1;
  r.bound_holds = std::abs(r.tau) <= r.maslov_bound;
  // N0 of the representation is the common intersection, N1 the total
  // multiplicity of the zero angle.
  r.index_bounds = n - r.n0 <= r.index && r.index <= n * (ell - 1) + r.n0 - n1;
  return r;
}

}  // namespace lagrep
