#pragma once

// Lagrangian subspaces of C^n stored through their symmetric unitary
// matrix M = g g^T (g any unitary frame with L = g R^n). The involution
// fixing L is z -> M conj(z).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagrep/numerics.hpp"

namespace lagrep {

class Lagrangian {
 public:
  Lagrangian() = default;

  /// Validates symmetry and unitarity of M.
  explicit Lagrangian(CMatrix m, const Tolerances& tol = {}) : m_(std::move(m)) {
    detail::require(m_.rows() == m_.cols() && m_.rows() > 0,
                    "Lagrangian: M must be square and non-empty");
    const double uni = unitarity_defect(m_);
    if (!(uni <= tol.unitarity))
      throw InputError("Lagrangian: M is not unitary: ||M*M - I||_F = " +
                       std::to_string(uni));
    const double sym = symmetry_defect(m_);
    if (!(sym <= tol.symmetry))
      throw InputError("Lagrangian: M is not symmetric: ||M - M^T||_F = " +
                       std::to_string(sym));
  }

  static Lagrangian trusted(CMatrix m) {
    Lagrangian l;
    l.m_ = std::move(m);
    return l;
  }

  /// The real subspace R^n.
  static Lagrangian standard(Index n) { return trusted(CMatrix::Identity(n, n)); }

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  /// A unitary frame g with g g^T = M.
  UnitaryMatrix frame(const Tolerances& tol = {}) const {
    return takagi_symmetric_unitary(m_, tol);
  }

  /// The image u L, i.e. M -> u M u^T.
  Lagrangian transformed(const CMatrix& u) const {
    CMatrix m = u * m_ * u.transpose();
    return trusted(0.5 * (m + m.transpose()));
  }

 private:
  CMatrix m_;
};

class LagrangianTuple {
 public:
  LagrangianTuple() = default;

  explicit LagrangianTuple(std::vector<Lagrangian> items) : items_(std::move(items)) {
    detail::require(items_.size() >= 2, "LagrangianTuple: need at least two Lagrangians");
    for (const auto& l : items_)
      detail::require(l.dim() == items_.front().dim(),
                      "LagrangianTuple: all Lagrangians must share a dimension");
  }

  static LagrangianTuple standard(std::size_t ell, Index n) {
    return LagrangianTuple(std::vector<Lagrangian>(ell, Lagrangian::standard(n)));
  }

  std::size_t size() const { return items_.size(); }
  Index dim() const { return items_.front().dim(); }
  const Lagrangian& operator[](std::size_t s) const { return items_[s]; }
  /// Cyclic access: index s taken modulo the length.
  const Lagrangian& cyclic(std::size_t s) const { return items_[s % items_.size()]; }
  const std::vector<Lagrangian>& items() const { return items_; }
  std::vector<Lagrangian>& items() { return items_; }

 private:
  std::vector<Lagrangian> items_;
};

// ---------------------------------------------------------------------------

inline Lagrangian lagrangian_from_frame(const UnitaryMatrix& g) {
  CMatrix m = g.matrix() * g.matrix().transpose();
  return Lagrangian::trusted(0.5 * (m + m.transpose()));
}

inline Lagrangian random_lagrangian(Index n, Rng& rng) {
  return lagrangian_from_frame(haar_unitary(n, rng));
}

inline LagrangianTuple random_lagrangian_tuple(std::size_t ell, Index n, Rng& rng) {
  std::vector<Lagrangian> items;
  for (std::size_t s = 0; s < ell; ++s) items.push_back(random_lagrangian(n, rng));
  return LagrangianTuple(std::move(items));
}

/// sigma_L(z) = M conj(z).
inline CVector involution_apply(const Lagrangian& l, const CVector& z) {
  detail::require(z.size() == l.dim(), "involution_apply: dimension mismatch");
  return l.matrix() * z.conjugate();
}

/// Ad_{sigma_L} X = M conj(X) M^{-1}.
inline CMatrix adjoint_involution(const Lagrangian& l, const CMatrix& x) {
  detail::require(x.rows() == l.dim() && x.cols() == l.dim(),
                  "adjoint_involution: dimension mismatch");
  detail::require(is_skew_hermitian(x), "adjoint_involution: X is not skew-hermitian");
  return l.matrix() * x.conjugate() * l.matrix().conjugate();
}

namespace detail {

// Ad_{sigma_L} without validation, used in inner loops.
inline CMatrix ad_involution(const CMatrix& m, const CMatrix& x) {
  return m * x.conjugate() * m.conjugate();
}

// Real matrix of Ad_{sigma_L} acting on u(n) in skew coordinates.
inline RMatrix ad_involution_matrix(const CMatrix& m) {
  const Index n = m.rows();
  RMatrix a(n * n, n * n);
  for (Index i = 0; i < n * n; ++i) a.col(i) = skew_coords(ad_involution(m, skew_basis(i, n)));
  return a;
}

}  // namespace detail

/// tau_2(L1, L2) = sigma_1 sigma_2 = M1 conj(M2).
inline UnitaryMatrix tau2(const Lagrangian& l1, const Lagrangian& l2) {
  detail::require(l1.dim() == l2.dim(), "tau2: dimension mismatch");
  return UnitaryMatrix::trusted(l1.matrix() * l2.matrix().conjugate());
}

/// The Lagrangian pair (L1, L2) with tau2(L1, L2) = g. `fiber` selects the
/// point of the fiber Z(g) cap S(n): a symmetric unitary matrix commuting
/// with the diagonal form d of g, expressed in the eigenbasis of g. The
/// identity is the canonical section.
inline std::pair<Lagrangian, Lagrangian> tau2_split(const UnitaryMatrix& g,
                                                    const std::optional<CMatrix>& fiber = {},
                                                    const Tolerances& tol = {}) {
  const double defect = unitarity_defect(g.matrix());
  if (!(defect <= tol.unitarity))
    throw InputError("tau2_split: g is not unitary: ||g*g - I||_F = " + std::to_string(defect));
  const Index n = g.dim();
  const auto nd = diagonalize_normal(g.matrix());
  const CMatrix d = nd.d.asDiagonal();

  CMatrix h1 = CMatrix::Identity(n, n);
  if (fiber) {
    h1 = *fiber;
    detail::require(h1.rows() == n && h1.cols() == n, "tau2_split: fiber has wrong shape");
    detail::require(symmetry_defect(h1) <= tol.symmetry, "tau2_split: fiber is not symmetric");
    detail::require(unitarity_defect(h1) <= tol.unitarity, "tau2_split: fiber is not unitary");
    detail::require((h1 * d - d * h1).norm() <= 1e-8,
                    "tau2_split: fiber does not commute with the diagonal form of g");
  }
  const CMatrix& u = nd.u;
  CMatrix m1 = u * h1 * u.transpose();
  CMatrix m2 = u * (h1.adjoint() * d).conjugate() * u.transpose();
  m1 = 0.5 * (m1 + m1.transpose());
  m2 = 0.5 * (m2 + m2.transpose());
  return {Lagrangian::trusted(std::move(m1)), Lagrangian::trusted(std::move(m2))};
}

/// Real dimension of L1 cap L2: multiplicity of the angle 0 in tau2(L1, L2).
inline int dim_intersection(const Lagrangian& l1, const Lagrangian& l2,
                            const Tolerances& tol = {}) {
  return zero_multiplicity(spectrum(tau2(l1, l2), tol), tol.cluster);
}

struct StabilizerDims {
  int o1_cap_o2 = 0;  // dim(o_1 cap o_2)
  int z_g = 0;        // dim z(sigma_1 sigma_2)
};

/// dim(o_1 cap o_2) from the joint +1 eigenspace of the two adjoint
/// involutions, and dim z(g) from the multiplicities of spec(sigma_1 sigma_2).
inline StabilizerDims stabilizer_algebra_dim(const Lagrangian& l1, const Lagrangian& l2,
                                             const Tolerances& tol = {}) {
  detail::require(l1.dim() == l2.dim(), "stabilizer_algebra_dim: dimension mismatch");
  const Index n = l1.dim();
  const Index dim = n * n;
  RMatrix stacked(2 * dim, dim);
  stacked.topRows(dim) = detail::ad_involution_matrix(l1.matrix()) - RMatrix::Identity(dim, dim);
  stacked.bottomRows(dim) = detail::ad_involution_matrix(l2.matrix()) - RMatrix::Identity(dim, dim);
  // Entries of the stack are O(1); an absolute cutoff is scale-correct here.
  Eigen::JacobiSVD<RMatrix> svd(stacked);
  int rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol.rank) ++rank;
  StabilizerDims out;
  out.o1_cap_o2 = static_cast<int>(dim) - rank;
  out.z_g = centralizer_dim(spectrum(tau2(l1, l2), tol), tol.cluster);
  return out;
}

/// Conjugators c_s = g_{s+1}^{-1} (g_{s+1} a frame of L_{s+1}) that make both
/// gamma_s and gamma_{s+1} symmetric, gamma_s = tau2(L_s, L_{s+1}).
inline std::vector<UnitaryMatrix> pairwise_symmetrizers(const LagrangianTuple& lambda,
                                                        const Tolerances& tol = {}) {
  std::vector<UnitaryMatrix> out;
  out.reserve(lambda.size());
  for (std::size_t s = 0; s < lambda.size(); ++s)
    out.push_back(lambda.cyclic(s + 1).frame(tol).inverse());
  return out;
}

/// max over s of the symmetry defects of c_s gamma_s c_s^{-1} and
/// c_s gamma_{s+1} c_s^{-1}.
inline double symmetrizer_defect(const LagrangianTuple& lambda,
                                 const std::vector<UnitaryMatrix>& conjugators) {
  detail::require(conjugators.size() == lambda.size(), "symmetrizer_defect: size mismatch");
  double worst = 0.0;
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    const CMatrix& c = conjugators[s].matrix();
    const CMatrix a = tau2(lambda.cyclic(s), lambda.cyclic(s + 1)).matrix();
    const CMatrix b = tau2(lambda.cyclic(s + 1), lambda.cyclic(s + 2)).matrix();
    worst = std::max(worst, symmetry_defect(c * a * c.adjoint()));
    worst = std::max(worst, symmetry_defect(c * b * c.adjoint()));
  }
  return worst;
}

}  // namespace lagrep
