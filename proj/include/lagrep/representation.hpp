#pragma once

// Representations of the punctured-sphere group (l unitaries with product
// one), the map from Lagrangian tuples, reducibility counts, twist and bend
// deformations, differentials and rank checks, and the dimension formulas.

#include <cmath>
#include <string>
#include <vector>

#include "lagrep/lagrangian.hpp"
#include "lagrep/spectra.hpp"

namespace lagrep {

class Representation {
 public:
  Representation() = default;

  /// Validates dimensions and the relation gamma_1 ... gamma_l = 1.
  explicit Representation(std::vector<UnitaryMatrix> gammas, const Tolerances& tol = {})
      : gammas_(std::move(gammas)) {
    detail::require(!gammas_.empty(), "Representation: need at least one matrix");
    for (const auto& g : gammas_) {
      detail::require(g.dim() == gammas_.front().dim(), "Representation: dimension mismatch");
      detail::require(unitarity_defect(g.matrix()) <= tol.unitarity,
                      "Representation: gamma is not unitary");
    }
    const double defect = relation_defect();
    if (!(defect <= tol.relation))
      throw InputError("Representation: ||gamma_1 ... gamma_l - I||_F = " +
                       std::to_string(defect));
  }

  static Representation trusted(std::vector<UnitaryMatrix> gammas) {
    Representation r;
    r.gammas_ = std::move(gammas);
    return r;
  }

  static Representation trivial(std::size_t ell, Index n) {
    return trusted(std::vector<UnitaryMatrix>(ell, UnitaryMatrix::identity(n)));
  }

  std::size_t ell() const { return gammas_.size(); }
  Index n() const { return gammas_.front().dim(); }
  const UnitaryMatrix& operator[](std::size_t s) const { return gammas_[s]; }
  const std::vector<UnitaryMatrix>& gammas() const { return gammas_; }

  /// gamma_1 ... gamma_s (the empty product for s = 0).
  CMatrix prefix(std::size_t s) const {
    CMatrix p = CMatrix::Identity(n(), n());
    for (std::size_t t = 0; t < s; ++t) p = p * gammas_[t].matrix();
    return p;
  }

  double relation_defect() const {
    return (prefix(ell()) - CMatrix::Identity(n(), n())).norm();
  }

 private:
  std::vector<UnitaryMatrix> gammas_;
};

/// gamma_s = tau2(L_s, L_{s+1}) cyclically.
inline Representation phi_tilde(const LagrangianTuple& lambda) {
  std::vector<UnitaryMatrix> gammas;
  for (std::size_t s = 0; s < lambda.size(); ++s)
    gammas.push_back(tau2(lambda.cyclic(s), lambda.cyclic(s + 1)));
  return Representation::trusted(std::move(gammas));
}

inline SpectrumTuple spectral_projection(const Representation& rho, const Tolerances& tol = {}) {
  const double defect = rho.relation_defect();
  if (!(defect <= tol.relation))
    throw InputError("spectral_projection: relation violated by " + std::to_string(defect));
  std::vector<Spectrum> rows;
  for (const auto& g : rho.gammas()) rows.push_back(spectrum(g, tol));
  return SpectrumTuple::from_spectra(rows);
}

// ---------------------------------------------------------------------------
// Reducibility

namespace detail {

// Real matrix of X -> g X g^{-1} on u(n) in skew coordinates.
inline RMatrix ad_matrix(const CMatrix& g) {
  const Index n = g.rows();
  RMatrix a(n * n, n * n);
  for (Index i = 0; i < n * n; ++i)
    a.col(i) = skew_coords(g * skew_basis(i, n) * g.adjoint());
  return a;
}

inline int absolute_rank(const RMatrix& a, double cutoff) {
  Eigen::JacobiSVD<RMatrix> svd(a);
  int rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff) ++rank;
  return rank;
}

}  // namespace detail

/// Real dimension of the commutant of rho inside u(n); 1 iff irreducible.
inline int commutant_dim(const Representation& rho, const Tolerances& tol = {}) {
  const Index d = rho.n() * rho.n();
  RMatrix stacked(d * static_cast<Index>(rho.ell()), d);
  for (std::size_t s = 0; s < rho.ell(); ++s)
    stacked.middleRows(static_cast<Index>(s) * d, d) =
        detail::ad_matrix(rho[s].matrix()) - RMatrix::Identity(d, d);
  return static_cast<int>(d) - detail::absolute_rank(stacked, tol.rank);
}

inline bool is_irreducible(const Representation& rho, const Tolerances& tol = {}) {
  return commutant_dim(rho, tol) == 1;
}

/// Complex dimension of the common fixed space of all gamma_s.
inline int n0(const Representation& rho, const Tolerances& tol = {}) {
  const Index n = rho.n();
  CMatrix stacked(n * static_cast<Index>(rho.ell()), n);
  for (std::size_t s = 0; s < rho.ell(); ++s)
    stacked.middleRows(static_cast<Index>(s) * n, n) = rho[s].matrix() - CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  int rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol.rank) ++rank;
  return static_cast<int>(n) - rank;
}

/// Total multiplicity of the angle 0 over all gamma_s.
inline int n1(const Representation& rho, const Tolerances& tol = {}) {
  int total = 0;
  for (const auto& g : rho.gammas()) total += zero_multiplicity(spectrum(g, tol), tol.cluster);
  return total;
}

inline Representation direct_sum(const Representation& a, const Representation& b) {
  detail::require(a.ell() == b.ell(), "direct_sum: lengths differ");
  std::vector<UnitaryMatrix> gammas;
  const Index n = a.n() + b.n();
  for (std::size_t s = 0; s < a.ell(); ++s) {
    CMatrix g = CMatrix::Zero(n, n);
    g.topLeftCorner(a.n(), a.n()) = a[s].matrix();
    g.bottomRightCorner(b.n(), b.n()) = b[s].matrix();
    gammas.push_back(UnitaryMatrix::trusted(std::move(g)));
  }
  return Representation::trusted(std::move(gammas));
}

inline LagrangianTuple direct_sum(const LagrangianTuple& a, const LagrangianTuple& b) {
  detail::require(a.size() == b.size(), "direct_sum: lengths differ");
  std::vector<Lagrangian> items;
  const Index n = a.dim() + b.dim();
  for (std::size_t s = 0; s < a.size(); ++s) {
    CMatrix m = CMatrix::Zero(n, n);
    m.topLeftCorner(a.dim(), a.dim()) = a[s].matrix();
    m.bottomRightCorner(b.dim(), b.dim()) = b[s].matrix();
    items.push_back(Lagrangian::trusted(std::move(m)));
  }
  return LagrangianTuple(std::move(items));
}

// ---------------------------------------------------------------------------
// Deformations

/// M_s -> t_s^2 M_s for unit complex t_s.
inline LagrangianTuple twist(const LagrangianTuple& lambda, const std::vector<cplx>& phases) {
  detail::require(phases.size() == lambda.size(), "twist: one phase per Lagrangian required");
  std::vector<Lagrangian> items;
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    detail::require(std::fabs(std::abs(phases[s]) - 1.0) <= 1e-12,
                    "twist: phase " + std::to_string(s) + " is not of unit modulus");
    items.push_back(Lagrangian::trusted(phases[s] * phases[s] * lambda[s].matrix()));
  }
  return LagrangianTuple(std::move(items));
}

/// Replaces L_{s+1}, ..., L_{s+r} (indices mod l, 0-based) by b L with
/// b = g_s exp(A) g_s^{-1} in the stabilizer of L_s; A real antisymmetric.
inline LagrangianTuple bend(const LagrangianTuple& lambda, std::size_t s, std::size_t r,
                            const RMatrix& a, const Tolerances& tol = {}) {
  detail::require(s < lambda.size(), "bend: index out of range");
  detail::require(r >= 1 && r <= lambda.size(), "bend: length must lie in [1, l]");
  detail::require(a.rows() == lambda.dim() && a.cols() == lambda.dim(),
                  "bend: parameter has the wrong shape");
  detail::require((a + a.transpose()).norm() <= 1e-12 * std::max(1.0, a.norm()),
                  "bend: parameter is not real antisymmetric");
  const CMatrix g = lambda[s].frame(tol).matrix();
  const CMatrix b = g * expm_skew(a.cast<cplx>()) * g.adjoint();
  std::vector<Lagrangian> items = lambda.items();
  for (std::size_t k = 1; k <= r; ++k) {
    auto& item = items[(s + k) % lambda.size()];
    item = item.transformed(b);
  }
  return LagrangianTuple(std::move(items));
}

// ---------------------------------------------------------------------------
// Tangent vectors

/// A tangent vector to Hom: X_s = gamma_s' gamma_s^{-1}.
using TangentVector = std::vector<CMatrix>;

/// || X_1 + Ad_{g1} X_2 + ... + Ad_{g1...g_{l-1}} X_l ||_F.
inline double cocycle_defect(const Representation& rho, const TangentVector& x) {
  detail::require(x.size() == rho.ell(), "cocycle_defect: length mismatch");
  CMatrix total = CMatrix::Zero(rho.n(), rho.n());
  CMatrix p = CMatrix::Identity(rho.n(), rho.n());
  for (std::size_t s = 0; s < rho.ell(); ++s) {
    total += p * x[s] * p.adjoint();
    p = p * rho[s].matrix();
  }
  return total.norm();
}

/// A tangent vector to the tuple: L_s moves as exp(t Y_s) L_s, Y_s in u(n).
using LagrangianVariation = std::vector<CMatrix>;

/// Image of a variation under the differential of phi_tilde:
/// X_s = Y_s - Ad_{sigma_s} Y_s + Ad_{sigma_s} Y_{s+1} - Ad_{gamma_s} Y_{s+1}.
inline TangentVector phi_tilde_differential(const LagrangianTuple& lambda,
                                            const LagrangianVariation& y) {
  detail::require(y.size() == lambda.size(), "phi_tilde_differential: length mismatch");
  TangentVector x;
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    const CMatrix& m = lambda[s].matrix();
    const CMatrix& next = y[(s + 1) % y.size()];
    const CMatrix gamma = tau2(lambda.cyclic(s), lambda.cyclic(s + 1)).matrix();
    x.push_back(y[s] - detail::ad_involution(m, y[s]) + detail::ad_involution(m, next) -
                gamma * next * gamma.adjoint());
  }
  return x;
}

/// The same tangent by central differences of phi_tilde along the variation.
inline TangentVector phi_tilde_differential_fd(const LagrangianTuple& lambda,
                                               const LagrangianVariation& y, double h = 1e-5) {
  detail::require(y.size() == lambda.size(), "phi_tilde_differential_fd: length mismatch");
  auto moved = [&](double t) {
    std::vector<Lagrangian> items;
    for (std::size_t s = 0; s < lambda.size(); ++s) items.push_back(lambda[s].transformed(expm_skew(t * y[s])));
    return phi_tilde(LagrangianTuple(std::move(items)));
  };
  const auto plus = moved(h);
  const auto minus = moved(-h);
  const auto base = phi_tilde(lambda);
  TangentVector x;
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    CMatrix d = (plus[s].matrix() - minus[s].matrix()) / (2.0 * h);
    CMatrix xs = d * base[s].matrix().adjoint();
    x.push_back(0.5 * (xs - xs.adjoint()));
  }
  return x;
}

/// Variations g (iS) g^{-1} at L (g a frame, S running over an orthonormal
/// basis of real symmetric matrices): the n(n+1)/2 directions transverse
/// to the stabilizer of L.
inline std::vector<CMatrix> lagrangian_directions(const Lagrangian& l, const Tolerances& tol = {}) {
  const Index n = l.dim();
  const CMatrix g = l.frame(tol).matrix();
  std::vector<CMatrix> out;
  const cplx i(0.0, 1.0);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < n; ++j) {
    CMatrix e = CMatrix::Zero(n, n);
    e(j, j) = i;
    out.push_back(g * e * g.adjoint());
  }
  for (Index j = 0; j < n; ++j)
    for (Index k = j + 1; k < n; ++k) {
      CMatrix e = CMatrix::Zero(n, n);
      e(j, k) = e(k, j) = i * r2;
      out.push_back(g * e * g.adjoint());
    }
  return out;
}

/// Stabilizer directions g A g^{-1} at L, A over an orthonormal basis of o(n).
inline std::vector<CMatrix> stabilizer_directions(const Lagrangian& l, const Tolerances& tol = {}) {
  const Index n = l.dim();
  const CMatrix g = l.frame(tol).matrix();
  std::vector<CMatrix> out;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < n; ++j)
    for (Index k = j + 1; k < n; ++k) {
      CMatrix e = CMatrix::Zero(n, n);
      e(j, k) = r2;
      e(k, j) = -r2;
      out.push_back(g * e * g.adjoint());
    }
  return out;
}

enum class Differential { analytic, finite_difference };

/// Real Jacobian of phi_tilde: columns indexed by (s, direction at L_s),
/// rows by (s, skew coordinate of X_s).
inline RMatrix phi_tilde_jacobian(const LagrangianTuple& lambda,
                                  Differential method = Differential::analytic,
                                  const Tolerances& tol = {}) {
  const Index n = lambda.dim();
  const std::size_t ell = lambda.size();
  const Index per = n * (n + 1) / 2;
  RMatrix j(static_cast<Index>(ell) * n * n, static_cast<Index>(ell) * per);
  Index col = 0;
  for (std::size_t s = 0; s < ell; ++s) {
    for (const auto& dir : lagrangian_directions(lambda[s], tol)) {
      LagrangianVariation y(ell, CMatrix::Zero(n, n));
      y[s] = dir;
      const auto x = method == Differential::analytic ? phi_tilde_differential(lambda, y)
                                                      : phi_tilde_differential_fd(lambda, y);
      for (std::size_t t = 0; t < ell; ++t)
        j.block(static_cast<Index>(t) * n * n, col, n * n, 1) = skew_coords(x[t]);
      ++col;
    }
  }
  return j;
}

struct JacobianRank {
  int rank = 0;
  int domain_dim = 0;
  double gap_ratio = 0.0;
};

/// Rank of D phi_tilde at an irreducible tuple (relative singular value
/// cutoff 1e-6). Expected: l n(n+1)/2 - 1.
inline JacobianRank jacobian_rank(const LagrangianTuple& lambda,
                                  Differential method = Differential::analytic,
                                  bool require_irreducible = true, const Tolerances& tol = {}) {
  if (require_irreducible && !is_irreducible(phi_tilde(lambda), tol))
    throw InputError("jacobian_rank: the representation of the tuple is reducible");
  const RMatrix j = phi_tilde_jacobian(lambda, method, tol);
  const RankInfo info = numerical_rank(j, 1e-6);
  return {info.rank, static_cast<int>(j.cols()), info.gap_ratio};
}

// ---------------------------------------------------------------------------
// Spectral differential

/// Variations generating twists and real bends at lambda: one twist per
/// Lagrangian (Y_s = i I) and, for each s, each length 1 <= r < l and each
/// stabilizer direction B at L_s, the bend Y_{s+1} = ... = Y_{s+r} = B.
inline std::vector<LagrangianVariation> twist_bend_variations(const LagrangianTuple& lambda,
                                                              const Tolerances& tol = {}) {
  const Index n = lambda.dim();
  const std::size_t ell = lambda.size();
  std::vector<LagrangianVariation> out;
  for (std::size_t s = 0; s < ell; ++s) {
    LagrangianVariation y(ell, CMatrix::Zero(n, n));
    y[s] = cplx(0.0, 1.0) * CMatrix::Identity(n, n);
    out.push_back(std::move(y));
  }
  for (std::size_t s = 0; s < ell; ++s) {
    const auto dirs = stabilizer_directions(lambda[s], tol);
    for (std::size_t r = 1; r < ell; ++r)
      for (const auto& b : dirs) {
        LagrangianVariation y(ell, CMatrix::Zero(n, n));
        for (std::size_t k = 1; k <= r; ++k) y[(s + k) % ell] = b;
        out.push_back(std::move(y));
      }
  }
  return out;
}

/// Derivatives of all angles along a tangent X (gamma_s' = X_s gamma_s):
/// alpha_j' = Im(v_j^* X v_j) / 2 pi. Requires simple spectra.
inline RVector spectral_derivative(const Representation& rho, const TangentVector& x,
                                   const Tolerances& tol = {}) {
  const Index n = rho.n();
  RVector d(static_cast<Index>(rho.ell()) * n);
  for (std::size_t s = 0; s < rho.ell(); ++s) {
    const auto es = eigensystem(rho[s], tol);
    for (Index j = 0; j < n; ++j) {
      const CVector v = es.vectors.col(j);
      d(static_cast<Index>(s) * n + j) = (v.adjoint() * x[s] * v)(0, 0).imag() / kTwoPi;
    }
  }
  return d;
}

inline bool has_simple_spectra(const Representation& rho, const Tolerances& tol = {}) {
  for (const auto& g : rho.gammas())
    if (centralizer_dim(spectrum(g, tol), tol.cluster) != g.dim()) return false;
  return true;
}

/// Matrix of the spectral differential over the twist and bend variations:
/// rows (s, j), one column per variation.
inline RMatrix spectral_tangent_matrix(const LagrangianTuple& lambda, const Tolerances& tol = {}) {
  const auto rho = phi_tilde(lambda);
  if (!has_simple_spectra(rho, tol))
    throw InputError("spectral_tangent_rank: a factor has a multiple eigenvalue");
  const auto vars = twist_bend_variations(lambda, tol);
  RMatrix m(static_cast<Index>(lambda.size()) * lambda.dim(), static_cast<Index>(vars.size()));
  for (std::size_t c = 0; c < vars.size(); ++c)
    m.col(static_cast<Index>(c)) = spectral_derivative(rho, phi_tilde_differential(lambda, vars[c]), tol);
  return m;
}

/// Rank of the spectral differential over twists and bends (relative
/// singular value cutoff 1e-6). Generic irreducible value: l n - 1.
inline JacobianRank spectral_tangent_rank(const LagrangianTuple& lambda, const Tolerances& tol = {}) {
  const RMatrix m = spectral_tangent_matrix(lambda, tol);
  const RankInfo info = numerical_rank(m, 1e-6);
  return {info.rank, static_cast<int>(m.cols()), info.gap_ratio};
}

// ---------------------------------------------------------------------------
// Dimension formulas

struct ExpectedDimensions {
  double rep_irr = 0;            // (l-2) n^2 + 2 - sum mu^2
  double lrep_irr = 0;           // (l-2)/2 n^2 + 1 - sum mu^2 / 2
  double lagrangian_tuples = 0;  // l n(n+1)/2
  double lhom_irr = 0;           // l n(n+1)/2 - 1, confirmed by the rank of D phi_tilde
  double lhom_irr_stated = 0;    // (l-1)/2 n^2 + l/2 n - 1, the alternative closed form
  double lrep_irr_total = 0;     // (l-2)/2 n^2 + l n / 2
};

inline ExpectedDimensions expected_dimensions(int n, int ell, const MultiplicityStructure& m) {
  detail::require(n >= 1 && ell >= 2, "expected_dimensions: need n >= 1 and l >= 2");
  detail::require(static_cast<int>(m.partitions.size()) == ell,
                  "expected_dimensions: structure has the wrong number of rows");
  for (std::size_t s = 0; s < m.partitions.size(); ++s) {
    const auto& p = m.partitions[s];
    detail::require(p.size() >= 2 && p.front() == 0 && p.back() == n,
                    "expected_dimensions: partition must run from 0 to n");
    for (std::size_t j = 1; j < p.size(); ++j)
      detail::require(p[j] > p[j - 1], "expected_dimensions: breakpoints must increase");
  }
  const double nn = n;
  const double l = ell;
  const double sq = m.sum_squares();
  ExpectedDimensions d;
  d.rep_irr = (l - 2) * nn * nn + 2 - sq;
  d.lrep_irr = (l - 2) / 2 * nn * nn + 1 - sq / 2;
  d.lagrangian_tuples = l * nn * (nn + 1) / 2;
  d.lhom_irr = d.lagrangian_tuples - 1;
  d.lhom_irr_stated = (l - 1) / 2 * nn * nn + l / 2 * nn - 1;
  d.lrep_irr_total = (l - 2) / 2 * nn * nn + l * nn / 2;
  return d;
}

}  // namespace lagrep
