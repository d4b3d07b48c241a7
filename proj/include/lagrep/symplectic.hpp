#pragma once

// The quasi-Hamiltonian 2-form on a product of conjugacy classes and the
// numerical isotropy test for fixed-class Lagrangian deformations.

#include <algorithm>
#include <cmath>
#include <vector>

#include "lagrep/representation.hpp"

namespace lagrep {

/// <X, Y> = -Re Tr(XY).
inline double lie_inner(const CMatrix& x, const CMatrix& y) {
  detail::require(x.rows() == y.rows() && x.cols() == y.cols(), "lie_inner: dimension mismatch");
  return -(x.cwiseProduct(y.transpose())).sum().real();
}

/// Generators xi_s with X_s = (I - Ad_{gamma_s}) xi_s.
struct ClassTangent {
  std::vector<CMatrix> xis;
};

/// Minimal-norm xi with (I - Ad_gamma) xi = X. Throws when X has a component
/// along the centralizer of gamma above `tol` (relative to max(1, |X|)).
inline CMatrix solve_generator(const UnitaryMatrix& gamma, const CMatrix& x, double tol = 1e-8) {
  const Index n = gamma.dim();
  detail::require(x.rows() == n && x.cols() == n, "solve_generator: dimension mismatch");
  detail::require(is_skew_hermitian(x, 1e-10), "solve_generator: X is not skew-hermitian");
  const RMatrix a = RMatrix::Identity(n * n, n * n) - detail::ad_matrix(gamma.matrix());
  const RVector b = skew_coords(x);
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Singular values of I - Ad_gamma are |1 - e^{2 pi i (a_j - a_k)}|, so the
  // cutoff separates the centralizer from everything else.
  svd.setThreshold(1e-9);
  const RVector xi = svd.solve(b);
  const double residual = (a * xi - b).norm();
  if (!(residual <= tol * std::max(1.0, b.norm())))
    throw InputError("solve_generator: X has a component along the centralizer of gamma (" +
                     std::to_string(residual) + ")");
  return skew_from_coords(xi, n);
}

inline ClassTangent class_tangent(const Representation& rho, const TangentVector& x,
                                  double tol = 1e-8) {
  detail::require(x.size() == rho.ell(), "class_tangent: length mismatch");
  ClassTangent t;
  for (std::size_t s = 0; s < rho.ell(); ++s) t.xis.push_back(solve_generator(rho[s], x[s], tol));
  return t;
}

/// The tangent components X_s = (I - Ad_{gamma_s}) xi_s.
inline TangentVector tangent_of(const Representation& rho, const ClassTangent& xi) {
  detail::require(xi.xis.size() == rho.ell(), "tangent_of: length mismatch");
  TangentVector x;
  for (std::size_t s = 0; s < rho.ell(); ++s) {
    const CMatrix& g = rho[s].matrix();
    x.push_back(xi.xis[s] - g * xi.xis[s] * g.adjoint());
  }
  return x;
}

inline double tangent_norm(const TangentVector& x) {
  double total = 0.0;
  for (const auto& xs : x) total += lie_inner(xs, xs);
  return std::sqrt(std::max(total, 0.0));
}

/// omega(xi, eta) = 1/2 { sum_s <Ad_{g_s} xi_s, eta_s>
///                       + sum_{s<t} <Ad_{P_s}(I - Ad_{g_s}) xi_s, Ad_{P_t}(I - Ad_{g_t}) eta_t> }
///                  - (xi <-> eta),   P_s = g_1 ... g_{s-1}.
inline double two_form(const Representation& rho, const ClassTangent& xi, const ClassTangent& eta) {
  detail::require(xi.xis.size() == rho.ell() && eta.xis.size() == rho.ell(),
                  "two_form: length mismatch");
  const std::size_t ell = rho.ell();
  std::vector<CMatrix> u_xi, u_eta;
  CMatrix p = CMatrix::Identity(rho.n(), rho.n());
  double diagonal = 0.0;
  for (std::size_t s = 0; s < ell; ++s) {
    const CMatrix& g = rho[s].matrix();
    detail::require(xi.xis[s].rows() == rho.n() && eta.xis[s].rows() == rho.n(),
                    "two_form: generator has the wrong shape");
    const CMatrix ad_xi = g * xi.xis[s] * g.adjoint();
    const CMatrix ad_eta = g * eta.xis[s] * g.adjoint();
    diagonal += lie_inner(ad_xi, eta.xis[s]) - lie_inner(ad_eta, xi.xis[s]);
    u_xi.push_back(p * (xi.xis[s] - ad_xi) * p.adjoint());
    u_eta.push_back(p * (eta.xis[s] - ad_eta) * p.adjoint());
    p = p * g;
  }
  double cross = 0.0;
  for (std::size_t s = 0; s < ell; ++s)
    for (std::size_t t = s + 1; t < ell; ++t)
      cross += lie_inner(u_xi[s], u_eta[t]) - lie_inner(u_eta[s], u_xi[t]);
  return 0.5 * (diagonal + cross);
}

/// |omega(xi, eta)| / (|X_xi| |X_eta|), or 0 when either tangent vanishes.
inline double normalized_two_form(const Representation& rho, const ClassTangent& xi,
                                  const ClassTangent& eta) {
  const double a = tangent_norm(tangent_of(rho, xi));
  const double b = tangent_norm(tangent_of(rho, eta));
  if (a == 0.0 || b == 0.0) return 0.0;
  return std::fabs(two_form(rho, xi, eta)) / (a * b);
}

/// A random class-preserving tangent: xi_s Gaussian in u(n).
inline ClassTangent random_class_tangent(const Representation& rho, Rng& rng) {
  ClassTangent t;
  for (std::size_t s = 0; s < rho.ell(); ++s) t.xis.push_back(random_skew(rho.n(), rng));
  return t;
}

struct IsotropyReport {
  double defect = 0.0;  // max normalized |omega| over pairs
  int directions = 0;   // dimension of the fixed-class tangent span
};

/// Fixed-class tangent directions at lambda spanned by twists and bends:
/// the kernel (relative cutoff 1e-7) of the spectral differential, pushed
/// through D phi_tilde.
inline std::vector<TangentVector> fixed_class_tangents(const LagrangianTuple& lambda,
                                                       const Tolerances& tol = {}) {
  const auto vars = twist_bend_variations(lambda, tol);
  std::vector<TangentVector> images;
  for (const auto& v : vars) images.push_back(phi_tilde_differential(lambda, v));
  const RMatrix kernel = null_space(spectral_tangent_matrix(lambda, tol), 1e-7);
  std::vector<TangentVector> out;
  for (Index c = 0; c < kernel.cols(); ++c) {
    TangentVector x(lambda.size(), CMatrix::Zero(lambda.dim(), lambda.dim()));
    for (std::size_t i = 0; i < images.size(); ++i)
      for (std::size_t s = 0; s < lambda.size(); ++s) x[s] += kernel(static_cast<Index>(i), c) * images[i][s];
    if (tangent_norm(x) > 1e-10) out.push_back(std::move(x));
  }
  return out;
}

inline IsotropyReport isotropy_defect(const LagrangianTuple& lambda, const Tolerances& tol = {}) {
  const auto rho = phi_tilde(lambda);
  if (!is_irreducible(rho, tol))
    throw InputError("isotropy_defect: the representation of the tuple is reducible");
  const auto tangents = fixed_class_tangents(lambda, tol);
  std::vector<ClassTangent> gens;
  for (const auto& x : tangents) gens.push_back(class_tangent(rho, x, 1e-7));
  IsotropyReport r;
  r.directions = static_cast<int>(gens.size());
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      r.defect = std::max(r.defect, normalized_two_form(rho, gens[a], gens[b]));
  return r;
}

}  // namespace lagrep
