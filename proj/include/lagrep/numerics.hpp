#pragma once

// Dense complex/real matrix contracts shared by every other header:
// spectra of unitary matrices, signatures, simultaneous diagonalization,
// Takagi-style factorization of symmetric unitary matrices, Haar sampling,
// and the conjugacy-class distance used by the solvers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lagrep/error.hpp"

namespace lagrep {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerances used throughout the library. Every operation accepts an
/// override; these are the defaults.
struct Tolerances {
  double unitarity = 1e-10;   // ||A*A - I||_F
  double symmetry = 1e-10;    // ||M - M^T||_F
  double angle_snap = 1e-9;   // angles this close to 0 (circularly) become 0
  double cluster = 1e-7;      // circular distance below which angles coincide
  double rank = 1e-8;         // relative singular value cutoff
  double relation = 1e-8;     // ||gamma_1 ... gamma_l - I||_F
};

struct Seed {
  std::uint64_t value = 0;
};

// ---------------------------------------------------------------------------
// Unitary matrices

inline double unitarity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a.adjoint() * a - CMatrix::Identity(a.rows(), a.cols())).norm();
}

class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;

  explicit UnitaryMatrix(CMatrix m, double tol = Tolerances{}.unitarity)
      : m_(std::move(m)) {
    detail::require(m_.rows() == m_.cols() && m_.rows() > 0,
                    "unitary matrix must be square and non-empty");
    const double defect = unitarity_defect(m_);
    if (!(defect <= tol))
      throw InputError("matrix is not unitary: ||A*A - I||_F = " +
                       std::to_string(defect));
  }

  /// Wraps a matrix produced by a computation that is unitary by
  /// construction; skips the check.
  static UnitaryMatrix trusted(CMatrix m) {
    UnitaryMatrix u;
    u.m_ = std::move(m);
    return u;
  }

  static UnitaryMatrix identity(Index n) {
    return trusted(CMatrix::Identity(n, n));
  }

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  UnitaryMatrix inverse() const { return trusted(m_.adjoint()); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return trusted(a.m_ * b.m_);
  }

 private:
  CMatrix m_;
};

// ---------------------------------------------------------------------------
// Angles and spectra

/// Maps an angle (in turns) to [0, 1); values within `snap` of an integer
/// become exactly 0.
inline double wrap_angle(double a, double snap = Tolerances{}.angle_snap) {
  double w = a - std::floor(a);
  if (w >= 1.0) w = 0.0;
  if (w < snap || 1.0 - w < snap) w = 0.0;
  return w;
}

/// Circular distance between two angles measured in turns.
inline double circular_distance(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

inline cplx unit_phase(double turns) {
  return std::polar(1.0, kTwoPi * turns);
}

/// Eigenvalue angles exp(2 pi i alpha_j), ascending in [0, 1).
struct Spectrum {
  std::vector<double> alpha;

  Index n() const { return static_cast<Index>(alpha.size()); }
  bool operator==(const Spectrum&) const = default;
};

/// Unitary diagonalization of a normal matrix through the complex Schur
/// form. Columns of `u` are orthonormal eigenvectors, `d` the eigenvalues.
struct NormalDiagonalization {
  CMatrix u;
  CVector d;
};

inline NormalDiagonalization diagonalize_normal(const CMatrix& a) {
  Eigen::ComplexSchur<CMatrix> schur(a, true);
  if (schur.info() != Eigen::Success)
    throw NumericalError("complex Schur decomposition did not converge");
  return {schur.matrixU(), schur.matrixT().diagonal()};
}

/// Spectrum together with the matching eigenvectors: column j of `vectors`
/// belongs to `spectrum.alpha[j]`.
struct EigenSystem {
  Spectrum spectrum;
  CMatrix vectors;
};

inline EigenSystem eigensystem(const UnitaryMatrix& a, const Tolerances& tol = {}) {
  const double defect = unitarity_defect(a.matrix());
  if (!(defect <= tol.unitarity))
    throw InputError("spectrum: matrix is not unitary: ||A*A - I||_F = " +
                     std::to_string(defect));
  const auto nd = diagonalize_normal(a.matrix());
  const Index n = a.dim();
  std::vector<std::pair<double, Index>> angles;
  angles.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j)
    angles.emplace_back(wrap_angle(std::arg(nd.d(j)) / kTwoPi, tol.angle_snap), j);
  std::sort(angles.begin(), angles.end());
  EigenSystem out;
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.spectrum.alpha.push_back(angles[static_cast<std::size_t>(j)].first);
    out.vectors.col(j) = nd.u.col(angles[static_cast<std::size_t>(j)].second);
  }
  return out;
}

inline Spectrum spectrum(const UnitaryMatrix& a, const Tolerances& tol = {}) {
  return eigensystem(a, tol).spectrum;
}

/// Number of angles within `cluster` (circularly) of zero.
inline int zero_multiplicity(const Spectrum& s, double cluster = Tolerances{}.cluster) {
  int count = 0;
  for (double a : s.alpha)
    if (circular_distance(a, 0.0) < cluster) ++count;
  return count;
}

/// Sizes of the groups of (circularly) coinciding angles.
inline std::vector<int> cluster_sizes(const Spectrum& s,
                                      double cluster = Tolerances{}.cluster) {
  std::vector<int> sizes;
  const auto& a = s.alpha;
  if (a.empty()) return sizes;
  std::size_t start = 0;
  for (std::size_t j = 1; j <= a.size(); ++j) {
    if (j == a.size() || a[j] - a[j - 1] >= cluster) {
      sizes.push_back(static_cast<int>(j - start));
      start = j;
    }
  }
  // The first and last groups touch across the branch cut.
  if (sizes.size() > 1 && circular_distance(a.front(), a.back()) < cluster) {
    sizes.front() += sizes.back();
    sizes.pop_back();
  }
  return sizes;
}

/// Sum of squared multiplicities, i.e. the real dimension of the centralizer.
inline int centralizer_dim(const Spectrum& s, double cluster = Tolerances{}.cluster) {
  int d = 0;
  for (int m : cluster_sizes(s, cluster)) d += m * m;
  return d;
}

// ---------------------------------------------------------------------------
// Random sampling

inline CMatrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix z(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = cplx(re, im);
    }
  return z;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal pushed into Q.
inline UnitaryMatrix haar_unitary(Index n, Rng& rng) {
  detail::require(n >= 1, "haar_unitary: dimension must be at least 1");
  const CMatrix z = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0 ? rjj / mag : cplx(1.0));
  }
  return UnitaryMatrix::trusted(std::move(q));
}

inline UnitaryMatrix haar_unitary(Index n, Seed seed) {
  Rng rng(seed.value);
  return haar_unitary(n, rng);
}

// ---------------------------------------------------------------------------
// Signature of real symmetric forms

struct Signature {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;

  int value() const { return n_plus - n_minus; }
  bool operator==(const Signature&) const = default;
};

inline Signature signature(const RMatrix& q, double tol = 1e-8) {
  detail::require(q.rows() == q.cols(), "signature: matrix must be square");
  detail::require((q - q.transpose()).norm() <= tol * std::max(1.0, q.norm()),
                  "signature: matrix is not symmetric");
  Signature s;
  if (q.rows() == 0) return s;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (q + q.transpose()),
                                            Eigen::EigenvaluesOnly);
  for (Index i = 0; i < q.rows(); ++i) {
    const double e = es.eigenvalues()(i);
    if (e > tol) ++s.n_plus;
    else if (e < -tol) ++s.n_minus;
    else ++s.n_zero;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Symmetric unitary matrices

inline double symmetry_defect(const CMatrix& m) { return (m - m.transpose()).norm(); }

/// Real orthogonal q and unit phases with q^T M q = diag(phases), phases
/// sorted by angle in [0, 1).
struct OrthogonalDiagonalization {
  RMatrix q;
  CVector phases;
};

namespace detail {

struct LargestGap {
  double gap = 0.0;
  Index split = 0;  // first index of the upper group
};

inline LargestGap largest_gap(const RVector& ascending) {
  LargestGap g;
  for (Index i = 1; i < ascending.size(); ++i) {
    const double d = ascending(i) - ascending(i - 1);
    if (d > g.gap) g = {d, i};
  }
  return g;
}

// Splits the span of `basis` by bisecting at the largest eigenvalue gap of
// whichever of X, Y separates it best. The perturbation of each split is
// bounded by eps / gap while the phase spread it multiplies is at most a
// small multiple of the same gap, so the reconstruction stays accurate even
// for nearly coincident eigenvalues.
inline void refine_joint_basis(const RMatrix& x, const RMatrix& y, const RMatrix& basis,
                               std::vector<RMatrix>& out) {
  const Index k = basis.cols();
  if (k == 1) {
    out.push_back(basis);
    return;
  }
  RMatrix xb = basis.transpose() * x * basis;
  RMatrix yb = basis.transpose() * y * basis;
  Eigen::SelfAdjointEigenSolver<RMatrix> ex(0.5 * (xb + xb.transpose()));
  Eigen::SelfAdjointEigenSolver<RMatrix> ey(0.5 * (yb + yb.transpose()));
  const LargestGap gx = largest_gap(ex.eigenvalues());
  const LargestGap gy = largest_gap(ey.eigenvalues());
  if (std::max(gx.gap, gy.gap) < 1e-13) {
    out.push_back(basis);
    return;
  }
  const bool use_x = gx.gap >= gy.gap;
  const RMatrix rotated = basis * (use_x ? ex.eigenvectors() : ey.eigenvectors());
  const Index split = use_x ? gx.split : gy.split;
  refine_joint_basis(x, y, rotated.leftCols(split), out);
  refine_joint_basis(x, y, rotated.rightCols(k - split), out);
}

}  // namespace detail

/// Simultaneously diagonalizes the commuting real and imaginary parts of a
/// symmetric unitary matrix by a real orthogonal change of basis.
inline OrthogonalDiagonalization orthogonal_diagonalize(const CMatrix& m,
                                                        const Tolerances& tol = {}) {
  detail::require(m.rows() == m.cols() && m.rows() > 0,
                  "orthogonal_diagonalize: matrix must be square and non-empty");
  const double sym = symmetry_defect(m);
  if (!(sym <= tol.symmetry))
    throw InputError("matrix is not symmetric: ||M - M^T||_F = " + std::to_string(sym));
  const double uni = unitarity_defect(m);
  if (!(uni <= tol.unitarity))
    throw InputError("matrix is not unitary: ||M*M - I||_F = " + std::to_string(uni));

  const Index n = m.rows();
  const RMatrix x = 0.5 * (m.real() + m.real().transpose());
  const RMatrix y = 0.5 * (m.imag() + m.imag().transpose());
  const double commutator = (x * y - y * x).norm();
  if (commutator > 1e-8)
    throw NumericalError("real and imaginary parts do not commute: ||[X,Y]||_F = " +
                         std::to_string(commutator));

  std::vector<RMatrix> blocks;
  detail::refine_joint_basis(x, y, RMatrix::Identity(n, n), blocks);
  RMatrix q(n, n);
  Index col = 0;
  for (const auto& b : blocks) {
    q.middleCols(col, b.cols()) = b;
    col += b.cols();
  }

  const CMatrix d = q.transpose().cast<cplx>() * m * q.cast<cplx>();
  const double off = (d - CMatrix(d.diagonal().asDiagonal())).norm();
  if (off > 1e-8)
    throw NumericalError("simultaneous diagonalization failed: off-diagonal mass " +
                         std::to_string(off));

  std::vector<std::pair<double, Index>> order;
  for (Index j = 0; j < n; ++j)
    order.emplace_back(wrap_angle(std::arg(d(j, j)) / kTwoPi, 0.0), j);
  std::sort(order.begin(), order.end());
  OrthogonalDiagonalization out{RMatrix(n, n), CVector(n)};
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)].second;
    out.q.col(j) = q.col(src);
    out.phases(j) = d(src, src) / std::abs(d(src, src));
  }
  return out;
}

/// Returns g with g g^T = M, built as q D^{1/2} where q^T M q = D and each
/// diagonal phase takes its principal square root (argument in [0, 2 pi)).
inline UnitaryMatrix takagi_symmetric_unitary(const CMatrix& m, const Tolerances& tol = {}) {
  const auto od = orthogonal_diagonalize(m, tol);
  const Index n = m.rows();
  CMatrix g = od.q.cast<cplx>();
  for (Index j = 0; j < n; ++j) {
    double theta = std::arg(od.phases(j));
    if (theta < 0.0) theta += kTwoPi;
    g.col(j) *= std::polar(1.0, 0.5 * theta);
  }
  const double err = (g * g.transpose() - m).norm();
  if (err > 1e-9)
    throw NumericalError("takagi factorization residual " + std::to_string(err));
  return UnitaryMatrix::trusted(std::move(g));
}

// ---------------------------------------------------------------------------
// Conjugacy-class distance

/// sum_j |e^{2 pi i a_j} - e^{2 pi i b_{m(j)}}|^2 minimized over cyclic
/// matchings m of the two sorted angle lists.
inline double spectrum_distance(const Spectrum& a, const Spectrum& b) {
  detail::require(a.n() == b.n(), "class_distance: dimension mismatch");
  const std::size_t n = a.alpha.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t shift = 0; shift < n; ++shift) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      total += std::norm(unit_phase(a.alpha[j]) - unit_phase(b.alpha[(j + shift) % n]));
    best = std::min(best, total);
  }
  return n == 0 ? 0.0 : best;
}

inline double class_distance(const UnitaryMatrix& a, const Spectrum& target,
                             const Tolerances& tol = {}) {
  detail::require(a.dim() == target.n(), "class_distance: dimension mismatch");
  return spectrum_distance(spectrum(a, tol), target);
}

// ---------------------------------------------------------------------------
// The Lie algebra u(n)

/// Real coordinates of a skew-hermitian matrix in a basis orthonormal for
/// <X, Y> = -Re Tr(XY): i E_jj, (E_jk - E_kj)/sqrt2, i (E_jk + E_kj)/sqrt2.
inline RVector skew_coords(const CMatrix& x) {
  const Index n = x.rows();
  RVector v(n * n);
  Index p = 0;
  for (Index j = 0; j < n; ++j) v(p++) = x(j, j).imag();
  const double r2 = std::sqrt(2.0);
  for (Index j = 0; j < n; ++j)
    for (Index k = j + 1; k < n; ++k) {
      v(p++) = r2 * 0.5 * (x(j, k).real() - x(k, j).real());
      v(p++) = r2 * 0.5 * (x(j, k).imag() + x(k, j).imag());
    }
  return v;
}

inline CMatrix skew_from_coords(const RVector& v, Index n) {
  CMatrix x = CMatrix::Zero(n, n);
  Index p = 0;
  for (Index j = 0; j < n; ++j) x(j, j) = cplx(0.0, v(p++));
  const double s = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < n; ++j)
    for (Index k = j + 1; k < n; ++k) {
      const double a = v(p++) * s;
      const double b = v(p++) * s;
      x(j, k) += cplx(a, b);
      x(k, j) += cplx(-a, b);
    }
  return x;
}

/// Basis element `index` of u(n) in the coordinates above.
inline CMatrix skew_basis(Index index, Index n) {
  RVector e = RVector::Zero(n * n);
  e(index) = 1.0;
  return skew_from_coords(e, n);
}

inline bool is_skew_hermitian(const CMatrix& x, double tol = 1e-10) {
  return x.rows() == x.cols() && (x + x.adjoint()).norm() <= tol * std::max(1.0, x.norm());
}

inline CMatrix random_skew(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RVector v(n * n);
  for (Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  return skew_from_coords(v, n);
}

/// exp(X) for skew-hermitian X via the eigendecomposition of -iX.
inline CMatrix expm_skew(const CMatrix& x) {
  const CMatrix h = cplx(0.0, -1.0) * x;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  CVector phases(x.rows());
  for (Index j = 0; j < x.rows(); ++j) phases(j) = std::polar(1.0, es.eigenvalues()(j));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Rank and kernels

struct RankInfo {
  int rank = 0;
  double gap_ratio = 0.0;  // sigma_rank / sigma_{rank+1}; infinite at full rank
  RVector singular_values;
};

/// Numerical rank: singular values above `rel_cutoff` times the largest.
inline RankInfo numerical_rank(const RMatrix& a, double rel_cutoff) {
  RankInfo info;
  if (a.size() == 0) return info;
  Eigen::JacobiSVD<RMatrix> svd(a);
  info.singular_values = svd.singularValues();
  const auto& s = info.singular_values;
  const double smax = s.size() > 0 ? s(0) : 0.0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_cutoff * smax && smax > 0.0) ++info.rank;
  if (info.rank == 0) {
    info.gap_ratio = 0.0;
  } else if (info.rank >= s.size()) {
    info.gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double below = s(info.rank);
    info.gap_ratio = below > 0.0 ? s(info.rank - 1) / below
                                 : std::numeric_limits<double>::infinity();
  }
  return info;
}

/// Orthonormal basis of the numerical kernel of `a` (columns).
inline RMatrix null_space(const RMatrix& a, double rel_cutoff) {
  const Index cols = a.cols();
  if (a.rows() == 0) return RMatrix::Identity(cols, cols);
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s(i) > rel_cutoff * smax) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

}  // namespace lagrep
