#pragma once

// Numerical realization of spectrum tuples by unitary and by Lagrangian
// representations (Levenberg-Marquardt on products of unitary groups with
// random restarts), gluing of Lagrangian solutions, and chamber scans.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <set>
#include <vector>

#include "lagrep/representation.hpp"
#include "lagrep/spectra.hpp"

namespace lagrep {

struct SolveOptions {
  int max_iters = 2000;
  int restarts = 50;
  double step = 1e-3;           // initial damping relative to max diag(J^T J)
  double tol_residual = 1e-8;
  Seed seed{0};
};

template <class Witness>
struct SolveOutcome {
  bool success = false;
  std::optional<Witness> witness;  // best candidate, present unless the input was rejected
  double residual = std::numeric_limits<double>::infinity();
  int restarts_used = 0;
  std::string reason;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for restart k; streams for k < K do not depend on K.
inline Rng restart_rng(Seed seed, int k) {
  return Rng(splitmix64(seed.value ^ splitmix64(static_cast<std::uint64_t>(k) + 1)));
}

struct LmReport {
  double f = 0.0;
  int iterations = 0;
};

// Minimizes |r(x)|^2. Stops at f <= floor, on stagnation (less than 0.1%
// progress over 40 iterations while above `target`), or when the damping
// explodes.
template <class Problem>
LmReport levenberg_marquardt(const Problem& p, typename Problem::State& x, int max_iters,
                             double target, double damping, double floor = 1e-28) {
  RVector r = p.residual(x);
  double f = r.squaredNorm();
  RMatrix j = p.jacobian(x);
  RMatrix a = j.transpose() * j;
  RVector g = j.transpose() * r;
  double mu = damping * std::max(a.diagonal().maxCoeff(), 1e-12);
  double nu = 2.0;
  double checkpoint = f;
  int polish = 0;
  LmReport rep;
  for (int it = 0; it < max_iters; ++it) {
    rep.iterations = it + 1;
    if (f <= floor) break;
    if (f <= target && ++polish > 30) break;
    if (it % 40 == 39) {
      if (f > target && f > 0.999 * checkpoint) break;
      checkpoint = f;
    }
    RMatrix lhs = a;
    lhs.diagonal().array() += mu;
    const RVector h = lhs.ldlt().solve(-g);
    if (h.norm() < 1e-15) break;
    auto candidate = p.retract(x, h);
    const RVector rn = p.residual(candidate);
    const double fn = rn.squaredNorm();
    const double predicted = h.dot(mu * h - g);
    const double gain = predicted > 0.0 ? (f - fn) / predicted : -1.0;
    if (gain > 0.0) {
      x = std::move(candidate);
      r = rn;
      f = fn;
      j = p.jacobian(x);
      a = j.transpose() * j;
      g = j.transpose() * r;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * gain - 1.0, 3));
      nu = 2.0;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (mu > 1e16) break;
    }
  }
  rep.f = f;
  return rep;
}

// Reorthonormalizes a nearly unitary matrix (QR with unit-phase diagonal).
inline CMatrix reunitarize(const CMatrix& m) {
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), m.cols());
  const CMatrix& rr = qr.matrixQR();
  for (Index k = 0; k < m.cols(); ++k) {
    const cplx d = rr(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

inline CMatrix diagonal_class(const std::vector<double>& alpha) {
  CVector d(static_cast<Index>(alpha.size()));
  for (std::size_t j = 0; j < alpha.size(); ++j) d(static_cast<Index>(j)) = unit_phase(alpha[j]);
  return d.asDiagonal();
}

// gamma_s = V_s D_s V_s^*, residual P - I with P the ordered product.
struct UnitaryProblem {
  using State = std::vector<CMatrix>;
  std::vector<CMatrix> d;
  Index n = 0;

  std::vector<CMatrix> gammas(const State& v) const {
    std::vector<CMatrix> g;
    for (std::size_t s = 0; s < v.size(); ++s) g.push_back(v[s] * d[s] * v[s].adjoint());
    return g;
  }

  static RVector flatten(const CMatrix& m) {
    RVector r(2 * m.size());
    for (Index i = 0; i < m.size(); ++i) {
      r(2 * i) = m(i).real();
      r(2 * i + 1) = m(i).imag();
    }
    return r;
  }

  RVector residual(const State& v) const {
    CMatrix p = CMatrix::Identity(n, n);
    for (const auto& g : gammas(v)) p = p * g;
    return flatten(p - CMatrix::Identity(n, n));
  }

  RMatrix jacobian(const State& v) const {
    const auto g = gammas(v);
    const std::size_t ell = g.size();
    std::vector<CMatrix> prefix(ell + 1, CMatrix::Identity(n, n));
    std::vector<CMatrix> suffix(ell + 1, CMatrix::Identity(n, n));
    for (std::size_t s = 0; s < ell; ++s) prefix[s + 1] = prefix[s] * g[s];
    for (std::size_t s = ell; s-- > 0;) suffix[s] = g[s] * suffix[s + 1];
    RMatrix jac(2 * n * n, static_cast<Index>(ell) * n * n);
    for (std::size_t s = 0; s < ell; ++s)
      for (Index b = 0; b < n * n; ++b) {
        const CMatrix z = skew_basis(b, n);
        const CMatrix dp = prefix[s] * (z * g[s] - g[s] * z) * suffix[s + 1];
        jac.col(static_cast<Index>(s) * n * n + b) = flatten(dp);
      }
    return jac;
  }

  State retract(const State& v, const RVector& h) const {
    State out = v;
    for (std::size_t s = 0; s < v.size(); ++s)
      out[s] = reunitarize(expm_skew(skew_from_coords(h.segment(static_cast<Index>(s) * n * n, n * n), n)) * v[s]);
    return out;
  }
};

// Frames g_s with M_s = g_s g_s^T; residual (Tr gamma_s^k - target_k) / k.
struct LagrangianProblem {
  using State = std::vector<CMatrix>;
  std::vector<std::vector<cplx>> power_sums;  // per s, k = 1..n
  Index n = 0;

  static std::vector<cplx> target_power_sums(const std::vector<double>& alpha) {
    std::vector<cplx> out;
    for (std::size_t k = 1; k <= alpha.size(); ++k) {
      cplx total = 0.0;
      for (double a : alpha) total += unit_phase(static_cast<double>(k) * a);
      out.push_back(total);
    }
    return out;
  }

  static std::vector<CMatrix> lagrangians(const State& g) {
    std::vector<CMatrix> m;
    for (const auto& f : g) {
      CMatrix x = f * f.transpose();
      m.push_back(0.5 * (x + x.transpose()));
    }
    return m;
  }

  static std::vector<CMatrix> gammas(const std::vector<CMatrix>& m) {
    std::vector<CMatrix> g;
    for (std::size_t s = 0; s < m.size(); ++s) g.push_back(m[s] * m[(s + 1) % m.size()].conjugate());
    return g;
  }

  Index per() const { return n * (n + 1) / 2; }

  // Real symmetric basis element b, orthonormal for the trace inner product.
  RMatrix symmetric_basis(Index b) const {
    RMatrix e = RMatrix::Zero(n, n);
    if (b < n) {
      e(b, b) = 1.0;
      return e;
    }
    Index p = n;
    for (Index j = 0; j < n; ++j)
      for (Index k = j + 1; k < n; ++k, ++p)
        if (p == b) e(j, k) = e(k, j) = 1.0 / std::sqrt(2.0);
    return e;
  }

  RVector residual(const State& f) const {
    const auto g = gammas(lagrangians(f));
    RVector r(2 * static_cast<Index>(g.size()) * n);
    Index i = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      CMatrix power = CMatrix::Identity(n, n);
      for (Index k = 1; k <= n; ++k) {
        power = power * g[s];
        const cplx v = (power.trace() - power_sums[s][static_cast<std::size_t>(k - 1)]) /
                       static_cast<double>(k);
        r(i++) = v.real();
        r(i++) = v.imag();
      }
    }
    return r;
  }

  RMatrix jacobian(const State& f) const {
    const auto m = lagrangians(f);
    const auto g = gammas(m);
    const std::size_t ell = g.size();
    std::vector<std::vector<CMatrix>> powers(ell);
    for (std::size_t s = 0; s < ell; ++s) {
      CMatrix p = CMatrix::Identity(n, n);
      for (Index k = 1; k <= n; ++k) {
        p = p * g[s];
        powers[s].push_back(p);
      }
    }
    RMatrix jac = RMatrix::Zero(2 * static_cast<Index>(ell) * n, static_cast<Index>(ell) * per());
    const cplx i(0.0, 1.0);
    auto fill = [&](std::size_t t, Index col, const CMatrix& x) {
      for (Index k = 1; k <= n; ++k) {
        const cplx v = (powers[t][static_cast<std::size_t>(k - 1)] * x).trace();
        const Index row = 2 * (static_cast<Index>(t) * n + k - 1);
        jac(row, col) += v.real();
        jac(row + 1, col) += v.imag();
      }
    };
    for (std::size_t s = 0; s < ell; ++s) {
      const std::size_t prev = (s + ell - 1) % ell;
      for (Index b = 0; b < per(); ++b) {
        const CMatrix y = f[s] * (i * symmetric_basis(b).cast<cplx>()) * f[s].adjoint();
        const Index col = static_cast<Index>(s) * per() + b;
        fill(s, col, y - detail::ad_involution(m[s], y));
        fill(prev, col, detail::ad_involution(m[prev], y) - g[prev] * y * g[prev].adjoint());
      }
    }
    return jac;
  }

  State retract(const State& f, const RVector& h) const {
    State out = f;
    const cplx i(0.0, 1.0);
    for (std::size_t s = 0; s < f.size(); ++s) {
      RMatrix sym = RMatrix::Zero(n, n);
      for (Index b = 0; b < per(); ++b) sym += h(static_cast<Index>(s) * per() + b) * symmetric_basis(b);
      out[s] = reunitarize(f[s] * expm_skew(i * sym.cast<cplx>()));
    }
    return out;
  }
};

inline std::optional<std::string> index_problem(const SpectrumTuple& a) {
  const double i = index(a);
  if (std::fabs(i - std::round(i)) > 1e-8)
    return "index " + std::to_string(i) + " is not an integer";
  return std::nullopt;
}

inline void check_options(const SolveOptions& o) {
  require(o.max_iters > 0 && o.restarts > 0 && o.step > 0.0 && o.tol_residual > 0.0,
          "SolveOptions: parameters must be positive");
}

}  // namespace detail

/// gamma_s = V_s diag(e^{2 pi i alpha^s}) V_s^*; minimizes |gamma_1 ... gamma_l - I|_F^2.
inline SolveOutcome<Representation> realize_unitary(const SpectrumTuple& a,
                                                    const SolveOptions& opts = {}) {
  detail::check_options(opts);
  SolveOutcome<Representation> out;
  if (auto why = detail::index_problem(a)) {
    out.reason = *why;
    return out;
  }
  detail::UnitaryProblem p;
  p.n = static_cast<Index>(a.n());
  for (std::size_t s = 0; s < a.ell(); ++s) p.d.push_back(detail::diagonal_class(a.row(s)));
  for (int k = 0; k < opts.restarts; ++k) {
    Rng rng = detail::restart_rng(opts.seed, k);
    detail::UnitaryProblem::State v;
    for (std::size_t s = 0; s < a.ell(); ++s) v.push_back(haar_unitary(p.n, rng).matrix());
    const auto rep = detail::levenberg_marquardt(p, v, opts.max_iters, opts.tol_residual, opts.step);
    if (rep.f < out.residual) {
      out.residual = rep.f;
      std::vector<UnitaryMatrix> gs;
      for (auto& g : p.gammas(v)) gs.push_back(UnitaryMatrix::trusted(std::move(g)));
      out.witness = Representation::trusted(std::move(gs));
    }
    out.restarts_used = k + 1;
    if (out.residual <= opts.tol_residual) {
      out.success = true;
      return out;
    }
  }
  out.reason = "no restart reached the residual tolerance";
  return out;
}

/// Sum over s of class_distance(tau2(L_s, L_{s+1}), alpha^s).
inline double lagrangian_residual(const LagrangianTuple& lambda, const SpectrumTuple& a,
                                  const Tolerances& tol = {}) {
  detail::require(lambda.size() == a.ell() && static_cast<std::size_t>(lambda.dim()) == a.n(),
                  "lagrangian_residual: shape mismatch");
  double total = 0.0;
  for (std::size_t s = 0; s < a.ell(); ++s)
    total += class_distance(tau2(lambda.cyclic(s), lambda.cyclic(s + 1)), a.spectrum(s), tol);
  return total;
}

/// Frames (g_1, ..., g_l) with gamma_s = tau2(L_s, L_{s+1}) in the target
/// classes; the relation holds by construction.
inline SolveOutcome<LagrangianTuple> realize_lagrangian(const SpectrumTuple& a,
                                                        const SolveOptions& opts = {}) {
  detail::check_options(opts);
  SolveOutcome<LagrangianTuple> out;
  if (auto why = detail::index_problem(a)) {
    out.reason = *why;
    return out;
  }
  detail::LagrangianProblem p;
  p.n = static_cast<Index>(a.n());
  for (std::size_t s = 0; s < a.ell(); ++s)
    p.power_sums.push_back(detail::LagrangianProblem::target_power_sums(a.row(s)));
  for (int k = 0; k < opts.restarts; ++k) {
    Rng rng = detail::restart_rng(opts.seed, k);
    detail::LagrangianProblem::State f;
    for (std::size_t s = 0; s < a.ell(); ++s) f.push_back(haar_unitary(p.n, rng).matrix());
    // Power-sum residuals below 1e-20 pin the spectra far inside the
    // class-distance tolerance.
    detail::levenberg_marquardt(p, f, opts.max_iters, std::min(opts.tol_residual, 1e-20), opts.step);
    std::vector<Lagrangian> items;
    for (auto& m : detail::LagrangianProblem::lagrangians(f)) items.push_back(Lagrangian::trusted(std::move(m)));
    LagrangianTuple lambda(std::move(items));
    const double residual = lagrangian_residual(lambda, a);
    if (residual < out.residual) {
      out.residual = residual;
      out.witness = std::move(lambda);
    }
    out.restarts_used = k + 1;
    if (out.residual <= opts.tol_residual) {
      out.success = true;
      return out;
    }
  }
  out.reason = "no restart reached the residual tolerance";
  return out;
}

// ---------------------------------------------------------------------------
// Gluing

/// Spectrum of the inverse class: alpha -> 1 - alpha (zeros stay), sorted.
inline Spectrum inverse_spectrum(const Spectrum& s) {
  Spectrum out;
  for (double a : s.alpha) out.alpha.push_back(a == 0.0 ? 0.0 : 1.0 - a);
  std::sort(out.alpha.begin(), out.alpha.end());
  return out;
}

/// The tuple moved by a global unitary so that its first member is R^n.
inline LagrangianTuple anchored(const LagrangianTuple& lambda, const Tolerances& tol = {}) {
  const CMatrix u = lambda[0].frame(tol).inverse().matrix();
  std::vector<Lagrangian> items;
  for (const auto& l : lambda.items()) items.push_back(l.transformed(u));
  items[0] = Lagrangian::standard(lambda.dim());
  return LagrangianTuple(std::move(items));
}

/// Glues sol_ell = (K_1, ..., K_l), whose last factor tau2(K_l, K_1) lies
/// in a class C, with sol_3 = (P_1, P_2, P_3) whose last factor
/// tau2(P_3, P_1) lies in C too. Returns (K_1, ..., K_l, g P_2) with g real
/// orthogonal carrying P_3 onto K_l after both tuples are anchored at R^n.
/// The last two factors of the result lie in the classes of
/// tau2(P_2, P_3)^{-1} and tau2(P_1, P_2)^{-1}.
inline LagrangianTuple compose_triple(const LagrangianTuple& sol_ell, const LagrangianTuple& sol_3,
                                      const Tolerances& tol = {}) {
  detail::require(sol_3.size() == 3, "compose_triple: second argument must be a triple");
  detail::require(sol_ell.dim() == sol_3.dim(), "compose_triple: dimension mismatch");
  const std::size_t ell = sol_ell.size();
  const auto k = anchored(sol_ell, tol);
  const auto p = anchored(sol_3, tol);
  const CMatrix& mk = k[ell - 1].matrix();  // tau2(K_l, R^n)
  const CMatrix& mp = p[2].matrix();        // tau2(P_3, R^n)
  const double mismatch = spectrum_distance(spectrum(UnitaryMatrix::trusted(mk), tol),
                                            spectrum(UnitaryMatrix::trusted(mp), tol));
  if (mismatch > 1e-12)
    throw InputError("compose_triple: the joint classes differ (distance " +
                     std::to_string(mismatch) + ")");
  const auto dk = orthogonal_diagonalize(mk, tol);
  const auto dp = orthogonal_diagonalize(mp, tol);
  const RMatrix g = dk.q * dp.q.transpose();
  const CMatrix gc = g.cast<cplx>();
  const double err = (gc * mp * gc.transpose() - mk).norm();
  if (err > 1e-7)
    throw NumericalError("compose_triple: alignment residual " + std::to_string(err));
  std::vector<Lagrangian> items = k.items();
  items.push_back(p[1].transformed(gc));
  return LagrangianTuple(std::move(items));
}

// ---------------------------------------------------------------------------
// Chamber scans

struct ScanOptions {
  double resolution = 0.05;
  std::optional<double> margin;     // minimal wall distance for solver runs; 2 x resolution if unset
  std::size_t max_solver_points = 200;
  std::size_t sample_points = 0;    // 0: the full grid; otherwise a random sample
  Seed seed{0};
};

struct ScanPoint {
  SpectrumTuple alpha;
  bool predicate = false;
  double wall_distance = 0.0;
  bool solved = false;
  double unitary_residual = std::numeric_limits<double>::quiet_NaN();
  double lagrangian_residual = std::numeric_limits<double>::quiet_NaN();
  bool unitary_success = false;
  bool lagrangian_success = false;

  bool agrees() const {
    return predicate == unitary_success && predicate == lagrangian_success;
  }
};

struct ScanReport {
  int n = 0;
  int index_value = 0;
  std::vector<ScanPoint> points;
  std::size_t off_wall = 0;
  std::size_t solved = 0;
  std::size_t agreements = 0;
  std::size_t feasible = 0;

  double agreement_rate() const {
    return solved == 0 ? 1.0 : static_cast<double>(agreements) / static_cast<double>(solved);
  }
};

namespace detail {

// Strictly increasing rows of n multiples of 1/steps in (0, 1).
inline std::vector<std::vector<int>> grid_rows(int n, int steps) {
  std::vector<std::vector<int>> rows;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      rows.push_back(cur);
      return;
    }
    for (int k = start; k < steps; ++k) {
      cur.push_back(k);
      self(self, k + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return rows;
}

inline int row_sum(const std::vector<int>& r) {
  int s = 0;
  for (int v : r) s += v;
  return s;
}

}  // namespace detail

/// Grid points of the index-I plane for l = 3 and n = 2, 3, in units of
/// `resolution` (which must be 1/N): all ordered triples of strictly
/// increasing rows of nonzero grid angles with total N I. With
/// `sample_points` > 0 a deterministic random sample of that size is
/// returned instead (without repetition; fewer when the grid is smaller).
inline std::vector<SpectrumTuple> scan_grid(int n, int index_value, const ScanOptions& o) {
  detail::require(n == 2 || n == 3, "chamber_scan: only n = 2 and n = 3 are supported");
  const double inv = 1.0 / o.resolution;
  const int steps = static_cast<int>(std::lround(inv));
  detail::require(steps >= 2 && std::fabs(inv - steps) < 1e-9,
                  "chamber_scan: resolution must be 1/N for an integer N >= 2");
  const auto rows = detail::grid_rows(n, steps);
  const int total = steps * index_value;
  std::vector<std::vector<std::size_t>> by_sum(static_cast<std::size_t>(n * steps + 1));
  for (std::size_t i = 0; i < rows.size(); ++i)
    by_sum[static_cast<std::size_t>(detail::row_sum(rows[i]))].push_back(i);
  auto make = [&](std::size_t i, std::size_t j, std::size_t k) {
    std::vector<std::vector<double>> a;
    for (std::size_t r : {i, j, k}) {
      std::vector<double> row;
      for (int v : rows[r]) row.push_back(v / static_cast<double>(steps));
      a.push_back(std::move(row));
    }
    return SpectrumTuple(std::move(a));
  };
  std::vector<SpectrumTuple> out;
  if (o.sample_points == 0) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const int need = total - detail::row_sum(rows[i]) - detail::row_sum(rows[j]);
        if (need < 0 || need >= static_cast<int>(by_sum.size())) continue;
        for (std::size_t k : by_sum[static_cast<std::size_t>(need)]) out.push_back(make(i, j, k));
      }
    return out;
  }
  // Uniform over the grid: pick (i, j) uniformly and accept with probability
  // proportional to the size of the completing bucket.
  std::size_t largest = 0;
  for (const auto& bucket : by_sum) largest = std::max(largest, bucket.size());
  Rng rng(detail::splitmix64(o.seed.value ^ 0x5ca1ab1eULL));
  std::uniform_int_distribution<std::size_t> pick_row(0, rows.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::set<std::array<std::size_t, 3>> seen;
  std::size_t misses = 0;
  while (out.size() < o.sample_points && largest > 0 && misses < 1000000) {
    const std::size_t i = pick_row(rng), j = pick_row(rng);
    const int need = total - detail::row_sum(rows[i]) - detail::row_sum(rows[j]);
    const std::size_t c = need < 0 || need >= static_cast<int>(by_sum.size())
                              ? 0
                              : by_sum[static_cast<std::size_t>(need)].size();
    if (c == 0 || unit(rng) * static_cast<double>(largest) >= static_cast<double>(c)) {
      ++misses;
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick_k(0, c - 1);
    const std::size_t k = by_sum[static_cast<std::size_t>(need)][pick_k(rng)];
    if (!seen.insert({i, j, k}).second) {
      ++misses;
      continue;
    }
    misses = 0;
    out.push_back(make(i, j, k));
  }
  return out;
}

/// Evaluates the feasibility predicate on every grid point and both solvers
/// on a deterministic subsample (at most max_solver_points) of the points at
/// wall distance greater than the margin.
inline ScanReport chamber_scan(int n, int index_value, const ScanOptions& scan,
                               const SolveOptions& opts = {}) {
  const double margin = scan.margin.value_or(2.0 * scan.resolution);
  ScanReport rep;
  rep.n = n;
  rep.index_value = index_value;
  for (auto& a : scan_grid(n, index_value, scan)) {
    ScanPoint p;
    p.predicate = feasible(a).feasible;
    p.wall_distance = wall_family(n, index_value).empty()
                          ? std::numeric_limits<double>::infinity()
                          : wall_distance(a, index_value);
    p.alpha = std::move(a);
    rep.feasible += p.predicate;
    rep.points.push_back(std::move(p));
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < rep.points.size(); ++i)
    if (rep.points[i].wall_distance > margin) candidates.push_back(i);
  rep.off_wall = candidates.size();
  Rng rng(detail::splitmix64(scan.seed.value ^ 0xc0ffeeULL));
  std::shuffle(candidates.begin(), candidates.end(), rng);
  if (candidates.size() > scan.max_solver_points) candidates.resize(scan.max_solver_points);
  std::sort(candidates.begin(), candidates.end());
  for (std::size_t i : candidates) {
    auto& p = rep.points[i];
    SolveOptions o = opts;
    o.seed = Seed{detail::splitmix64(opts.seed.value + i)};
    const auto u = realize_unitary(p.alpha, o);
    const auto l = realize_lagrangian(p.alpha, o);
    p.solved = true;
    p.unitary_residual = u.residual;
    p.lagrangian_residual = l.residual;
    p.unitary_success = u.success;
    p.lagrangian_success = l.success;
    ++rep.solved;
    rep.agreements += p.agrees();
  }
  return rep;
}

}  // namespace lagrep
