#pragma once

// Combinatorics of eigenvalue data: spectrum tuples, their index,
// multiplicity strata, relative indices, boundary collapse, index bounds,
// and the tabulated feasibility predicates for U(2) and U(3) triples.

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lagrep/numerics.hpp"

namespace lagrep {

/// ell x n angles, each row ascending in [0, 1).
class SpectrumTuple {
 public:
  SpectrumTuple() = default;

  explicit SpectrumTuple(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    detail::require(!rows_.empty(), "SpectrumTuple: need at least one row");
    const std::size_t n = rows_.front().size();
    detail::require(n >= 1, "SpectrumTuple: rows must be non-empty");
    for (std::size_t s = 0; s < rows_.size(); ++s) {
      const auto& r = rows_[s];
      detail::require(r.size() == n, "SpectrumTuple: ragged rows");
      for (std::size_t j = 0; j < n; ++j) {
        detail::require(r[j] >= 0.0 && r[j] < 1.0,
                        "SpectrumTuple: alpha[" + std::to_string(s) + "][" + std::to_string(j) +
                            "] outside [0,1)");
        if (j > 0)
          detail::require(r[j - 1] <= r[j], "SpectrumTuple: row " + std::to_string(s) +
                                                " is not ascending");
      }
    }
  }

  static SpectrumTuple from_spectra(const std::vector<Spectrum>& spectra) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : spectra) rows.push_back(s.alpha);
    return SpectrumTuple(std::move(rows));
  }

  std::size_t ell() const { return rows_.size(); }
  std::size_t n() const { return rows_.empty() ? 0 : rows_.front().size(); }
  const std::vector<double>& row(std::size_t s) const { return rows_[s]; }
  Spectrum spectrum(std::size_t s) const { return Spectrum{rows_[s]}; }
  double operator()(std::size_t s, std::size_t j) const { return rows_[s][j]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  bool operator==(const SpectrumTuple&) const = default;

 private:
  std::vector<std::vector<double>> rows_;
};

/// Per-row partitions 0 = m_0 < ... < m_l = n and the rows whose smallest
/// distinct angle is zero (0-based row indices).
struct MultiplicityStructure {
  std::vector<std::vector<int>> partitions;
  std::vector<int> z;

  int length(std::size_t s) const { return static_cast<int>(partitions[s].size()) - 1; }
  /// Multiplicities mu^s_j = m^s_j - m^s_{j-1}.
  std::vector<int> multiplicities(std::size_t s) const {
    std::vector<int> mu;
    for (std::size_t j = 1; j < partitions[s].size(); ++j)
      mu.push_back(partitions[s][j] - partitions[s][j - 1]);
    return mu;
  }
  /// sum over s, j of (mu^s_j)^2.
  int sum_squares() const {
    int total = 0;
    for (std::size_t s = 0; s < partitions.size(); ++s)
      for (int m : multiplicities(s)) total += m * m;
    return total;
  }
  bool in_z(int s) const { return std::find(z.begin(), z.end(), s) != z.end(); }

  bool operator==(const MultiplicityStructure&) const = default;
};

/// The generic structure: every angle distinct and nonzero.
inline MultiplicityStructure generic_structure(std::size_t ell, int n) {
  MultiplicityStructure m;
  std::vector<int> p(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) p[static_cast<std::size_t>(j)] = j;
  m.partitions.assign(ell, p);
  return m;
}

// ---------------------------------------------------------------------------

/// I(a): the plain double sum of all angles.
inline double index(const SpectrumTuple& a) {
  double total = 0.0;
  for (const auto& r : a.rows())
    for (double v : r) total += v;
  return total;
}

/// Nearest integer to the index, or an InputError when the index is not
/// an integer within `tol`.
inline int integer_index(const SpectrumTuple& a, double tol = 1e-8) {
  const double i = index(a);
  const double r = std::round(i);
  if (std::fabs(i - r) > tol) {
    std::ostringstream os;
    os << "index " << i << " is not an integer";
    throw InputError(os.str());
  }
  return static_cast<int>(r);
}

/// Sorts each row and replaces trailing ones by leading zeros.
inline SpectrumTuple normalize(const std::vector<std::vector<double>>& raw,
                               double snap = Tolerances{}.angle_snap) {
  detail::require(!raw.empty(), "normalize: empty input");
  std::vector<std::vector<double>> rows;
  for (std::size_t s = 0; s < raw.size(); ++s) {
    std::vector<double> r = raw[s];
    for (std::size_t j = 0; j < r.size(); ++j)
      detail::require(r[j] >= 0.0 && r[j] <= 1.0,
                      "normalize: entry [" + std::to_string(s) + "][" + std::to_string(j) +
                          "] outside [0,1]");
    for (double& v : r)
      if (v >= 1.0 - snap || v < snap) v = 0.0;
    std::sort(r.begin(), r.end());
    rows.push_back(std::move(r));
  }
  return SpectrumTuple(std::move(rows));
}

inline MultiplicityStructure multiplicity_structure(const SpectrumTuple& a,
                                                    double tol = Tolerances{}.cluster) {
  MultiplicityStructure m;
  for (std::size_t s = 0; s < a.ell(); ++s) {
    std::vector<double> r = a.row(s);
    // Angles just below 1 sit next to 0 on the circle.
    for (double& v : r)
      if (1.0 - v < tol) v = 0.0;
    std::sort(r.begin(), r.end());
    std::vector<int> p{0};
    for (std::size_t j = 1; j < r.size(); ++j)
      if (r[j] - r[j - 1] >= tol) p.push_back(static_cast<int>(j));
    p.push_back(static_cast<int>(r.size()));
    m.partitions.push_back(std::move(p));
    if (r.front() < tol) m.z.push_back(static_cast<int>(s));
  }
  return m;
}

struct CollapseResult {
  SpectrumTuple tuple;
  MultiplicityStructure structure;
  int index_drop = 0;  // n - m^{s0}_{l-1}: size of the collapsed cluster
};

/// Sends the top cluster of row s0 to 1 and identifies it with 0. The index
/// of the limit point (top cluster at 1) drops by exactly `index_drop`.
inline CollapseResult collapse_top(const SpectrumTuple& a, const MultiplicityStructure& m,
                                   std::size_t s0) {
  detail::require(s0 < a.ell(), "collapse_top: row index out of range");
  detail::require(m.partitions.size() == a.ell(), "collapse_top: structure shape mismatch");
  const int n = static_cast<int>(a.n());
  const auto& part = m.partitions[s0];
  const int l = static_cast<int>(part.size()) - 1;
  const bool zero_row = m.in_z(static_cast<int>(s0));
  detail::require(!(zero_row && l == 1), "collapse_top: the only cluster of the row is zero");
  const int top_start = part[static_cast<std::size_t>(l - 1)];
  const int t = n - top_start;

  std::vector<std::vector<double>> rows = a.rows();
  std::vector<double> r(static_cast<std::size_t>(t), 0.0);
  for (int j = 0; j < top_start; ++j) r.push_back(a(s0, static_cast<std::size_t>(j)));
  rows[s0] = std::move(r);

  MultiplicityStructure out = m;
  std::vector<int> np{0};
  if (zero_row) {
    for (int i = 1; i <= l - 1; ++i) np.push_back(part[static_cast<std::size_t>(i)] + t);
  } else {
    np.push_back(t);
    for (int i = 1; i <= l - 1; ++i) np.push_back(part[static_cast<std::size_t>(i)] + t);
    out.z.push_back(static_cast<int>(s0));
    std::sort(out.z.begin(), out.z.end());
  }
  out.partitions[s0] = std::move(np);
  return {SpectrumTuple(std::move(rows)), std::move(out), t};
}

// ---------------------------------------------------------------------------
// Relative indices and brackets

/// For each row, the 0-based positions selected; every subset has size k.
struct PartitionSelection {
  int k = 0;
  std::vector<std::vector<int>> subsets;

  /// The complementary selection of size n - k.
  PartitionSelection complement(int n) const {
    PartitionSelection c;
    c.k = n - k;
    for (const auto& sub : subsets) {
      std::vector<int> rest;
      for (int j = 0; j < n; ++j)
        if (std::find(sub.begin(), sub.end(), j) == sub.end()) rest.push_back(j);
      c.subsets.push_back(std::move(rest));
    }
    return c;
  }
};

inline double relative_index(const SpectrumTuple& a, const PartitionSelection& p) {
  detail::require(p.subsets.size() == a.ell(), "relative_index: one subset per row required");
  double total = 0.0;
  for (std::size_t s = 0; s < a.ell(); ++s) {
    const auto& sub = p.subsets[s];
    detail::require(static_cast<int>(sub.size()) == p.k, "relative_index: subset size mismatch");
    std::set<int> seen;
    for (int j : sub) {
      detail::require(j >= 0 && j < static_cast<int>(a.n()),
                      "relative_index: position out of range");
      detail::require(seen.insert(j).second, "relative_index: repeated position");
      total += a(s, static_cast<std::size_t>(j));
    }
  }
  return total;
}

/// Bracket [i_1, ..., i_l] with 1-based positions: sum_s alpha^s_{i_s}.
using Bracket = std::vector<int>;

inline double bracket_value(const SpectrumTuple& a, const Bracket& b) {
  detail::require(b.size() == a.ell(), "bracket: one position per row required");
  double total = 0.0;
  for (std::size_t s = 0; s < b.size(); ++s) {
    detail::require(b[s] >= 1 && b[s] <= static_cast<int>(a.n()), "bracket: position out of range");
    total += a(s, static_cast<std::size_t>(b[s] - 1));
  }
  return total;
}

inline std::string bracket_name(const Bracket& b) {
  std::string s = "[";
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(b[i]);
  }
  return s + "]";
}

/// One affine inequality [i_1,...,i_l] <= bound or >= bound.
struct WallInequality {
  Bracket bracket;
  bool at_most = true;
  int bound = 0;

  std::string name() const {
    return bracket_name(bracket) + (at_most ? "<=" : ">=") + std::to_string(bound);
  }
  bool holds(const SpectrumTuple& a, double tol = 1e-9) const {
    const double v = bracket_value(a, bracket);
    return at_most ? v <= bound + tol : v >= bound - tol;
  }
};

namespace detail {

// Every distinct rearrangement of `b`, in lexicographic order.
inline std::vector<Bracket> permutations_of(Bracket b) {
  std::sort(b.begin(), b.end());
  std::vector<Bracket> out;
  do out.push_back(b);
  while (std::next_permutation(b.begin(), b.end()));
  return out;
}

struct FamilyEntry {
  Bracket bracket;
  bool at_most;
  int bound;
};

inline std::vector<WallInequality> expand(const std::vector<FamilyEntry>& entries) {
  std::vector<WallInequality> out;
  for (const auto& e : entries)
    for (auto& p : permutations_of(e.bracket)) out.push_back({p, e.at_most, e.bound});
  return out;
}

inline int index_lower(int n) { return n; }
inline int index_upper(int n, int ell) { return n * (ell - 1); }

}  // namespace detail

/// The tabulated inequality families for ell = 3 and n = 2, 3 at integer
/// index I, closed under permutation of the rows. Empty outside the
/// admissible index range.
inline std::vector<WallInequality> wall_family(int n, int index_value) {
  using detail::FamilyEntry;
  std::vector<FamilyEntry> e;
  if (n == 2) {
    switch (index_value) {
      case 2: e = {{{2, 1, 1}, true, 1}}; break;
      case 3: e = {{{2, 2, 1}, true, 2}, {{2, 2, 2}, false, 2}}; break;
      case 4: e = {{{2, 1, 1}, true, 2}}; break;
      default: break;
    }
  } else if (n == 3) {
    switch (index_value) {
      case 3:
        e = {{{3, 1, 1}, true, 1},  {{2, 2, 1}, true, 1},  {{3, 3, 1}, false, 1},
             {{3, 2, 2}, false, 1}, {{3, 3, 2}, true, 2}};
        break;
      case 4:
        e = {{{2, 1, 1}, true, 1},  {{3, 2, 1}, false, 1}, {{2, 2, 2}, false, 1},
             {{3, 3, 1}, true, 2},  {{3, 2, 2}, true, 2},  {{3, 3, 3}, false, 2}};
        break;
      case 5:
        e = {{{1, 1, 1}, true, 1},  {{2, 2, 1}, false, 1}, {{3, 1, 1}, false, 1},
             {{3, 2, 1}, true, 2},  {{2, 2, 2}, true, 2},  {{3, 3, 2}, false, 2}};
        break;
      case 6:
        e = {{{2, 1, 1}, false, 1}, {{3, 1, 1}, true, 2},  {{2, 2, 1}, true, 2},
             {{3, 3, 1}, false, 2}, {{3, 2, 2}, false, 2}};
        break;
      default: break;
    }
  } else {
    throw InputError("wall_family: only n = 2 and n = 3 are tabulated");
  }
  return detail::expand(e);
}

struct Feasibility {
  bool feasible = false;
  std::vector<std::string> violated;
};

namespace detail {

inline void require_generic_triple(const SpectrumTuple& a, std::size_t n, const char* who,
                                   double cluster) {
  require(a.ell() == 3 && a.n() == n,
          std::string(who) + ": expected ell = 3 and n = " + std::to_string(n));
  for (std::size_t s = 0; s < 3; ++s) {
    const auto& r = a.row(s);
    require(circular_distance(r.front(), 0.0) >= cluster &&
                circular_distance(r.back(), 0.0) >= cluster,
            std::string(who) + ": row " + std::to_string(s) + " has a zero angle");
    for (std::size_t j = 1; j < r.size(); ++j)
      require(r[j] - r[j - 1] >= cluster,
              std::string(who) + ": row " + std::to_string(s) + " has a repeated angle");
  }
}

inline Feasibility evaluate_family(const SpectrumTuple& a, int n) {
  const int i = integer_index(a);
  Feasibility f;
  const int lo = index_lower(n);
  const int hi = index_upper(n, 3);
  if (i < lo || i > hi) {
    f.violated.push_back(std::to_string(lo) + "<=I<=" + std::to_string(hi));
    return f;
  }
  for (const auto& w : wall_family(n, i))
    if (!w.holds(a)) f.violated.push_back(w.name());
  f.feasible = f.violated.empty();
  return f;
}

}  // namespace detail

/// Realizability of a U(2) triple with distinct nonzero angles.
inline Feasibility feasible_u2(const SpectrumTuple& a, const Tolerances& tol = {}) {
  detail::require_generic_triple(a, 2, "feasible_u2", tol.cluster);
  return detail::evaluate_family(a, 2);
}

/// Realizability of a U(3) triple with distinct nonzero angles.
inline Feasibility feasible_u3(const SpectrumTuple& a, const Tolerances& tol = {}) {
  detail::require_generic_triple(a, 3, "feasible_u3", tol.cluster);
  return detail::evaluate_family(a, 3);
}

inline Feasibility feasible(const SpectrumTuple& a, const Tolerances& tol = {}) {
  if (a.n() == 2) return feasible_u2(a, tol);
  if (a.n() == 3) return feasible_u3(a, tol);
  throw InputError("feasible: only n = 2 and n = 3 are tabulated");
}

/// Distance, measured inside the plane of constant index, from `a` to the
/// nearest hyperplane of the inequality family at index I.
inline double wall_distance(const SpectrumTuple& a, int index_value) {
  const int n = static_cast<int>(a.n());
  const double ell = static_cast<double>(a.ell());
  const double norm = std::sqrt(ell * (1.0 - 1.0 / n));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : wall_family(n, index_value))
    best = std::min(best, std::fabs(bracket_value(a, w.bracket) - w.bound) / norm);
  return best;
}

/// n - N0 <= I <= n(ell - 1) + N0 - N1.
inline bool index_bounds_ok(const SpectrumTuple& a, int n0, int n1, double tol = 1e-8) {
  const double i = index(a);
  const double n = static_cast<double>(a.n());
  const double ell = static_cast<double>(a.ell());
  return n - n0 <= i + tol && i <= n * (ell - 1) + n0 - n1 + tol;
}

}  // namespace lagrep
