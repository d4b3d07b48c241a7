#pragma once

// JSON encoding of the domain types (complex numbers as [re, im], matrices
// as row-major nested arrays) with validating decoders that report the first
// violation together with a JSON-pointer location, and the scan CSV format.

#include <cmath>
#include <cstdint>
#include <charconv>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lagrep/maslov.hpp"
#include "lagrep/solver.hpp"
#include "lagrep/symplectic.hpp"

namespace lagrep::io {

using nlohmann::json;

class DecodeError : public InputError {
 public:
  DecodeError(std::string path, const std::string& what)
      : InputError((path.empty() ? std::string("(root)") : path) + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Two-space indented text with a trailing newline; the canonical file form.
inline std::string canonical(const json& j) { return j.dump(2) + "\n"; }

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DecodeError("", std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const json& field(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw DecodeError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw DecodeError(at(path, key), "missing field");
  return *it;
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw DecodeError(path, "expected an array");
  return j;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw DecodeError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw DecodeError(path, "expected a finite number");
  return v;
}

inline std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw DecodeError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline std::int64_t positive(const json& j, const std::string& path) {
  const auto v = integer(j, path);
  if (v < 1) throw DecodeError(path, "expected a positive integer");
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices

inline json encode(cplx z) { return json::array({z.real(), z.imag()}); }

inline json encode(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(encode(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline cplx decode_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw DecodeError(path, "expected a complex number [re, im]");
  return {detail::number(j[0], detail::at(path, 0)), detail::number(j[1], detail::at(path, 1))};
}

/// An n x n complex matrix.
inline CMatrix decode_matrix(const json& j, std::int64_t n, const std::string& path) {
  const json& rows = detail::array(j, path);
  if (static_cast<std::int64_t>(rows.size()) != n)
    throw DecodeError(path, "expected " + std::to_string(n) + " rows");
  CMatrix m(n, n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto rp = detail::at(path, i);
    const json& row = detail::array(rows[i], rp);
    if (static_cast<std::int64_t>(row.size()) != n)
      throw DecodeError(rp, "expected " + std::to_string(n) + " columns");
    for (std::size_t k = 0; k < row.size(); ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) = decode_complex(row[k], detail::at(rp, k));
  }
  return m;
}

inline UnitaryMatrix decode_unitary_matrix(const json& j, std::int64_t n, const std::string& path,
                                           const Tolerances& tol = {}) {
  CMatrix m = decode_matrix(j, n, path);
  const double defect = unitarity_defect(m);
  if (!(defect <= tol.unitarity))
    throw DecodeError(path, "unitarity violated: ||A*A - I||_F = " + std::to_string(defect));
  return UnitaryMatrix::trusted(std::move(m));
}

// ---------------------------------------------------------------------------
// Unitary matrix: {"n": int, "U": matrix}

inline json encode(const UnitaryMatrix& u) { return {{"n", u.dim()}, {"U", encode(u.matrix())}}; }

inline UnitaryMatrix decode_unitary(const json& j, const Tolerances& tol = {},
                                    const std::string& path = "") {
  const auto n = detail::positive(detail::field(j, path, "n"), detail::at(path, "n"));
  return decode_unitary_matrix(detail::field(j, path, "U"), n, detail::at(path, "U"), tol);
}

// ---------------------------------------------------------------------------
// Spectrum tuple: {"ell": int, "n": int, "alpha": [[...], ...]}

inline json encode(const SpectrumTuple& a) {
  return {{"ell", a.ell()}, {"n", a.n()}, {"alpha", a.rows()}};
}

inline SpectrumTuple decode_spectrum_tuple(const json& j, const std::string& path = "") {
  const auto ell = detail::positive(detail::field(j, path, "ell"), detail::at(path, "ell"));
  const auto n = detail::positive(detail::field(j, path, "n"), detail::at(path, "n"));
  const auto ap = detail::at(path, "alpha");
  const json& rows = detail::array(detail::field(j, path, "alpha"), ap);
  if (static_cast<std::int64_t>(rows.size()) != ell)
    throw DecodeError(ap, "expected " + std::to_string(ell) + " rows");
  std::vector<std::vector<double>> out;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto rp = detail::at(ap, s);
    const json& row = detail::array(rows[s], rp);
    if (static_cast<std::int64_t>(row.size()) != n)
      throw DecodeError(rp, "expected " + std::to_string(n) + " angles");
    std::vector<double> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto kp = detail::at(rp, k);
      const double v = detail::number(row[k], kp);
      if (!(v >= 0.0 && v < 1.0)) throw DecodeError(kp, "angle outside [0, 1)");
      if (!r.empty() && v < r.back()) throw DecodeError(kp, "angles must be ascending");
      r.push_back(v);
    }
    out.push_back(std::move(r));
  }
  return SpectrumTuple(std::move(out));
}

// ---------------------------------------------------------------------------
// Lagrangian: {"n": int, "M": matrix}; tuple: array of Lagrangians

inline json encode(const Lagrangian& l) { return {{"n", l.dim()}, {"M", encode(l.matrix())}}; }

inline json encode(const LagrangianTuple& t) {
  json out = json::array();
  for (const auto& l : t.items()) out.push_back(encode(l));
  return out;
}

inline Lagrangian decode_lagrangian(const json& j, const Tolerances& tol = {},
                                    const std::string& path = "") {
  const auto n = detail::positive(detail::field(j, path, "n"), detail::at(path, "n"));
  const auto mp = detail::at(path, "M");
  CMatrix m = decode_unitary_matrix(detail::field(j, path, "M"), n, mp, tol).matrix();
  const double sym = symmetry_defect(m);
  if (!(sym <= tol.symmetry))
    throw DecodeError(mp, "symmetry violated: ||M - M^T||_F = " + std::to_string(sym));
  return Lagrangian::trusted(std::move(m));
}

inline LagrangianTuple decode_lagrangian_tuple(const json& j, const Tolerances& tol = {},
                                               const std::string& path = "") {
  const json& items = detail::array(j, path);
  if (items.size() < 2) throw DecodeError(path, "expected at least two Lagrangians");
  std::vector<Lagrangian> out;
  for (std::size_t s = 0; s < items.size(); ++s) {
    out.push_back(decode_lagrangian(items[s], tol, detail::at(path, s)));
    if (out.back().dim() != out.front().dim())
      throw DecodeError(detail::at(detail::at(path, s), "n"), "dimension differs from the first entry");
  }
  return LagrangianTuple(std::move(out));
}

// ---------------------------------------------------------------------------
// Representation: {"ell": int, "n": int, "gammas": [matrix, ...]}

inline json encode(const Representation& rho) {
  json gs = json::array();
  for (const auto& g : rho.gammas()) gs.push_back(encode(g.matrix()));
  return {{"ell", rho.ell()}, {"n", rho.n()}, {"gammas", gs}};
}

inline Representation decode_representation(const json& j, const Tolerances& tol = {},
                                            const std::string& path = "") {
  const auto ell = detail::positive(detail::field(j, path, "ell"), detail::at(path, "ell"));
  const auto n = detail::positive(detail::field(j, path, "n"), detail::at(path, "n"));
  const auto gp = detail::at(path, "gammas");
  const json& gs = detail::array(detail::field(j, path, "gammas"), gp);
  if (static_cast<std::int64_t>(gs.size()) != ell)
    throw DecodeError(gp, "expected " + std::to_string(ell) + " matrices");
  std::vector<UnitaryMatrix> out;
  for (std::size_t s = 0; s < gs.size(); ++s)
    out.push_back(decode_unitary_matrix(gs[s], n, detail::at(gp, s), tol));
  auto rho = Representation::trusted(std::move(out));
  const double defect = rho.relation_defect();
  if (!(defect <= tol.relation))
    throw DecodeError(gp, "relation violated: ||gamma_1 ... gamma_l - I||_F = " + std::to_string(defect));
  return rho;
}

// ---------------------------------------------------------------------------
// Reports (encode only)

inline json encode(const Spectrum& s) { return s.alpha; }

inline json encode(const TripleInvariants& d) {
  return {{"n0", d.n0}, {"n12", d.n12}, {"n23", d.n23}, {"n31", d.n31}, {"tau", d.tau}};
}

inline json encode(const IndexIdentityReport& r) {
  return {{"tau", r.tau},
          {"I", r.index},
          {"n0", r.n0},
          {"njk", r.njk},
          {"tau_from_index", r.tau_from_index},
          {"generalized_index", r.generalized_index},
          {"maslov_bound", r.maslov_bound},
          {"identities",
           {{"indcomp", r.tau_identity},
            {"iandtau", r.index_identity},
            {"maslov_bound", r.bound_holds},
            {"index_bounds", r.index_bounds}}}};
}

inline json encode(const Feasibility& f) { return {{"feasible", f.feasible}, {"violated", f.violated}}; }

inline json encode(const MultiplicityStructure& m) {
  return {{"partitions", m.partitions}, {"z", m.z}};
}

inline json encode(const ExpectedDimensions& d) {
  return {{"rep_irr", d.rep_irr},
          {"lrep_irr", d.lrep_irr},
          {"lagrangian_tuples", d.lagrangian_tuples},
          {"lhom_irr", d.lhom_irr},
          {"lhom_irr_stated", d.lhom_irr_stated},
          {"lrep_irr_total", d.lrep_irr_total}};
}

inline json encode(const IsotropyReport& r) {
  return {{"defect", r.defect}, {"directions", r.directions}};
}

template <class W>
json encode_summary(const SolveOutcome<W>& o) {
  json j = {{"success", o.success}, {"residual", o.residual}, {"restarts_used", o.restarts_used}};
  if (!o.reason.empty()) j["reason"] = o.reason;
  return j;
}

inline json encode_summary(const ScanReport& r) {
  return {{"n", r.n},
          {"I", r.index_value},
          {"points", r.points.size()},
          {"feasible", r.feasible},
          {"off_wall", r.off_wall},
          {"solved", r.solved},
          {"agreements", r.agreements},
          {"agreement_rate", r.agreement_rate()}};
}

// ---------------------------------------------------------------------------
// Scan CSV: the free angle coordinates (every angle but the last, which the
// index determines), the predicate bit, the wall distance and both solver
// residuals; solver columns are empty where the solvers were not run.

inline void write_scan_csv(std::ostream& os, const ScanReport& r) {
  const std::size_t n = static_cast<std::size_t>(r.n);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t k = 0; k < n; ++k)
      if (s < 2 || k + 1 < n) os << "a" << s + 1 << "_" << k + 1 << ",";
  os << "predicate,wall_distance,unitary_residual,lagrangian_residual\n";
  auto number = [](double v) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
  };
  for (const auto& p : r.points) {
    std::string line;
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t k = 0; k < n; ++k)
        if (s < 2 || k + 1 < n) line += number(p.alpha(s, k)) + ",";
    line += p.predicate ? "1," : "0,";
    if (std::isfinite(p.wall_distance)) line += number(p.wall_distance);
    line += ",";
    if (p.solved) line += number(p.unitary_residual) + "," + number(p.lagrangian_residual);
    else line += ",";
    os << line << "\n";
  }
}

}  // namespace lagrep::io
