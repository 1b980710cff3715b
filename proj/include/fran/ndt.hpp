#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fran/combinatorics.hpp"
#include "fran/error.hpp"
#include "fran/fronthaul.hpp"
#include "fran/rational.hpp"
#include "fran/topology.hpp"

namespace fran {

struct NdtResult {
  int H = 0;
  int r = 0;
  std::int64_t K = 0;
  std::int64_t L = 0;
  int N = 0;
  Rational M{0};
  Rational rho{1};
  Rational t_used{0};
  Rational R1{0};
  Rational R2{0};
  Rational d{1};
  Rational delta_F{0};
  Rational delta_E{0};
  Rational delta{0};
  bool proven = false;
  bool interpolated = false;
};

// Achievability of the closed form is established for r = 2 or t >= L-2.
inline bool regime_proven(int r, std::int64_t L, std::int64_t t) { return r == 2 || t >= L - 2; }

// Per-user edge load (L - t) / L.
inline Rational edge_load(std::int64_t L, std::int64_t t) { return Rational(L - t, L); }

// DoF expression without regime checks (evaluated for unproven sweep points
// too). 1 at t = L.
inline Rational dof_expression(int r, std::int64_t L, std::int64_t t) {
  if (t == L) return Rational(1);
  const auto c = binomial(L - 1, t);
  return Rational(r * c, (r - 1) * c + binomial(L, t + 1));
}

// Edge NDT as a ratio of binomials: (C(L-1,t)(r-1) + C(L,t+1)) / (r C(L,t)).
inline Rational edge_ndt_binomial(int r, std::int64_t L, std::int64_t t) {
  return Rational(binomial(L - 1, t) * (r - 1) + binomial(L, t + 1), r * binomial(L, t));
}

// Edge NDT, factored: ((L-t)/r) ((r-1)/L + 1/(t+1)).
inline Rational edge_ndt(int r, std::int64_t L, std::int64_t t) {
  return Rational(L - t, r) * (Rational(r - 1, L) + Rational(1, t + 1));
}

// Total NDT at integer t: ((L-t)/r) ((r-1)/L + (1/(t+1)) (1 + 1/rho)).
inline Rational ndt_closed_form(int r, std::int64_t L, std::int64_t t, const Rational& rho) {
  if (t == L) return Rational(0);
  if (rho <= 0) throw Error(Errc::UnboundedNdt, "zero fronthaul rate with t < L");
  return Rational(L - t, r) * (Rational(r - 1, L) + Rational(1, t + 1) * (Rational(1) + Rational(1) / rho));
}

namespace detail {

inline NdtResult ndt_corner(const NetworkParams& params, std::int64_t t) {
  NdtResult res;
  res.H = params.H;
  res.r = params.r;
  res.K = params.K();
  res.L = params.L();
  res.N = params.N;
  res.M = params.M;
  res.rho = params.rho;
  res.t_used = Rational(t);
  const auto at_t = params.with_t(t);
  res.R1 = fronthaul_load(at_t);
  res.delta_F = fronthaul_ndt(at_t);
  res.R2 = edge_load(res.L, t);
  res.d = dof_expression(params.r, res.L, t);
  res.delta_E = edge_ndt(params.r, res.L, t);
  res.delta = ndt_closed_form(params.r, res.L, t, params.rho);
  res.proven = regime_proven(params.r, res.L, t);
  return res;
}

}  // namespace detail

// NDT at any M in [0, N]. Non-integer t = ML/N is served by memory sharing
// between floor(t) and ceil(t); all fields are mixed linearly with weight
// t - floor(t), and d is reported as the effective R2 / delta_E.
inline NdtResult ndt_point(const NetworkParams& params) {
  params.validate();
  const Rational t = params.t();
  if (is_integer(t)) {
    NdtResult res = detail::ndt_corner(params, t.numerator());
    res.M = params.M;
    return res;
  }
  const auto lo = floor_of(t);
  const auto hi = ceil_of(t);
  const Rational w = t - Rational(lo);
  const NdtResult a = detail::ndt_corner(params, lo);
  const NdtResult b = detail::ndt_corner(params, hi);
  auto mix = [&](const Rational& x, const Rational& y) { return (Rational(1) - w) * x + w * y; };
  NdtResult res = a;
  res.M = params.M;
  res.t_used = t;
  res.R1 = mix(a.R1, b.R1);
  res.R2 = mix(a.R2, b.R2);
  res.delta_F = mix(a.delta_F, b.delta_F);
  res.delta_E = mix(a.delta_E, b.delta_E);
  res.delta = mix(a.delta, b.delta);
  res.d = res.delta_E == 0 ? Rational(1) : res.R2 / res.delta_E;
  res.proven = a.proven && b.proven;
  res.interpolated = true;
  return res;
}

// Evenly spaced M values 0, N/steps, ..., N.
inline std::vector<Rational> cache_grid(int N, int steps) {
  if (steps < 1) throw Error(Errc::InvalidParams, "grid needs at least one step");
  std::vector<Rational> grid;
  for (int j = 0; j <= steps; ++j) grid.emplace_back(static_cast<std::int64_t>(j) * N, steps);
  return grid;
}

inline std::vector<NdtResult> ndt_sweep(const NetworkParams& params, const std::vector<Rational>& m_grid) {
  std::vector<NdtResult> rows;
  rows.reserve(m_grid.size());
  for (const auto& M : m_grid) {
    NetworkParams p = params;
    p.M = M;
    rows.push_back(ndt_point(p));
  }
  return rows;
}

inline bool non_increasing_delta(const std::vector<NdtResult>& rows) {
  for (std::size_t j = 1; j < rows.size(); ++j)
    if (rows[j].M >= rows[j - 1].M && rows[j].delta > rows[j - 1].delta) return false;
  return true;
}

struct ConnectivityRow {
  Rational M;
  Rational rho;
  NdtResult a;  // higher connectivity rA
  NdtResult b;  // rB
  Rational gap;  // delta_B - delta_A

  bool a_not_worse() const { return a.delta <= b.delta; }
  bool both_proven() const { return a.proven && b.proven; }
};

// Two networks on the same H ENs and K users with rA + rB = H, rA >= rB.
inline std::vector<ConnectivityRow> compare_connectivity(int H, int rA, int rB, int N, const Rational& rho,
                                                        const std::vector<Rational>& m_grid) {
  if (rA + rB != H || rA < rB)
    throw Error(Errc::IncompatiblePair, "need rA + rB = H and rA >= rB, got rA=" + std::to_string(rA) +
                                            " rB=" + std::to_string(rB) + " H=" + std::to_string(H));
  std::vector<ConnectivityRow> rows;
  for (const auto& M : m_grid) {
    NetworkParams pa{H, rA, N, 0, rho, M};
    NetworkParams pb{H, rB, N, 0, rho, M};
    ConnectivityRow row{M, rho, ndt_point(pa), ndt_point(pb), Rational(0)};
    row.gap = row.b.delta - row.a.delta;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const char* ndt_csv_header() {
  return "H,r,K,L,N,M,t,rho,R1,R2,d,delta_F,delta_E,delta,proven,interpolated,"
         "M_exact,t_exact,rho_exact,R1_exact,R2_exact,d_exact,delta_F_exact,delta_E_exact,delta_exact";
}

inline std::string ndt_csv_row(const NdtResult& res) {
  const Rational* values[] = {&res.M,  &res.t_used,  &res.rho,     &res.R1,   &res.R2,
                              &res.d,  &res.delta_F, &res.delta_E, &res.delta};
  std::string row = std::to_string(res.H) + "," + std::to_string(res.r) + "," + std::to_string(res.K) + "," +
                    std::to_string(res.L) + "," + std::to_string(res.N);
  for (const auto* v : values) row += "," + to_decimal_string(*v);
  row += res.proven ? ",true" : ",false";
  row += res.interpolated ? ",true" : ",false";
  for (const auto* v : values) row += "," + to_exact_string(*v);
  return row;
}

inline void write_ndt_csv(std::ostream& out, const std::vector<NdtResult>& rows, bool header = true) {
  if (header) out << ndt_csv_header() << '\n';
  for (const auto& r : rows) out << ndt_csv_row(r) << '\n';
}

}  // namespace fran
