#include <gtest/gtest.h>

#include <sstream>

#include "fran/ia_verify.hpp"
#include "fran/ndt.hpp"

using namespace fran;

namespace {

NetworkParams net(int H, int r, int N, Rational rho, Rational M) { return NetworkParams{H, r, N, 0, rho, M}; }

}  // namespace

TEST(NdtPoint, Example) {
  auto res = ndt_point(net(5, 2, 10, Rational(1), Rational(5, 2)));
  EXPECT_EQ(res.t_used, Rational(1));
  EXPECT_EQ(res.R1, Rational(3, 4));
  EXPECT_EQ(res.R2, Rational(3, 4));
  EXPECT_EQ(res.d, Rational(2, 3));
  EXPECT_EQ(res.delta_F, Rational(3, 4));
  EXPECT_EQ(res.delta_E, Rational(9, 8));
  EXPECT_EQ(res.delta, Rational(15, 8));
  EXPECT_TRUE(res.proven);
  EXPECT_FALSE(res.interpolated);

  for (auto rho : {Rational(1, 2), Rational(3), Rational(10)})
    EXPECT_EQ(ndt_point(net(5, 2, 10, rho, Rational(5, 2))).delta_F, Rational(3, 4) / rho);
}

// Hand-simplified forms for the two largest non-trivial cache sizes.
TEST(NdtPoint, TopRegimeForms) {
  for (int H = 3; H <= 7; ++H)
    for (int r = 2; r < H; ++r) {
      const std::int64_t L = binomial(H - 1, r - 1);
      const int N = static_cast<int>(binomial(H, r));
      for (auto rho : {Rational(1, 2), Rational(1), Rational(7, 3)}) {
        auto base = net(H, r, N, rho, Rational(0));
        if (L >= 2) {
          auto res = ndt_point(base.with_t(L - 2));
          EXPECT_EQ(res.delta, Rational(2, r) * (Rational(r - 1, L) + Rational(1, L - 1) * (1 + Rational(1) / rho)));
          EXPECT_TRUE(res.proven);
        }
        auto top = ndt_point(base.with_t(L - 1));
        EXPECT_EQ(top.delta, Rational(1, L) * (1 + Rational(1) / (rho * r)));
        EXPECT_EQ(ndt_point(base.with_t(L)).delta, Rational(0));
      }
    }
}

TEST(NdtPoint, Errors) {
  try {
    ndt_point(net(5, 2, 10, Rational(0), Rational(1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnboundedNdt);
  }
  EXPECT_EQ(ndt_point(net(5, 2, 10, Rational(0), Rational(10))).delta, Rational(0));
  try {
    ndt_point(net(5, 2, 10, Rational(1), Rational(11)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OutOfRange);
  }
}

TEST(NdtPoint, MemorySharing) {
  // t = 3/2 sits halfway between the t = 1 and t = 2 corners.
  auto mid = ndt_point(net(5, 2, 10, Rational(1), Rational(15, 4)));
  auto lo = ndt_point(net(5, 2, 10, Rational(1), Rational(5, 2)));
  auto hi = ndt_point(net(5, 2, 10, Rational(1), Rational(5)));
  EXPECT_TRUE(mid.interpolated);
  EXPECT_EQ(mid.t_used, Rational(3, 2));
  EXPECT_EQ(mid.delta, (lo.delta + hi.delta) / 2);
  EXPECT_EQ(mid.delta, mid.delta_F + mid.delta_E);
  EXPECT_EQ(mid.d, mid.R2 / mid.delta_E);
  EXPECT_LE(hi.delta, mid.delta);
  EXPECT_LE(mid.delta, lo.delta);

  auto third = ndt_point(net(5, 2, 10, Rational(1), Rational(10, 3)));  // t = 4/3
  EXPECT_EQ(third.delta, Rational(2, 3) * lo.delta + Rational(1, 3) * hi.delta);
}

TEST(Sweep, SevenByTwentyOne) {
  auto rows = ndt_sweep(net(7, 2, 21, Rational(1), Rational(0)), cache_grid(21, 21));
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_TRUE(non_increasing_delta(rows));
  EXPECT_EQ(rows.back().delta, Rational(0));
  for (const auto& r : rows) EXPECT_TRUE(r.proven);

  auto fine = ndt_sweep(net(7, 2, 21, Rational(1, 2), Rational(0)), cache_grid(21, 21 * 12));
  EXPECT_TRUE(non_increasing_delta(fine));
}

TEST(Sweep, HighConnectivityFlagsUnproven) {
  auto rows = ndt_sweep(net(7, 5, 21, Rational(1), Rational(0)), cache_grid(21, 21));
  const Rational L(binomial(6, 4));
  for (const auto& r : rows) {
    const Rational t = r.M * L / Rational(21);
    EXPECT_EQ(r.proven, floor_of(t) >= 13) << to_exact_string(r.M);
  }
  EXPECT_TRUE(non_increasing_delta(rows));
}

TEST(Compare, PairValidation) {
  try {
    compare_connectivity(7, 4, 2, 21, Rational(1), cache_grid(21, 21));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IncompatiblePair);
  }
  EXPECT_THROW(compare_connectivity(7, 2, 5, 21, Rational(1), cache_grid(21, 21)), Error);
}

TEST(Compare, EqualConnectivityIsSymmetric) {
  for (const auto& row : compare_connectivity(6, 3, 3, 20, Rational(2), cache_grid(20, 40))) {
    EXPECT_EQ(row.a.delta, row.b.delta);
    EXPECT_EQ(row.gap, Rational(0));
  }
}

TEST(Compare, HigherConnectivityWinsOnProvenGrid) {
  const auto grid = cache_grid(21, 21 * 12);
  std::vector<std::vector<ConnectivityRow>> by_rho;
  for (auto rho : {Rational(1, 2), Rational(1), Rational(2), Rational(10)})
    by_rho.push_back(compare_connectivity(7, 5, 2, 21, rho, grid));
  std::size_t proven_points = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!by_rho[0][j].both_proven()) continue;
    ++proven_points;
    for (std::size_t q = 0; q < by_rho.size(); ++q) {
      EXPECT_TRUE(by_rho[q][j].a_not_worse()) << to_exact_string(grid[j]);
      if (q) { EXPECT_LE(by_rho[q][j].gap, by_rho[q - 1][j].gap) << to_exact_string(grid[j]); }
    }
  }
  EXPECT_GT(proven_points, 0u);
  // Gap shrinks with rho at fixed M.
  const std::size_t full_M = grid.size() - 2;
  EXPECT_LT(by_rho[3][full_M].gap, by_rho[1][full_M].gap);
}

// Unproven corner of the high-connectivity curve: the closed form there can
// exceed the low-connectivity one.
TEST(Compare, UnprovenPointsAreNotOrdered) {
  auto rows = compare_connectivity(7, 5, 2, 21, Rational(1), {Rational(0)});
  EXPECT_FALSE(rows[0].both_proven());
  EXPECT_GT(rows[0].a.delta, rows[0].b.delta);
}

// The closed form, fronthaul plus edge in two forms, and R2/d from the DoF
// count agree at every integer t.
TEST(Consistency, ThreeFormulas) {
  for (int H = 3; H <= 8; ++H)
    for (int r = 1; r < H; ++r) {
      const std::int64_t L = binomial(H - 1, r - 1);
      if (L > 40) continue;
      const int N = static_cast<int>(binomial(H, r));
      for (auto rho : {Rational(1, 2), Rational(1), Rational(5, 3)})
        for (std::int64_t t = 0; t <= L; ++t) {
          auto p = net(H, r, N, rho, Rational(0)).with_t(t);
          const Rational direct = ndt_closed_form(r, L, t, rho);
          const Rational split = fronthaul_ndt(p) + (t == L ? Rational(0) : edge_ndt_binomial(r, L, t));
          EXPECT_EQ(direct, split) << H << " " << r << " " << t;
          if (t < L) { EXPECT_EQ(edge_ndt(r, L, t), edge_ndt_binomial(r, L, t)); }
          if (t < L && (r == 2 || t >= L - 2)) { EXPECT_EQ(edge_load(L, t) / dof_per_user(H, r, static_cast<int>(t)), edge_ndt(r, L, t)); }
          EXPECT_EQ(ndt_point(p).delta, direct);
        }
    }
}

TEST(Csv, HeaderAndRow) {
  std::string header = ndt_csv_header();
  EXPECT_EQ(header.rfind("H,r,K,L,N,M,t,rho,R1,R2,d,delta_F,delta_E,delta,proven,interpolated", 0), 0u);
  auto row = ndt_csv_row(ndt_point(net(5, 2, 10, Rational(1), Rational(5, 2))));
  EXPECT_EQ(row, "5,2,10,4,10,2.5,1,1,0.75,0.75,0.666666666667,0.75,1.125,1.875,true,false,"
                 "5/2,1,1,3/4,3/4,2/3,3/4,9/8,15/8");
  std::ostringstream out;
  write_ndt_csv(out, ndt_sweep(net(5, 2, 10, Rational(1), Rational(0)), cache_grid(10, 4)));
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 6);
}
