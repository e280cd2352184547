#include <gtest/gtest.h>

#include <random>

#include "gtce/simplex.hpp"
#include "oracle/dense_lp.hpp"

using namespace gtce;

TEST(Simplex, SingleBoundRow)
{
  LinearModel m;
  const auto x = m.add_var("x", 0, kInfinity, 1.0);
  m.add_row("r", "plumbing", {{x, 1.0}}, RowSense::ge, 3.0);
  const auto r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.duals[0], 1.0, 1e-12);
}

TEST(Simplex, TwoUnitDispatchDualIsMarginalCost)
{
  LinearModel m;
  const auto cheap = m.add_var("cheap", 0, 1, 10.0);
  const auto dear = m.add_var("dear", 0, 1, 50.0);
  m.add_row("balance", "plumbing", {{cheap, 1.0}, {dear, 1.0}}, RowSense::eq, 1.5);
  const auto r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, 35.0, 1e-9);
  EXPECT_NEAR(r.duals[0], 50.0, 1e-9);
}

TEST(Simplex, InfeasibleCarriesRowCertificate)
{
  LinearModel m;
  const auto x = m.add_var("x", 0, 2, 1.0);
  m.add_row("need", "plumbing", {{x, 1.0}}, RowSense::ge, 5.0);
  const auto r = solve_lp(m);
  EXPECT_EQ(r.status, LpStatus::infeasible);
  ASSERT_TRUE(r.certificate_row.has_value());
  EXPECT_EQ(*r.certificate_row, 0u);
}

TEST(Simplex, UnboundedCarriesColumnCertificate)
{
  LinearModel m;
  const auto x = m.add_var("x", 0, kInfinity, -1.0);
  const auto y = m.add_var("y", 0, kInfinity, 0.0);
  m.add_row("r", "plumbing", {{x, 1.0}, {y, -1.0}}, RowSense::le, 1.0);
  const auto r = solve_lp(m);
  EXPECT_EQ(r.status, LpStatus::unbounded);
  EXPECT_TRUE(r.certificate_col.has_value());
}

TEST(Simplex, FreeVariableAndEquality)
{
  LinearModel m;
  const auto x = m.add_var("x", -kInfinity, kInfinity, 1.0);
  const auto y = m.add_var("y", 0, 4, -2.0);
  m.add_row("e", "plumbing", {{x, 1.0}, {y, 1.0}}, RowSense::eq, 1.0);
  const auto r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.x[y], 4.0, 1e-9);
  EXPECT_NEAR(r.x[x], -3.0, 1e-9);
  EXPECT_NEAR(r.objective, -11.0, 1e-9);
}

namespace {

LinearModel random_lp(std::mt19937_64& rng, bool all_bounded)
{
  std::uniform_int_distribution<int> nvar(2, 8), nrow(1, 6), coef(-5, 5), cost(-6, 9), rhs(-4, 12), ub(1, 6);
  std::uniform_int_distribution<int> sense(0, 2), coin(0, 3);
  LinearModel m;
  const int n = nvar(rng), rows = nrow(rng);
  for (int j = 0; j < n; ++j) {
    const double u = (all_bounded || coin(rng) != 0) ? ub(rng) : kInfinity;
    m.add_var("x" + std::to_string(j), 0.0, u, cost(rng));
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < n; ++j) {
      if (coin(rng) == 0) continue;
      terms.push_back({static_cast<std::size_t>(j), static_cast<double>(coef(rng))});
    }
    const int s = sense(rng);
    m.add_row("r" + std::to_string(i), "plumbing", std::move(terms),
              s == 0 ? RowSense::le : (s == 1 ? RowSense::ge : RowSense::eq), rhs(rng));
  }
  return m;
}

}  // namespace

TEST(Simplex, RandomLpsMatchDenseTableauOracle)
{
  std::mt19937_64 rng(7);
  int optimal = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const LinearModel m = random_lp(rng, trial % 2 == 0);
    const auto ours = solve_lp(m);
    const auto ref = oracle::dense_lp(m);
    switch (ref.status) {
      case oracle::Status::optimal: {
        ASSERT_EQ(ours.status, LpStatus::optimal) << "trial " << trial;
        EXPECT_NEAR(ours.objective, ref.objective, 1e-8 * std::max(1.0, std::abs(ref.objective))) << "trial " << trial;
        const auto kkt = check_kkt(m, ours);
        EXPECT_LE(kkt.primal_infeasibility, 1e-7);
        EXPECT_LE(kkt.dual_infeasibility, 1e-7);
        EXPECT_LE(kkt.complementarity, 1e-6);
        EXPECT_NEAR(kkt.dual_objective, ours.objective, 1e-6 * std::max(1.0, std::abs(ours.objective)));
        ++optimal;
        break;
      }
      case oracle::Status::infeasible: EXPECT_EQ(ours.status, LpStatus::infeasible) << "trial " << trial; break;
      case oracle::Status::unbounded: EXPECT_EQ(ours.status, LpStatus::unbounded) << "trial " << trial; break;
    }
  }
  EXPECT_GT(optimal, 100);
}

TEST(Simplex, DegenerateCyclingExampleTerminates)
{
  // Beale's example cycles under naive Dantzig pricing.
  LinearModel m;
  const auto x4 = m.add_var("x4", 0, kInfinity, -0.75);
  const auto x5 = m.add_var("x5", 0, kInfinity, 150.0);
  const auto x6 = m.add_var("x6", 0, kInfinity, -0.02);
  const auto x7 = m.add_var("x7", 0, kInfinity, 6.0);
  m.add_row("r1", "plumbing", {{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, RowSense::le, 0.0);
  m.add_row("r2", "plumbing", {{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, RowSense::le, 0.0);
  m.add_row("r3", "plumbing", {{x6, 1.0}}, RowSense::le, 1.0);
  LpOptions opt;
  opt.equilibrate = false;
  const auto r = solve_lp(m, opt);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, -0.05, 1e-9);
}
