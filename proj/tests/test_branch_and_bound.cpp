#include <gtest/gtest.h>

#include <random>

#include "gtce/branch_and_bound.hpp"
#include "oracle/dense_lp.hpp"

using namespace gtce;

TEST(BranchAndBound, IntegralRelaxationNeedsNoBranching)
{
  LinearModel m;
  const auto n = m.add_var("n", 0, 5, 1.0, VarType::integer);
  m.add_row("r", "plumbing", {{n, 1.0}}, RowSense::ge, 2.0);
  const auto r = solve_mip(m);
  ASSERT_EQ(r.status, MipStatus::optimal);
  EXPECT_EQ(r.nodes_branched, 0u);
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
  EXPECT_NEAR(r.gap, 0.0, 1e-12);
}

TEST(BranchAndBound, KnapsackMatchesEnumeration)
{
  LinearModel m;
  const double value[] = {10, 13, 7, 8, 9};
  const double weight[] = {4, 6, 3, 4, 5};
  std::vector<Term> cap;
  for (int j = 0; j < 5; ++j) {
    const auto v = m.add_var("b" + std::to_string(j), 0, 1, -value[j], VarType::binary);
    cap.push_back({v, weight[j]});
  }
  m.add_row("cap", "plumbing", cap, RowSense::le, 12.0);
  MipOptions opt;
  opt.rel_gap = 1e-9;
  const auto r = solve_mip(m, opt);
  const auto ref = oracle::enumerate_mip(m);
  ASSERT_EQ(r.status, MipStatus::optimal);
  EXPECT_NEAR(r.objective, ref.objective, 1e-9);
}

TEST(BranchAndBound, InfeasibleIntegerProgram)
{
  LinearModel m;
  const auto n = m.add_var("n", 0, 3, 1.0, VarType::integer);
  m.add_row("lo", "plumbing", {{n, 2.0}}, RowSense::ge, 3.0);
  m.add_row("hi", "plumbing", {{n, 2.0}}, RowSense::le, 3.5);
  EXPECT_EQ(solve_mip(m).status, MipStatus::infeasible);
}

TEST(BranchAndBound, RandomMipsMatchEnumerationAndBoundsAreMonotone)
{
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-4, 6), cost(-5, 8), rhs(2, 15), ub(1, 3), coin(0, 2);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LinearModel m;
    const int ni = 3, nc = 3;
    for (int j = 0; j < ni; ++j) m.add_var("n" + std::to_string(j), 0, ub(rng), cost(rng), VarType::integer);
    for (int j = 0; j < nc; ++j) m.add_var("y" + std::to_string(j), 0, 5, cost(rng));
    for (int i = 0; i < 3; ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < ni + nc; ++j) {
        if (coin(rng) == 0) continue;
        terms.push_back({static_cast<std::size_t>(j), static_cast<double>(coef(rng)) + 0.5});
      }
      m.add_row("r" + std::to_string(i), "plumbing", std::move(terms), i == 2 ? RowSense::ge : RowSense::le,
                i == 2 ? -rhs(rng) : rhs(rng));
    }
    MipOptions opt;
    opt.rel_gap = 1e-9;
    const auto r = solve_mip(m, opt);
    const auto ref = oracle::enumerate_mip(m);
    if (!std::isfinite(ref.objective)) {
      EXPECT_EQ(r.status, MipStatus::infeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(r.status, MipStatus::optimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, ref.objective, 1e-6 * std::max(1.0, std::abs(ref.objective))) << "trial " << trial;
    for (std::size_t k = 1; k < r.bound_history.size(); ++k)
      EXPECT_GE(r.bound_history[k], r.bound_history[k - 1] - 1e-9);
    for (std::size_t k = 1; k < r.incumbent_history.size(); ++k)
      EXPECT_LE(r.incumbent_history[k], r.incumbent_history[k - 1] + 1e-9);
    ++solved;
  }
  EXPECT_GT(solved, 25);
}
