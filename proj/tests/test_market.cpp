#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "gtce/market.hpp"

using namespace gtce;
using fixtures::constant;
using fixtures::congestion;
using fixtures::displacement;
using fixtures::displacement_build;
using fixtures::merit_order;

TEST(Market, MeritOrderPriceIsMarginalUnitCost)
{
  const auto toy = merit_order({0.5, 1.5, 2.5, 1.0 + 1e-3});
  const auto o = fixed_topology_dispatch(toy.scenario, toy.weeks, {});
  EXPECT_NEAR(o.price[0][0][0], 20.0, 1e-6);
  EXPECT_NEAR(o.price[0][0][1], 50.0, 1e-6);
  EXPECT_NEAR(o.price[0][0][2], 90.0, 1e-6);
  EXPECT_NEAR(o.price[0][0][3], 50.0, 1e-6);
  EXPECT_NEAR(o.dispatch[1][0][1], 0.5, 1e-9);
}

TEST(Market, CongestionSplitsPrices)
{
  const auto toy = congestion(1.0);
  const auto o = fixed_topology_dispatch(toy.scenario, toy.weeks, {});
  // step 0: line saturated A->B, B sets its own price
  EXPECT_NEAR(o.price[0][0][0], 10.0, 1e-6);
  EXPECT_NEAR(o.price[1][0][0], 60.0, 1e-6);
  EXPECT_NEAR(o.flows.at({"A", "B"})[0][0], 1.0, 1e-9);
  // step 1: line slack, a single price
  EXPECT_NEAR(o.price[0][0][1], 10.0, 1e-6);
  EXPECT_NEAR(o.price[1][0][1], 10.0, 1e-6);
  EXPECT_NEAR(o.flows.at({"A", "B"})[0][1], 0.5, 1e-9);
  // congestion rent: 1 GW × 50 €/MWh × 84 h × 52 weeks
  EXPECT_NEAR(congestion_rent(o), 1.0 * 50.0 * 84.0 * 52.0 * 1e-3 * kAnnualScale, 1e-6);
}

TEST(Market, IdenticalCasesHaveZeroDeltas)
{
  const auto toy = displacement();
  const auto a = fixed_topology_dispatch(toy.scenario, toy.weeks, displacement_build());
  const auto b = fixed_topology_dispatch(toy.scenario, toy.weeks, displacement_build());
  const auto r = compare(a, b);
  for (const auto& row : r.zones) {
    EXPECT_EQ(row.delta_cs, 0.0) << row.zone;
    EXPECT_EQ(row.delta_ps, 0.0) << row.zone;
  }
  EXPECT_EQ(r.delta_congestion_rent, 0.0);
  EXPECT_EQ(r.delta_owp_margin, 0.0);
}

TEST(Market, OffshoreWindDisplacesIncumbents)
{
  const auto toy = displacement();
  const Topology off_topo = displacement_build();
  const auto off = fixed_topology_dispatch(toy.scenario, toy.weeks, off_topo);
  DispatchOptions ro;
  ro.offshore = false;
  const auto ref = fixed_topology_dispatch(toy.scenario, toy.weeks, reference_topology(off_topo), ro);
  const auto r = compare(ref, off);
  ASSERT_EQ(r.zones.size(), 2u);
  EXPECT_GE(r.zones[0].delta_cs, 0.0);
  EXPECT_LT(r.zones[0].delta_ps, 0.0);
  EXPECT_GT(r.owp_margin.at("OBZ1"), 0.0);

  // welfare identity without lost load
  double lhs = r.delta_congestion_rent + r.delta_owp_margin;
  for (const auto& row : r.zones) lhs += row.delta_cs + row.delta_ps;
  EXPECT_NEAR(lhs, r.delta_dispatch_cost, 1e-6 * std::max(1.0, std::abs(r.delta_dispatch_cost)));
  EXPECT_GT(r.delta_dispatch_cost, 0.0);
}

TEST(Market, DurationCurvesAreSortedAndBounded)
{
  const auto toy = displacement();
  const auto o = fixed_topology_dispatch(toy.scenario, toy.weeks, displacement_build());
  for (std::size_t u = 0; u < o.unit_ids.size(); ++u) {
    const auto curve = duration_curve(o.dispatch[u], o.weights, o.hours_per_step);
    EXPECT_EQ(curve.size(), 52u * 168u);
    EXPECT_TRUE(std::is_sorted(curve.rbegin(), curve.rend()));
    EXPECT_LE(curve.front(), toy.scenario.units[u].capacity_gw + 1e-9);
    EXPECT_GE(curve.back(), -1e-9);
  }
  const auto owp = duration_curve(o.owp_feed[o.zone_index("OBZ1")], o.weights, o.hours_per_step);
  EXPECT_LE(owp.front(), 3.0 + 1e-9);
}

TEST(Market, TradeBalanceIsAntisymmetric)
{
  const auto toy = displacement();
  const auto o = fixed_topology_dispatch(toy.scenario, toy.weeks, displacement_build());
  const auto tb = trade_balance(o);
  ASSERT_FALSE(tb.empty());
  for (const auto& b : tb) {
    const auto it = std::find_if(tb.begin(), tb.end(), [&](const TradeBalance& c) { return c.from == b.to && c.to == b.from; });
    ASSERT_NE(it, tb.end());
    EXPECT_NEAR(b.net_twh, -it->net_twh, 1e-12);
  }
  for (const auto& [zone, twh] : curtailment_twh(o)) EXPECT_GE(twh, -1e-12) << zone;
}

TEST(Market, ThreadedDispatchIsIdentical)
{
  const auto toy = displacement();
  DispatchOptions one, many;
  many.jobs = 4;
  const auto a = fixed_topology_dispatch(toy.scenario, toy.weeks, displacement_build(), one);
  const auto b = fixed_topology_dispatch(toy.scenario, toy.weeks, displacement_build(), many);
  EXPECT_EQ(mcp_csv(a, toy.weeks.source_weeks), mcp_csv(b, toy.weeks.source_weeks));
  EXPECT_EQ(balance_csv(trade_balance(a)), balance_csv(trade_balance(b)));
}

TEST(Market, DifferentDemandIsRejected)
{
  auto toy = displacement();
  const auto a = fixed_topology_dispatch(toy.scenario, toy.weeks, {});
  toy.weeks.profiles[0][0][0] += 0.1;
  const auto b = fixed_topology_dispatch(toy.scenario, toy.weeks, {});
  EXPECT_THROW(compare(a, b), domain_error);
}
