#include <gtest/gtest.h>

#include "qtrack/schedule.hpp"

using namespace qtrack;

namespace {

TopologySpec er_spec() {
  TopologySpec s;
  s.kind = GraphKind::erdos_renyi;
  s.p = 0.3;
  s.seed = 4;
  return s;
}

bool same_links(const WeightedDigraph& a, const WeightedDigraph& b) {
  if (a.links().size() != b.links().size()) return false;
  for (std::size_t e = 0; e < a.links().size(); ++e)
    if (a.links()[e].from != b.links()[e].from || a.links()[e].to != b.links()[e].to) return false;
  return true;
}

}  // namespace

TEST(Schedule, SameEpochSameGraph) {
  const SwitchingSchedule sched{100, SwitchMode::reweight, 3};
  const TopologySpec spec;
  EXPECT_EQ(topology_at(sched, spec, 0), topology_at(sched, spec, 99));
}

TEST(Schedule, ReweightChangesWeightsNotLinks) {
  const SwitchingSchedule sched{100, SwitchMode::reweight, 3};
  const TopologySpec spec;
  const auto a = topology_at(sched, spec, 99);
  const auto b = topology_at(sched, spec, 100);
  EXPECT_NE(a, b);
  EXPECT_TRUE(same_links(a, b));
}

TEST(Schedule, StaticIsConstantAndUniform) {
  const SwitchingSchedule sched{0, SwitchMode::reweight, 3};
  const TopologySpec spec;
  const auto g0 = topology_at(sched, spec, 0);
  EXPECT_EQ(g0, topology_at(sched, spec, 123456));
  for (const auto& l : g0.links()) EXPECT_DOUBLE_EQ(l.weight, 0.125);
}

TEST(Schedule, ResampleRedrawsLinksAndStaysValid) {
  const SwitchingSchedule sched{100, SwitchMode::resample, 8};
  const auto spec = er_spec();
  bool any_change = false;
  for (std::int64_t e = 0; e < 20; ++e) {
    const auto g = topology_for_epoch(sched, spec, e);
    EXPECT_TRUE(is_weight_balanced(g));
    EXPECT_TRUE(is_strongly_connected(g));
    if (e > 0) any_change |= !same_links(g, topology_for_epoch(sched, spec, e - 1));
  }
  EXPECT_TRUE(any_change);
}

TEST(Schedule, EveryRealizedGraphIsValid) {
  for (auto kind : {GraphKind::exponential, GraphKind::geometric, GraphKind::erdos_renyi}) {
    TopologySpec spec;
    spec.kind = kind;
    spec.seed = 12;
    const SwitchingSchedule sched{50, SwitchMode::reweight, 5};
    for (std::int64_t e = 0; e < 10; ++e) {
      for (std::uint64_t stream : {0u, 1u}) {
        const auto g = topology_for_epoch(sched, spec, e, stream);
        EXPECT_TRUE(is_weight_balanced(g, 1e-12));
        EXPECT_TRUE(is_strongly_connected(g));
      }
    }
  }
}

TEST(Schedule, IndependentTrackerWeights) {
  TopologySchedule sched(TopologySpec{}, SwitchingSchedule{100, SwitchMode::reweight, 1}, true);
  sched.advance_to(0);
  EXPECT_NE(sched.a_graph(), sched.b_graph());
  EXPECT_TRUE(same_links(sched.a_graph(), sched.b_graph()));

  TopologySchedule shared(TopologySpec{}, SwitchingSchedule{100, SwitchMode::reweight, 1}, false);
  shared.advance_to(0);
  EXPECT_EQ(shared.a_graph(), shared.b_graph());
}

TEST(Schedule, AdvanceReportsEpochChanges) {
  TopologySchedule sched(TopologySpec{}, SwitchingSchedule{10, SwitchMode::reweight, 1});
  // The constructor already loads epoch 0.
  EXPECT_FALSE(sched.advance_to(0));
  EXPECT_FALSE(sched.advance_to(9));
  EXPECT_TRUE(sched.advance_to(10));
  EXPECT_EQ(sched.epoch(25), 2);
}

TEST(Schedule, StaticExponentialConnectivity) {
  TopologySchedule sched(TopologySpec{}, SwitchingSchedule{});
  EXPECT_NEAR(sched.min_algebraic_connectivity(), 0.25, 1e-9);
}

TEST(Schedule, ParseNames) {
  EXPECT_EQ(parse_graph_kind("er"), GraphKind::erdos_renyi);
  EXPECT_EQ(parse_switch_mode("resample"), SwitchMode::resample);
  EXPECT_THROW(parse_graph_kind("ring"), Error);
  EXPECT_THROW(parse_switch_mode("sometimes"), Error);
}
