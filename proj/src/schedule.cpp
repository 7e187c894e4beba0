#include "qtrack/schedule.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "rng.hpp"

namespace qtrack {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::int64_t epoch, std::uint64_t stream) {
  auto rng = detail::make_rng(seed, {static_cast<std::uint64_t>(epoch), stream});
  return rng();
}

}  // namespace

GraphKind parse_graph_kind(std::string_view s) {
  if (s == "exponential") return GraphKind::exponential;
  if (s == "geometric") return GraphKind::geometric;
  if (s == "er" || s == "erdos_renyi") return GraphKind::erdos_renyi;
  throw DomainError("unknown graph kind '" + std::string(s) + "' (expected exponential|geometric|er)");
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::exponential:
      return "exponential";
    case GraphKind::geometric:
      return "geometric";
    case GraphKind::erdos_renyi:
      return "er";
  }
  return "?";
}

SwitchMode parse_switch_mode(std::string_view s) {
  if (s == "reweight") return SwitchMode::reweight;
  if (s == "resample") return SwitchMode::resample;
  throw DomainError("unknown switching mode '" + std::string(s) + "' (expected reweight|resample)");
}

std::string_view to_string(SwitchMode mode) {
  return mode == SwitchMode::reweight ? "reweight" : "resample";
}

std::int64_t epoch_at(const SwitchingSchedule& schedule, std::int64_t k) {
  if (schedule.is_static()) return 0;
  return k / schedule.period;
}

WeightedDigraph generate_topology(const TopologySpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case GraphKind::exponential:
      return gen_exponential(spec.n);
    case GraphKind::geometric:
      return gen_geometric(spec.n, spec.radius, seed);
    case GraphKind::erdos_renyi:
      return gen_erdos_renyi(spec.n, spec.p, seed);
  }
  throw DomainError("unhandled graph kind");
}

WeightedDigraph topology_for_epoch(const SwitchingSchedule& schedule, const TopologySpec& spec,
                                   std::int64_t epoch, std::uint64_t stream) {
  if (schedule.is_static()) {
    auto g = assign_weights(generate_topology(spec, spec.seed), spec.scale);
    if (stream == 0) return g;
    // A static B graph still gets its own weights when requested.
    return assign_weights(g, spec.scale, derive_seed(schedule.seed, 0, stream));
  }
  const std::uint64_t topo_seed =
      schedule.mode == SwitchMode::resample ? derive_seed(schedule.seed, epoch, 0xffff) : spec.seed;
  const auto base = generate_topology(spec, topo_seed);
  return assign_weights(base, spec.scale, derive_seed(schedule.seed, epoch, stream));
}

WeightedDigraph topology_at(const SwitchingSchedule& schedule, const TopologySpec& spec,
                            std::int64_t k) {
  return topology_for_epoch(schedule, spec, epoch_at(schedule, k));
}

TopologySchedule::TopologySchedule(TopologySpec spec, SwitchingSchedule schedule, bool independent_b)
    : spec_(spec), schedule_(schedule), independent_b_(independent_b) {
  advance_to(0);
}

bool TopologySchedule::advance_to(std::int64_t k) {
  const auto e = epoch(k);
  if (current_ && *current_ == e) return false;
  a_ = topology_for_epoch(schedule_, spec_, e, 0);
  if (independent_b_) b_ = topology_for_epoch(schedule_, spec_, e, 1);
  current_ = e;
  return true;
}

double TopologySchedule::min_algebraic_connectivity(int samples) const {
  const int epochs = schedule_.is_static() ? 1 : std::max(1, samples);
  double lo = std::numeric_limits<double>::infinity();
  for (int e = 0; e < epochs; ++e) {
    lo = std::min(lo, algebraic_connectivity(topology_for_epoch(schedule_, spec_, e, 0)));
    if (independent_b_)
      lo = std::min(lo, algebraic_connectivity(topology_for_epoch(schedule_, spec_, e, 1)));
  }
  return lo;
}

}  // namespace qtrack
