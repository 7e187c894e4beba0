#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "qtrack/graph.hpp"

namespace qtrack {

enum class GraphKind { exponential, geometric, erdos_renyi };

GraphKind parse_graph_kind(std::string_view s);
std::string_view to_string(GraphKind kind);

/// Generator parameters for one family of communication networks.
struct TopologySpec {
  GraphKind kind = GraphKind::exponential;
  int n = 16;
  double radius = 0.45;  // geometric only
  double p = 0.3;        // Erdos-Renyi only
  double scale = 0.5;    // per-node incoming weight cap
  std::uint64_t seed = 0;
};

enum class SwitchMode {
  reweight,  ///< same link set, fresh weight perturbation each epoch
  resample,  ///< redraw the random graph and its weights each epoch
};

SwitchMode parse_switch_mode(std::string_view s);
std::string_view to_string(SwitchMode mode);

/// When and how the network changes. period == 0 means a static network
/// with unperturbed uniform weights.
struct SwitchingSchedule {
  std::int64_t period = 0;
  SwitchMode mode = SwitchMode::reweight;
  std::uint64_t seed = 0;

  bool is_static() const { return period <= 0; }
};

std::int64_t epoch_at(const SwitchingSchedule& schedule, std::int64_t k);

/// Unit-weight topology drawn from the spec's generator with the given seed.
WeightedDigraph generate_topology(const TopologySpec& spec, std::uint64_t seed);

/// Weighted graph realized in `epoch`. `stream` selects an independent weight
/// perturbation (0 for the consensus weights A, 1 for tracker weights B).
WeightedDigraph topology_for_epoch(const SwitchingSchedule& schedule, const TopologySpec& spec,
                                   std::int64_t epoch, std::uint64_t stream = 0);

/// Graph in force at iteration k: a deterministic function of the seeds and
/// floor(k / period).
WeightedDigraph topology_at(const SwitchingSchedule& schedule, const TopologySpec& spec,
                            std::int64_t k);

/// Caches the A and B graphs of the current epoch for an iterating run.
class TopologySchedule {
 public:
  TopologySchedule(TopologySpec spec, SwitchingSchedule schedule, bool independent_b = false);

  const TopologySpec& spec() const { return spec_; }
  const SwitchingSchedule& schedule() const { return schedule_; }
  bool independent_b() const { return independent_b_; }

  std::int64_t epoch(std::int64_t k) const { return epoch_at(schedule_, k); }

  /// Moves the cache to the epoch containing k; returns true if it changed.
  bool advance_to(std::int64_t k);
  const WeightedDigraph& a_graph() const { return a_; }
  const WeightedDigraph& b_graph() const { return independent_b_ ? b_ : a_; }

  /// Smallest |Re lambda_2| over the A and B Laplacians of the first
  /// `samples` epochs (a single epoch for static schedules).
  double min_algebraic_connectivity(int samples = 16) const;

 private:
  TopologySpec spec_;
  SwitchingSchedule schedule_;
  bool independent_b_ = false;
  std::optional<std::int64_t> current_;
  WeightedDigraph a_;
  WeightedDigraph b_;
};

}  // namespace qtrack
