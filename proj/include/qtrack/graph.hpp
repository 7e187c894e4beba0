#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtrack/error.hpp"

namespace qtrack {

/// Directed link: node `from` transmits to node `to`. In weight-matrix terms
/// this is the entry a(to, from), i.e. `to` listens to `from`.
struct Link {
  int from = 0;
  int to = 0;
  double weight = 0.0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Communication network with positive link weights.
///
/// Undirected (bidirectional) graphs are stored as pairs of opposing links
/// with equal weights. Construction checks the structural invariants only
/// (ids in range, no self-links, no duplicates, positive finite weights,
/// symmetric link set when undirected); weight balance and connectivity are
/// properties queried with is_weight_balanced() and is_strongly_connected().
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  WeightedDigraph(int n, bool directed, std::vector<Link> links);

  int size() const { return n_; }
  bool directed() const { return directed_; }
  std::span<const Link> links() const { return links_; }

  /// Sum of weights on links arriving at each node (row sums of A).
  std::vector<double> in_weights() const;
  /// Sum of weights on links leaving each node (column sums of A).
  std::vector<double> out_weights() const;
  std::vector<int> in_degrees() const;
  std::vector<int> out_degrees() const;

  bool has_link(int from, int to) const;
  /// Dense weight matrix with A(i, j) = weight of link j -> i.
  Eigen::MatrixXd adjacency() const;

  friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;

 private:
  int n_ = 0;
  bool directed_ = true;
  std::vector<Link> links_;
};

/// Ring-hop digraph on n = 2^q nodes: node i sends to (i + 2^j) mod n for
/// j = 0..q-1. Every node has in-degree = out-degree = q. Unit weights.
WeightedDigraph gen_exponential(int n);

/// Random geometric graph in the unit square with unit weights. Redraws the
/// point set (at most `max_attempts` times) until the graph is connected.
WeightedDigraph gen_geometric(int n, double radius, std::uint64_t seed,
                              int max_attempts = 100);

/// Erdos-Renyi graph G(n, p), stored bidirectionally with unit weights,
/// redrawn until connected.
WeightedDigraph gen_erdos_renyi(int n, double p, std::uint64_t seed,
                                int max_attempts = 100);

/// Complete bidirectional graph with unit weights.
WeightedDigraph gen_complete(int n);

/// Directed cycle 0 -> 1 -> ... -> n-1 -> 0 with unit weights.
WeightedDigraph gen_directed_cycle(int n);

/// Weight-balanced weight assignment with per-node incoming sum <= scale.
///
/// Without a seed every link gets the same weight scale / d_max, where d_max
/// is the largest in-degree. With a seed, links are grouped into
/// edge-disjoint directed cycles (opposing pairs for bidirectional graphs),
/// each cycle's weight is multiplied by a uniform draw in [0.5, 1], and the
/// result is rescaled so the largest incoming sum equals `scale`. Each cycle
/// contributes the same weight to the in- and out-sum of every node it
/// visits, so balance is exact.
///
/// Throws GraphError when some node has unequal in- and out-degree.
WeightedDigraph assign_weights(const WeightedDigraph& g, double scale,
                               std::optional<std::uint64_t> perturb_seed = std::nullopt);

bool is_weight_balanced(const WeightedDigraph& g, double tol = 1e-12);

/// Forward and reverse reachability from node 0.
bool is_strongly_connected(const WeightedDigraph& g);

/// Removes link i -> j and its reverse j -> i (when present). Throws
/// GraphError when i -> j does not exist or when the remaining graph is
/// disconnected or unbalanced.
WeightedDigraph drop_link(const WeightedDigraph& g, int i, int j);

/// Laplacian with off-diagonal (i, j) = a_ij and diagonal -sum_j a_ij, so
/// rows sum to zero and the nonzero spectrum lies in the open left half-plane.
Eigen::MatrixXd laplacian(const WeightedDigraph& g);

struct LaplacianSpectrum {
  /// Sorted by descending real part; the first entry is the zero eigenvalue.
  std::vector<std::complex<double>> eigenvalues;
  /// |Re| of the eigenvalue with the second-largest real part.
  double lambda2_real_abs = 0.0;
};

/// Dense nonsymmetric eigen-decomposition of a Laplacian. Throws Error if the
/// eigensolver fails to converge and DomainError for 1x1 input (no lambda_2).
LaplacianSpectrum spectrum(const Eigen::MatrixXd& laplacian_matrix);

/// Shorthand for spectrum(laplacian(g)).lambda2_real_abs.
double algebraic_connectivity(const WeightedDigraph& g);

/// Plain-text edge list: `n <count> directed <0|1>` then one `i j w` line per
/// link, weights written with 17 significant digits.
void write_edge_list(std::ostream& out, const WeightedDigraph& g);
WeightedDigraph read_edge_list(std::istream& in);

}  // namespace qtrack
