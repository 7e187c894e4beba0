#include "qtrack/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "rng.hpp"

namespace qtrack {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<std::vector<int>> out_lists(const WeightedDigraph& g, bool reverse) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.size()));
  for (const auto& l : g.links()) {
    if (reverse)
      adj[l.to].push_back(l.from);
    else
      adj[l.from].push_back(l.to);
  }
  return adj;
}

bool reaches_all(const std::vector<std::vector<int>>& adj) {
  const auto n = adj.size();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

// Edge-disjoint directed cycles covering every link of a balanced digraph.
// Returns groups of link indices.
std::vector<std::vector<std::size_t>> cycle_decomposition(const WeightedDigraph& g) {
  const int n = g.size();
  std::vector<std::vector<std::size_t>> remaining(static_cast<std::size_t>(n));
  const auto links = g.links();
  // Reverse order so pop_back walks links in ascending (from, to) order.
  for (std::size_t e = links.size(); e-- > 0;) remaining[links[e].from].push_back(e);

  std::vector<std::vector<std::size_t>> cycles;
  for (int start = 0; start < n; ++start) {
    while (!remaining[start].empty()) {
      std::vector<int> path_nodes{start};
      std::vector<std::size_t> path_links;
      std::vector<int> position(static_cast<std::size_t>(n), -1);
      position[start] = 0;
      int v = start;
      while (true) {
        if (remaining[v].empty())
          throw GraphError("cycle decomposition failed: graph is not balanced in degree");
        std::size_t e = remaining[v].back();
        remaining[v].pop_back();
        int w = links[e].to;
        path_links.push_back(e);
        if (position[w] >= 0) {
          // Close the cycle w -> ... -> v -> w and keep walking from w.
          const auto p = static_cast<std::size_t>(position[w]);
          cycles.emplace_back(path_links.begin() + static_cast<std::ptrdiff_t>(p), path_links.end());
          for (std::size_t q = p + 1; q < path_nodes.size(); ++q) position[path_nodes[q]] = -1;
          path_nodes.resize(p + 1);
          path_links.resize(p);
          if (path_links.empty()) break;
          v = w;
          continue;
        }
        position[w] = static_cast<int>(path_nodes.size());
        path_nodes.push_back(w);
        v = w;
      }
    }
  }
  return cycles;
}

}  // namespace

WeightedDigraph::WeightedDigraph(int n, bool directed, std::vector<Link> links)
    : n_(n), directed_(directed), links_(std::move(links)) {
  if (n < 1) throw GraphError("graph must have at least one node");
  for (const auto& l : links_) {
    if (l.from < 0 || l.from >= n || l.to < 0 || l.to >= n)
      throw GraphError("link " + std::to_string(l.from) + "->" + std::to_string(l.to) +
                       " references a node outside [0, " + std::to_string(n) + ")");
    if (l.from == l.to) throw GraphError("self-link at node " + std::to_string(l.from));
    if (!(l.weight > 0.0) || !std::isfinite(l.weight))
      throw GraphError("link " + std::to_string(l.from) + "->" + std::to_string(l.to) +
                       " has non-positive or non-finite weight");
  }
  std::sort(links_.begin(), links_.end(), [](const Link& a, const Link& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t e = 1; e < links_.size(); ++e) {
    if (links_[e].from == links_[e - 1].from && links_[e].to == links_[e - 1].to)
      throw GraphError("duplicate link " + std::to_string(links_[e].from) + "->" +
                       std::to_string(links_[e].to));
  }
  if (!directed_) {
    for (const auto& l : links_) {
      Link rev{l.to, l.from, 0.0};
      auto r = std::lower_bound(links_.begin(), links_.end(), rev, [](const Link& a, const Link& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
      });
      if (r == links_.end() || r->from != rev.from || r->to != rev.to || r->weight != l.weight)
        throw GraphError("undirected graph is missing the symmetric partner of link " +
                         std::to_string(l.from) + "->" + std::to_string(l.to));
    }
  }
}

std::vector<double> WeightedDigraph::in_weights() const {
  std::vector<double> s(static_cast<std::size_t>(n_), 0.0);
  for (const auto& l : links_) s[l.to] += l.weight;
  return s;
}

std::vector<double> WeightedDigraph::out_weights() const {
  std::vector<double> s(static_cast<std::size_t>(n_), 0.0);
  for (const auto& l : links_) s[l.from] += l.weight;
  return s;
}

std::vector<int> WeightedDigraph::in_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(n_), 0);
  for (const auto& l : links_) ++d[l.to];
  return d;
}

std::vector<int> WeightedDigraph::out_degrees() const {
  std::vector<int> d(static_cast<std::size_t>(n_), 0);
  for (const auto& l : links_) ++d[l.from];
  return d;
}

bool WeightedDigraph::has_link(int from, int to) const {
  return std::any_of(links_.begin(), links_.end(),
                     [&](const Link& l) { return l.from == from && l.to == to; });
}

Eigen::MatrixXd WeightedDigraph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& l : links_) a(l.to, l.from) = l.weight;
  return a;
}

WeightedDigraph gen_exponential(int n) {
  if (n < 2 || !is_power_of_two(n))
    throw DomainError("exponential graph needs a power-of-two node count >= 2, got " +
                      std::to_string(n));
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) {
    for (int hop = 1; hop < n; hop *= 2) links.push_back({i, (i + hop) % n, 1.0});
  }
  return WeightedDigraph(n, true, std::move(links));
}

WeightedDigraph gen_complete(int n) {
  if (n < 2) throw DomainError("complete graph needs n >= 2");
  std::vector<Link> links;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) links.push_back({i, j, 1.0});
  return WeightedDigraph(n, false, std::move(links));
}

WeightedDigraph gen_directed_cycle(int n) {
  if (n < 2) throw DomainError("directed cycle needs n >= 2");
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) links.push_back({i, (i + 1) % n, 1.0});
  return WeightedDigraph(n, true, std::move(links));
}

WeightedDigraph gen_geometric(int n, double radius, std::uint64_t seed, int max_attempts) {
  if (n < 2) throw DomainError("geometric graph needs n >= 2");
  if (!(radius > 0.0) || radius > std::sqrt(2.0))
    throw DomainError("geometric radius must lie in (0, sqrt(2)], got " + std::to_string(radius));
  auto rng = detail::make_rng(seed, {0x67656f6dULL});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r2 = radius * radius;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<double> px(static_cast<std::size_t>(n)), py(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      px[i] = unit(rng);
      py[i] = unit(rng);
    }
    std::vector<Link> links;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dx = px[i] - px[j], dy = py[i] - py[j];
        // Tiny slack so points at the exact maximum distance still connect.
        if (dx * dx + dy * dy <= r2 * (1.0 + 1e-12)) {
          links.push_back({i, j, 1.0});
          links.push_back({j, i, 1.0});
        }
      }
    }
    WeightedDigraph g(n, false, std::move(links));
    if (is_strongly_connected(g)) return g;
  }
  throw GraphError("geometric graph with radius " + std::to_string(radius) +
                   " not connected after " + std::to_string(max_attempts) + " attempts");
}

WeightedDigraph gen_erdos_renyi(int n, double p, std::uint64_t seed, int max_attempts) {
  if (n < 2) throw DomainError("Erdos-Renyi graph needs n >= 2");
  if (!(p > 0.0) || p > 1.0)
    throw DomainError("Erdos-Renyi link probability must lie in (0, 1], got " + std::to_string(p));
  auto rng = detail::make_rng(seed, {0x65726472ULL});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Link> links;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (unit(rng) < p) {
          links.push_back({i, j, 1.0});
          links.push_back({j, i, 1.0});
        }
      }
    }
    WeightedDigraph g(n, false, std::move(links));
    if (is_strongly_connected(g)) return g;
  }
  throw GraphError("Erdos-Renyi graph with p = " + std::to_string(p) + " not connected after " +
                   std::to_string(max_attempts) + " attempts");
}

WeightedDigraph assign_weights(const WeightedDigraph& g, double scale,
                               std::optional<std::uint64_t> perturb_seed) {
  if (!(scale > 0.0) || !(scale < 1.0))
    throw DomainError("weight scale must lie in (0, 1), got " + std::to_string(scale));
  const auto in_deg = g.in_degrees();
  const auto out_deg = g.out_degrees();
  for (int i = 0; i < g.size(); ++i) {
    if (in_deg[i] != out_deg[i])
      throw GraphError("node " + std::to_string(i) + " has in-degree " + std::to_string(in_deg[i]) +
                       " but out-degree " + std::to_string(out_deg[i]) +
                       "; uniform weights cannot balance it");
  }
  if (!is_strongly_connected(g)) throw GraphError("cannot weight a disconnected graph");

  const int d_max = *std::max_element(in_deg.begin(), in_deg.end());
  const double base = scale / d_max;
  std::vector<Link> links(g.links().begin(), g.links().end());

  if (!perturb_seed) {
    for (auto& l : links) l.weight = base;
    return WeightedDigraph(g.size(), g.directed(), std::move(links));
  }

  auto rng = detail::make_rng(*perturb_seed, {0x77656967ULL});
  std::uniform_real_distribution<double> draw(0.5, 1.0);
  std::vector<double> w(links.size(), base);
  if (!g.directed()) {
    // Opposing pairs are the 2-cycles; links are sorted, so visit i < j once.
    for (std::size_t e = 0; e < links.size(); ++e) {
      if (links[e].from < links[e].to) {
        const double u = base * draw(rng);
        w[e] = u;
        for (std::size_t r = 0; r < links.size(); ++r)
          if (links[r].from == links[e].to && links[r].to == links[e].from) w[r] = u;
      }
    }
  } else {
    for (const auto& cycle : cycle_decomposition(g)) {
      const double u = base * draw(rng);
      for (auto e : cycle) w[e] = u;
    }
  }
  std::vector<double> in(static_cast<std::size_t>(g.size()), 0.0);
  for (std::size_t e = 0; e < links.size(); ++e) in[links[e].to] += w[e];
  const double rescale = scale / *std::max_element(in.begin(), in.end());
  for (std::size_t e = 0; e < links.size(); ++e) links[e].weight = w[e] * rescale;
  return WeightedDigraph(g.size(), g.directed(), std::move(links));
}

bool is_weight_balanced(const WeightedDigraph& g, double tol) {
  const auto in = g.in_weights();
  const auto out = g.out_weights();
  for (std::size_t i = 0; i < in.size(); ++i)
    if (std::abs(in[i] - out[i]) > tol) return false;
  return true;
}

bool is_strongly_connected(const WeightedDigraph& g) {
  if (g.size() == 1) return true;
  return reaches_all(out_lists(g, false)) && reaches_all(out_lists(g, true));
}

WeightedDigraph drop_link(const WeightedDigraph& g, int i, int j) {
  if (!g.has_link(i, j))
    throw GraphError("cannot drop missing link " + std::to_string(i) + "->" + std::to_string(j));
  std::vector<Link> kept;
  for (const auto& l : g.links()) {
    const bool forward = l.from == i && l.to == j;
    const bool reverse = l.from == j && l.to == i;
    if (!forward && !reverse) kept.push_back(l);
  }
  WeightedDigraph out(g.size(), g.directed(), std::move(kept));
  if (!is_strongly_connected(out))
    throw GraphError("dropping link " + std::to_string(i) + "<->" + std::to_string(j) +
                     " disconnects the graph");
  if (!is_weight_balanced(out))
    throw GraphError("dropping link " + std::to_string(i) + "<->" + std::to_string(j) +
                     " breaks weight balance (no reverse link)");
  return out;
}

Eigen::MatrixXd laplacian(const WeightedDigraph& g) {
  Eigen::MatrixXd lap = g.adjacency();
  for (int i = 0; i < g.size(); ++i) {
    double row = 0.0;
    for (int j = 0; j < g.size(); ++j)
      if (j != i) row += lap(i, j);
    lap(i, i) = -row;
  }
  return lap;
}

double algebraic_connectivity(const WeightedDigraph& g) {
  return spectrum(laplacian(g)).lambda2_real_abs;
}

}  // namespace qtrack
