#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "duelsim/errors.hpp"

namespace duelsim {

enum class Topology { complete, cycle, path, star };

Topology topology_from_name(const std::string& name);
std::string topology_name(Topology t);

/// Undirected communication graph over players 0..m-1. Connectivity is not
/// required at construction; DistanceTable::bfs enforces it.
class CommGraph {
 public:
  CommGraph(int players, const std::vector<std::pair<int, int>>& edges);

  int players() const { return m_; }
  int edge_count() const { return edges_; }
  bool adjacent(int u, int v) const { return adj_[u][v] != 0; }
  const std::vector<int>& neighbors(int v) const { return nbr_[v]; }

 private:
  int m_;
  int edges_;
  std::vector<std::vector<char>> adj_;
  std::vector<std::vector<int>> nbr_;
};

/// Canonical topologies on m vertices. The star hub is player 0.
CommGraph build_canonical(Topology kind, int m);

/// Graph file: first line "m=<int>", then one "u v" pair per line (0-based).
CommGraph load_graph(const std::string& path);

/// All-pairs shortest-path hop counts via BFS from every vertex.
class DistanceTable {
 public:
  static DistanceTable bfs(const CommGraph& g);  // throws DisconnectedError

  int players() const { return m_; }
  int dist(int u, int v) const { return dist_[u][v]; }
  int diameter() const { return diameter_; }

 private:
  int m_ = 0;
  int diameter_ = 0;
  std::vector<std::vector<int>> dist_;
};

/// Edge (u,v) iff 1 <= dist(u,v) <= gamma.
CommGraph power_graph(const CommGraph& g, const DistanceTable& dist, int gamma);

struct CliqueAnalytics {
  int gamma = 0;
  int chi = 0;        // clique covering number of the gamma-power graph
  int max_degree = 0; // in the gamma-power graph
  bool exact = true;  // false when the greedy cover fallback supplied chi
  // largest_clique[m][g] = size of the largest clique containing player m in
  // the g-power graph, for g = 0..gamma (g = 0 means no edges, so always 1).
  std::vector<std::vector<int>> largest_clique;
};

/// Clique quantities of all power graphs up to `gamma` (gamma >= 0).
/// Exact values come from a closed form when `shape` names a canonical
/// topology, or from exhaustive enumeration when m <= 16. Otherwise a greedy
/// cover provides an upper bound on chi (and a lower bound on clique sizes)
/// when `allow_greedy` is set; TooLargeForExactError is thrown if not.
CliqueAnalytics clique_analytics(const CommGraph& g, const DistanceTable& dist,
                                 int gamma,
                                 std::optional<Topology> shape = std::nullopt,
                                 bool allow_greedy = false);

/// The greedy fallback on its own: chi is an upper bound on the true cover
/// number and the clique sizes are lower bounds on the true maxima.
CliqueAnalytics greedy_clique_analytics(const CommGraph& g,
                                        const DistanceTable& dist, int gamma);

}  // namespace duelsim
