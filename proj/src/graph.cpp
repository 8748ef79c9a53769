#include "duelsim/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <fstream>
#include <sstream>

namespace duelsim {

Topology topology_from_name(const std::string& name) {
  if (name == "complete") return Topology::complete;
  if (name == "cycle") return Topology::cycle;
  if (name == "path") return Topology::path;
  if (name == "star") return Topology::star;
  throw ConfigError("unknown graph kind: " + name);
}

std::string topology_name(Topology t) {
  switch (t) {
    case Topology::complete: return "complete";
    case Topology::cycle: return "cycle";
    case Topology::path: return "path";
    case Topology::star: return "star";
  }
  return "?";
}

CommGraph::CommGraph(int players,
                     const std::vector<std::pair<int, int>>& edges)
    : m_(players), edges_(0) {
  if (players < 1) throw InvalidSizeError("graph needs at least one player");
  adj_.assign(m_, std::vector<char>(m_, 0));
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= m_ || v >= m_) {
      throw InvalidSizeError("edge endpoint out of range");
    }
    if (u == v) throw InvalidSizeError("self-loops are not allowed");
    adj_[u][v] = adj_[v][u] = 1;
  }
  nbr_.assign(m_, {});
  for (int u = 0; u < m_; ++u) {
    for (int v = 0; v < m_; ++v) {
      if (adj_[u][v]) nbr_[u].push_back(v);
    }
    edges_ += static_cast<int>(nbr_[u].size());
  }
  edges_ /= 2;
}

CommGraph build_canonical(Topology kind, int m) {
  if (m < 1) throw InvalidSizeError("m must be >= 1");
  std::vector<std::pair<int, int>> edges;
  switch (kind) {
    case Topology::complete:
      for (int u = 0; u < m; ++u)
        for (int v = u + 1; v < m; ++v) edges.emplace_back(u, v);
      break;
    case Topology::cycle:
      for (int u = 0; u + 1 < m; ++u) edges.emplace_back(u, u + 1);
      if (m > 2) edges.emplace_back(m - 1, 0);
      break;
    case Topology::path:
      for (int u = 0; u + 1 < m; ++u) edges.emplace_back(u, u + 1);
      break;
    case Topology::star:
      if (m < 2) throw InvalidSizeError("star needs m >= 2");
      for (int v = 1; v < m; ++v) edges.emplace_back(0, v);
      break;
  }
  return CommGraph(m, edges);
}

CommGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("graph file is empty");
  int m = 0;
  if (sscanf(line.c_str(), "m=%d", &m) != 1) {
    throw ParseError("graph file must start with 'm=<int>'");
  }
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    int u, v;
    if (!(row >> u)) continue;  // blank line
    if (!(row >> v)) throw ParseError("bad edge line: " + line);
    edges.emplace_back(u, v);
  }
  return CommGraph(m, edges);
}

DistanceTable DistanceTable::bfs(const CommGraph& g) {
  DistanceTable t;
  t.m_ = g.players();
  t.dist_.assign(t.m_, std::vector<int>(t.m_, -1));
  for (int s = 0; s < t.m_; ++s) {
    auto& d = t.dist_[s];
    d[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : g.neighbors(u)) {
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (int v = 0; v < t.m_; ++v) {
      if (d[v] < 0) throw DisconnectedError("communication graph is disconnected");
      t.diameter_ = std::max(t.diameter_, d[v]);
    }
  }
  return t;
}

CommGraph power_graph(const CommGraph& g, const DistanceTable& dist,
                      int gamma) {
  if (gamma < 1) throw InvalidSizeError("power graph needs gamma >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.players(); ++u) {
    for (int v = u + 1; v < g.players(); ++v) {
      if (dist.dist(u, v) <= gamma) edges.emplace_back(u, v);
    }
  }
  return CommGraph(g.players(), edges);
}

namespace {

std::vector<std::uint32_t> power_masks(const DistanceTable& dist, int g) {
  const int m = dist.players();
  std::vector<std::uint32_t> adj(m, 0);
  for (int u = 0; u < m; ++u) {
    for (int v = 0; v < m; ++v) {
      if (u != v && dist.dist(u, v) <= g) adj[u] |= 1u << v;
    }
  }
  return adj;
}

std::vector<char> clique_table(const std::vector<std::uint32_t>& adj) {
  const int m = static_cast<int>(adj.size());
  std::vector<char> is_clique(std::size_t{1} << m, 0);
  is_clique[0] = 1;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const int v = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    is_clique[mask] = is_clique[rest] && (rest & ~adj[v]) == 0;
  }
  return is_clique;
}

// Minimum number of cliques covering all vertices: subset DP over the cliques
// that contain the lowest uncovered vertex.
int exact_cover(const std::vector<std::uint32_t>& adj,
                const std::vector<char>& is_clique) {
  const int m = static_cast<int>(adj.size());
  const std::uint32_t full = (m == 32) ? ~0u : (1u << m) - 1;
  std::vector<std::uint8_t> cover(full + 1u, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const int v = std::countr_zero(s);
    const std::uint32_t vbit = 1u << v;
    const std::uint32_t grow = (s ^ vbit) & adj[v];
    int best = 1 + cover[s ^ vbit];
    for (std::uint32_t t = grow; t != 0; t = (t - 1) & grow) {
      if (is_clique[t]) {
        best = std::min(best, 1 + cover[s ^ vbit ^ t]);
      }
    }
    cover[s] = static_cast<std::uint8_t>(best);
  }
  return cover[full];
}

void exact_largest(const std::vector<std::uint32_t>& adj,
                   const std::vector<char>& is_clique, std::vector<int>& out) {
  const int m = static_cast<int>(adj.size());
  std::fill(out.begin(), out.end(), 1);
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (!is_clique[mask]) continue;
    const int size = std::popcount(mask);
    for (std::uint32_t b = mask; b != 0; b &= b - 1) {
      const int v = std::countr_zero(b);
      out[v] = std::max(out[v], size);
    }
  }
}

std::vector<std::vector<char>> power_adj(const DistanceTable& dist, int g) {
  const int m = dist.players();
  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (u != v && dist.dist(u, v) <= g) adj[u][v] = 1;
  return adj;
}

// Grows a clique from `seed` inside `allowed`, always adding the candidate
// with the most remaining common neighbors.
std::vector<int> greedy_clique(const std::vector<std::vector<char>>& adj,
                               int seed, const std::vector<char>& allowed) {
  const int m = static_cast<int>(adj.size());
  std::vector<int> clique{seed};
  std::vector<char> cand(m, 0);
  for (int v = 0; v < m; ++v) cand[v] = allowed[v] && adj[seed][v];
  for (;;) {
    int best = -1, best_score = -1;
    for (int u = 0; u < m; ++u) {
      if (!cand[u]) continue;
      int score = 0;
      for (int w = 0; w < m; ++w) score += cand[w] && adj[u][w];
      if (score > best_score) {
        best_score = score;
        best = u;
      }
    }
    if (best < 0) break;
    clique.push_back(best);
    for (int v = 0; v < m; ++v) cand[v] = cand[v] && adj[best][v];
  }
  return clique;
}

int greedy_cover(const std::vector<std::vector<char>>& adj) {
  const int m = static_cast<int>(adj.size());
  std::vector<char> uncovered(m, 1);
  int cliques = 0;
  int left = m;
  while (left > 0) {
    int seed = -1, best_deg = -1;
    for (int v = 0; v < m; ++v) {
      if (!uncovered[v]) continue;
      int deg = 0;
      for (int u = 0; u < m; ++u) deg += uncovered[u] && adj[v][u];
      if (deg > best_deg) {
        best_deg = deg;
        seed = v;
      }
    }
    for (int v : greedy_clique(adj, seed, uncovered)) {
      uncovered[v] = 0;
      --left;
    }
    ++cliques;
  }
  return cliques;
}

bool closed_form(Topology shape, int m, int diameter, int gamma,
                 CliqueAnalytics& out) {
  auto chi_blocks = [&](int g) { return (m + g) / (g + 1); };  // ceil(m/(g+1))
  for (int g = 0; g <= gamma; ++g) {
    int size;
    if (g == 0) {
      size = 1;
    } else if (g >= diameter) {
      size = m;
    } else {
      switch (shape) {
        case Topology::complete: size = m; break;
        case Topology::cycle: size = g + 1; break;
        case Topology::path: size = std::min(m, g + 1); break;
        case Topology::star: size = 2; break;
      }
    }
    for (int v = 0; v < m; ++v) out.largest_clique[v][g] = size;
  }
  if (gamma == 0) {
    out.chi = m;
  } else if (gamma >= diameter) {
    out.chi = 1;
  } else {
    switch (shape) {
      case Topology::complete: out.chi = 1; break;
      case Topology::cycle: out.chi = chi_blocks(gamma); break;
      case Topology::path: out.chi = chi_blocks(gamma); break;
      case Topology::star: out.chi = m - 1; break;
    }
  }
  return true;
}

}  // namespace

CliqueAnalytics clique_analytics(const CommGraph& g, const DistanceTable& dist,
                                 int gamma, std::optional<Topology> shape,
                                 bool allow_greedy) {
  if (gamma < 0) throw InvalidSizeError("gamma must be >= 0");
  const int m = g.players();
  CliqueAnalytics out;
  out.gamma = gamma;
  out.largest_clique.assign(m, std::vector<int>(gamma + 1, 1));

  out.max_degree = 0;
  for (int u = 0; u < m; ++u) {
    int deg = 0;
    for (int v = 0; v < m; ++v) {
      if (u != v && dist.dist(u, v) <= gamma && gamma >= 1) ++deg;
    }
    out.max_degree = std::max(out.max_degree, deg);
  }

  if (shape) {
    out.exact = true;
    closed_form(*shape, m, dist.diameter(), gamma, out);
    return out;
  }

  if (m <= 16) {
    out.exact = true;
    for (int gp = 1; gp <= gamma; ++gp) {
      const auto masks = power_masks(dist, gp);
      const auto table = clique_table(masks);
      std::vector<int> largest(m, 1);
      exact_largest(masks, table, largest);
      for (int v = 0; v < m; ++v) out.largest_clique[v][gp] = largest[v];
      if (gp == gamma) out.chi = exact_cover(masks, table);
    }
    if (gamma == 0) out.chi = m;
    return out;
  }

  if (!allow_greedy) {
    throw TooLargeForExactError(
        "exact clique analytics limited to m <= 16 or canonical topologies; "
        "request the greedy upper bound instead");
  }
  return greedy_clique_analytics(g, dist, gamma);
}

CliqueAnalytics greedy_clique_analytics(const CommGraph& g,
                                        const DistanceTable& dist, int gamma) {
  if (gamma < 0) throw InvalidSizeError("gamma must be >= 0");
  const int m = g.players();
  CliqueAnalytics out;
  out.gamma = gamma;
  out.exact = false;
  out.largest_clique.assign(m, std::vector<int>(gamma + 1, 1));
  out.max_degree = 0;
  if (gamma >= 1) {
    for (int u = 0; u < m; ++u) {
      int deg = 0;
      for (int v = 0; v < m; ++v) {
        if (u != v && dist.dist(u, v) <= gamma) ++deg;
      }
      out.max_degree = std::max(out.max_degree, deg);
    }
  }
  for (int gp = 1; gp <= gamma; ++gp) {
    const auto adj = power_adj(dist, gp);
    const std::vector<char> all(m, 1);
    for (int v = 0; v < m; ++v) {
      out.largest_clique[v][gp] =
          static_cast<int>(greedy_clique(adj, v, all).size());
    }
    if (gp == gamma) out.chi = greedy_cover(adj);
  }
  if (gamma == 0) out.chi = m;
  return out;
}

}  // namespace duelsim
