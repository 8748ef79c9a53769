#include <algorithm>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "duelsim/graph.hpp"
#include "duelsim/rng.hpp"

using namespace duelsim;

namespace {

// Independent distance oracle.
std::vector<std::vector<int>> floyd_warshall(const CommGraph& g) {
  const int m = g.players();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(m, std::vector<int>(m, inf));
  for (int u = 0; u < m; ++u) {
    d[u][u] = 0;
    for (int v : g.neighbors(u)) d[u][v] = 1;
  }
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Independent maximum clique containing `root`, by plain recursion.
int max_clique_with(const CommGraph& g, int root) {
  const int m = g.players();
  int best = 1;
  std::vector<int> clique{root};
  auto extend = [&](auto&& self, int next) -> void {
    best = std::max(best, static_cast<int>(clique.size()));
    for (int v = next; v < m; ++v) {
      if (v == root) continue;
      bool ok = true;
      for (int u : clique) {
        if (!g.adjacent(u, v)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        clique.push_back(v);
        self(self, v + 1);
        clique.pop_back();
      }
    }
  };
  extend(extend, 0);
  return best;
}

// Independent minimum clique cover: backtracking partition of the vertices.
int min_cover_backtrack(const CommGraph& g) {
  const int m = g.players();
  std::vector<std::vector<int>> groups;
  int best = m;
  auto place = [&](auto&& self, int v) -> void {
    if (static_cast<int>(groups.size()) >= best) return;
    if (v == m) {
      best = std::min(best, static_cast<int>(groups.size()));
      return;
    }
    const std::size_t present = groups.size();
    for (std::size_t gi = 0; gi < present; ++gi) {
      bool ok = true;
      for (int u : groups[gi]) {
        if (!g.adjacent(u, v)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        groups[gi].push_back(v);
        self(self, v + 1);
        groups[gi].pop_back();
      }
    }
    groups.push_back({v});
    self(self, v + 1);
    groups.pop_back();
  };
  place(place, 0);
  return best;
}

// All connected labeled graphs on m vertices.
std::vector<CommGraph> connected_graphs(int m) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) slots.emplace_back(u, v);
  std::vector<CommGraph> out;
  for (unsigned bits = 0; bits < (1u << slots.size()); ++bits) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (bits & (1u << s)) edges.push_back(slots[s]);
    }
    CommGraph g(m, edges);
    try {
      DistanceTable::bfs(g);
    } catch (const DisconnectedError&) {
      continue;
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

TEST_CASE("canonical topologies") {
  const CommGraph path = build_canonical(Topology::path, 4);
  CHECK(path.edge_count() == 3);
  CHECK(path.adjacent(0, 1));
  CHECK(path.adjacent(2, 3));
  CHECK_FALSE(path.adjacent(0, 2));

  const CommGraph star = build_canonical(Topology::star, 4);
  CHECK(star.edge_count() == 3);
  CHECK(star.adjacent(0, 1));
  CHECK(star.adjacent(0, 3));
  CHECK_FALSE(star.adjacent(1, 2));

  const CommGraph complete = build_canonical(Topology::complete, 3);
  CHECK(complete.edge_count() == 3);

  CHECK_THROWS_AS(build_canonical(Topology::star, 1), InvalidSizeError);
  CHECK_THROWS_AS(build_canonical(Topology::path, 0), InvalidSizeError);
}

TEST_CASE("distances and diameter") {
  const CommGraph path = build_canonical(Topology::path, 4);
  const DistanceTable d = DistanceTable::bfs(path);
  CHECK(d.dist(0, 3) == 3);
  CHECK(d.diameter() == 3);

  const CommGraph complete = build_canonical(Topology::complete, 5);
  CHECK(DistanceTable::bfs(complete).diameter() == 1);

  const CommGraph cycle = build_canonical(Topology::cycle, 6);
  const DistanceTable dc = DistanceTable::bfs(cycle);
  const auto oracle = floyd_warshall(cycle);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v) CHECK(dc.dist(u, v) == oracle[u][v]);
  CHECK(dc.diameter() == 3);

  const CommGraph lonely(3, {{0, 1}});
  CHECK_THROWS_AS(DistanceTable::bfs(lonely), DisconnectedError);
}

TEST_CASE("power graph basics") {
  const CommGraph path = build_canonical(Topology::path, 4);
  const DistanceTable d = DistanceTable::bfs(path);

  const CommGraph p2 = power_graph(path, d, 2);
  CHECK(p2.edge_count() == 5);
  CHECK(p2.adjacent(0, 2));
  CHECK(p2.adjacent(1, 3));
  CHECK_FALSE(p2.adjacent(0, 3));

  const CommGraph p3 = power_graph(path, d, 3);
  CHECK(p3.edge_count() == 6);  // gamma >= diameter: complete

  const CommGraph p1 = power_graph(path, d, 1);
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) CHECK(p1.adjacent(u, v) == path.adjacent(u, v));
}

TEST_CASE("power graph properties on random graphs") {
  Stream rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 3 + static_cast<int>(rng.uniform(5));
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u + 1 < m; ++u) edges.emplace_back(u, u + 1);  // spanning path
    for (int u = 0; u < m; ++u) {
      for (int v = u + 2; v < m; ++v) {
        if (rng.bernoulli(0.3)) edges.emplace_back(u, v);
      }
    }
    const CommGraph g(m, edges);
    const DistanceTable d = DistanceTable::bfs(g);
    for (int g1 = 1; g1 <= d.diameter(); ++g1) {
      for (int g2 = g1; g2 <= d.diameter(); ++g2) {
        const CommGraph a = power_graph(g, d, g1);
        const CommGraph b = power_graph(g, d, g2);
        for (int u = 0; u < m; ++u) {
          for (int v = 0; v < m; ++v) {
            if (a.adjacent(u, v)) CHECK(b.adjacent(u, v));
          }
        }
      }
      const DistanceTable dp = DistanceTable::bfs(power_graph(g, d, g1));
      CHECK(dp.diameter() == (d.diameter() + g1 - 1) / g1);
    }
  }
}

TEST_CASE("clique analytics: canonical examples") {
  {
    const CommGraph g = build_canonical(Topology::complete, 10);
    const DistanceTable d = DistanceTable::bfs(g);
    const CliqueAnalytics a = clique_analytics(g, d, 1, Topology::complete);
    CHECK(a.chi == 1);
    CHECK(a.exact);
    for (int m = 0; m < 10; ++m) CHECK(a.largest_clique[m][1] == 10);
  }
  {
    const CommGraph g = build_canonical(Topology::cycle, 6);
    const DistanceTable d = DistanceTable::bfs(g);
    const CliqueAnalytics a = clique_analytics(g, d, 1, Topology::cycle);
    CHECK(a.chi == 3);
    for (int m = 0; m < 6; ++m) CHECK(a.largest_clique[m][1] == 2);
    const CliqueAnalytics b = clique_analytics(g, d, 2, Topology::cycle);
    CHECK(b.chi == 2);
    for (int m = 0; m < 6; ++m) CHECK(b.largest_clique[m][2] == 3);
  }
  {
    const CommGraph g = build_canonical(Topology::path, 5);
    const DistanceTable d = DistanceTable::bfs(g);
    const CliqueAnalytics a = clique_analytics(g, d, 4, Topology::path);
    CHECK(a.chi == 1);  // gamma >= diameter makes the power graph complete
  }
  {
    const CommGraph g = build_canonical(Topology::star, 4);
    const DistanceTable d = DistanceTable::bfs(g);
    CHECK(clique_analytics(g, d, 1, Topology::star).chi == 3);
    CHECK(clique_analytics(g, d, 2, Topology::star).chi == 1);
  }
  {
    const CommGraph g = build_canonical(Topology::complete, 4);
    const DistanceTable d = DistanceTable::bfs(g);
    const CliqueAnalytics a = clique_analytics(g, d, 0, Topology::complete);
    CHECK(a.chi == 4);  // no communication: every vertex is its own clique
    for (int m = 0; m < 4; ++m) CHECK(a.largest_clique[m][0] == 1);
    CHECK(a.max_degree == 0);
  }
}

TEST_CASE("clique analytics: closed forms match enumeration") {
  for (Topology kind : {Topology::complete, Topology::cycle, Topology::path,
                        Topology::star}) {
    for (int m = 2; m <= 9; ++m) {
      const CommGraph g = build_canonical(kind, m);
      const DistanceTable d = DistanceTable::bfs(g);
      for (int gamma = 0; gamma <= d.diameter(); ++gamma) {
        const CliqueAnalytics closed = clique_analytics(g, d, gamma, kind);
        const CliqueAnalytics exact = clique_analytics(g, d, gamma);
        INFO(topology_name(kind) << " m=" << m << " gamma=" << gamma);
        CHECK(closed.chi == exact.chi);
        CHECK(closed.largest_clique == exact.largest_clique);
        CHECK(closed.max_degree == exact.max_degree);
      }
    }
  }
}

TEST_CASE("clique analytics: enumeration agrees with independent oracles") {
  int checked = 0;
  for (int m = 2; m <= 5; ++m) {
    for (const CommGraph& g : connected_graphs(m)) {
      const DistanceTable d = DistanceTable::bfs(g);
      for (int gamma = 1; gamma <= d.diameter(); ++gamma) {
        const CommGraph pg = power_graph(g, d, gamma);
        const CliqueAnalytics a = clique_analytics(g, d, gamma);
        CHECK(a.chi == min_cover_backtrack(pg));
        for (int v = 0; v < m; ++v) {
          CHECK(a.largest_clique[v][gamma] == max_clique_with(pg, v));
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 700);
}

TEST_CASE("greedy cover upper-bounds the exact cover on all small graphs") {
  for (int m = 2; m <= 5; ++m) {
    for (const CommGraph& g : connected_graphs(m)) {
      const DistanceTable d = DistanceTable::bfs(g);
      for (int gamma = 1; gamma <= d.diameter(); ++gamma) {
        const CliqueAnalytics exact = clique_analytics(g, d, gamma);
        const CliqueAnalytics greedy = greedy_clique_analytics(g, d, gamma);
        CHECK(exact.exact);
        CHECK_FALSE(greedy.exact);
        CHECK(greedy.chi >= exact.chi);
        for (int v = 0; v < m; ++v) {
          CHECK(greedy.largest_clique[v][gamma] <=
                exact.largest_clique[v][gamma]);
        }
      }
    }
  }
  // denser random graphs up to 8 vertices
  Stream rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 6 + static_cast<int>(rng.uniform(3));  // 6..8
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u + 1 < m; ++u) edges.emplace_back(u, u + 1);
    for (int u = 0; u < m; ++u)
      for (int v = u + 2; v < m; ++v)
        if (rng.bernoulli(0.35)) edges.emplace_back(u, v);
    const CommGraph g(m, edges);
    const DistanceTable d = DistanceTable::bfs(g);
    const int gamma = 1 + static_cast<int>(rng.uniform(d.diameter()));
    CHECK(greedy_clique_analytics(g, d, gamma).chi >=
          clique_analytics(g, d, gamma).chi);
  }
}

TEST_CASE("largest clique sizes are nondecreasing in gamma") {
  const CommGraph g = build_canonical(Topology::cycle, 8);
  const DistanceTable d = DistanceTable::bfs(g);
  const CliqueAnalytics a = clique_analytics(g, d, d.diameter());
  for (int m = 0; m < 8; ++m) {
    for (int gp = 1; gp <= d.diameter(); ++gp) {
      CHECK(a.largest_clique[m][gp] >= a.largest_clique[m][gp - 1]);
    }
  }
}

TEST_CASE("large non-canonical graphs need the greedy fallback") {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u + 1 < 18; ++u) edges.emplace_back(u, u + 1);
  edges.emplace_back(0, 9);
  const CommGraph g(18, edges);
  const DistanceTable d = DistanceTable::bfs(g);
  CHECK_THROWS_AS(clique_analytics(g, d, 2), TooLargeForExactError);
  const CliqueAnalytics greedy = clique_analytics(g, d, 2, std::nullopt, true);
  CHECK_FALSE(greedy.exact);
  CHECK(greedy.chi >= 1);
}

TEST_CASE("graph file loading") {
  const auto path = std::filesystem::temp_directory_path() / "graph_ok.txt";
  {
    std::ofstream out(path);
    out << "m=3\n0 1\n1 2\n";
  }
  const CommGraph g = load_graph(path.string());
  CHECK(g.players() == 3);
  CHECK(g.adjacent(0, 1));
  CHECK_FALSE(g.adjacent(0, 2));

  const auto bad = std::filesystem::temp_directory_path() / "graph_bad.txt";
  {
    std::ofstream out(bad);
    out << "nodes 3\n";
  }
  CHECK_THROWS_AS(load_graph(bad.string()), ParseError);
}
