#include "comex/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <ostream>

namespace comex {

Topology::Topology(int n) : neighbors_(static_cast<std::size_t>(std::max(n, 0))) {}

Topology Topology::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Topology g(n);
  for (auto [i, j] : edges) g.add_edge(i, j);
  return g;
}

void Topology::add_edge(int i, int j) {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw GraphError("edge endpoint out of range");
  if (i == j) return;
  auto insert_sorted = [](std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert_sorted(neighbors_[i], j);
  insert_sorted(neighbors_[j], i);
}

bool Topology::adjacent(int i, int j) const {
  const auto& n = neighbors_[i];
  return std::binary_search(n.begin(), n.end(), j);
}

std::vector<int> Topology::degrees() const {
  std::vector<int> d;
  d.reserve(neighbors_.size());
  for (const auto& n : neighbors_) d.push_back(static_cast<int>(n.size()));
  return d;
}

std::size_t Topology::edge_count() const {
  std::size_t twice = 0;
  for (const auto& n : neighbors_) twice += n.size();
  return twice / 2;
}

std::string describe(const GraphSpec& spec) {
  char buf[96];
  if (auto* s = std::get_if<ErdosRenyi>(&spec)) {
    std::snprintf(buf, sizeof buf, "erdos_renyi(%d, %g)", s->n, s->p);
  } else if (auto* c = std::get_if<Complete>(&spec)) {
    std::snprintf(buf, sizeof buf, "complete(%d)", c->n);
  } else if (auto* p = std::get_if<Path>(&spec)) {
    std::snprintf(buf, sizeof buf, "path(%d)", p->n);
  } else if (auto* st = std::get_if<Star>(&spec)) {
    std::snprintf(buf, sizeof buf, "star(%d)", st->n);
  } else {
    std::snprintf(buf, sizeof buf, "cycle(%d)", std::get<Cycle>(spec).n);
  }
  return buf;
}

int agent_count(const GraphSpec& spec) {
  return std::visit([](const auto& s) { return s.n; }, spec);
}

namespace {

Topology sample_erdos_renyi(int n, double p, Rng& rng) {
  Topology g(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) g.add_edge(i, j);
  return g;
}

}  // namespace

Topology generate_topology(const GraphSpec& spec, Rng& rng, bool require_connected) {
  const int n = agent_count(spec);
  if (n < 1) throw GraphError("graph needs at least one agent");

  if (const auto* er = std::get_if<ErdosRenyi>(&spec)) {
    if (!(er->p >= 0.0 && er->p <= 1.0)) throw GraphError("edge probability must lie in [0,1]");
    for (int attempt = 0; attempt < kConnectRetries; ++attempt) {
      Topology g = sample_erdos_renyi(n, er->p, rng);
      if (!require_connected || is_connected(g)) return g;
    }
    throw GraphError("no connected " + describe(spec) + " sample after " +
                     std::to_string(kConnectRetries) + " attempts");
  }

  Topology g(n);
  if (std::holds_alternative<Complete>(spec)) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  } else if (std::holds_alternative<Path>(spec)) {
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  } else if (std::holds_alternative<Star>(spec)) {
    for (int i = 1; i < n; ++i) g.add_edge(0, i);
  } else {
    if (n < 3) throw GraphError("cycle needs at least 3 agents");
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  }
  return g;
}

std::vector<std::vector<int>> bfs_distances(const Topology& g) {
  const int n = g.size();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, kUnreachable));
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    auto& row = dist[s];
    row[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : g.neighbors(u)) {
        if (row[v] == kUnreachable) {
          row[v] = row[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

bool is_connected(const Topology& g) {
  if (g.size() <= 1) return true;
  std::vector<char> seen(g.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == g.size();
}

Topology power_graph(const Topology& g, const std::vector<std::vector<int>>& distances, int gamma) {
  Topology p(g.size());
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j)
      if (distances[i][j] >= 1 && distances[i][j] <= gamma) p.add_edge(i, j);
  return p;
}

// Peel maximal cliques: seed each with the lowest-index uncovered vertex and
// grow it with uncovered vertices in index order.
std::vector<std::vector<int>> greedy_clique_cover(const Topology& g) {
  const int n = g.size();
  std::vector<char> covered(n, 0);
  std::vector<std::vector<int>> cover;
  for (int seed = 0; seed < n; ++seed) {
    if (covered[seed]) continue;
    std::vector<int> clique{seed};
    covered[seed] = 1;
    for (int v : g.neighbors(seed)) {
      if (covered[v]) continue;
      bool fits = std::all_of(clique.begin(), clique.end(), [&](int u) { return g.adjacent(u, v); });
      if (fits) {
        clique.push_back(v);
        covered[v] = 1;
      }
    }
    cover.push_back(std::move(clique));
  }
  return cover;
}

std::vector<int> greedy_dominating_set(const Topology& g) {
  const int n = g.size();
  std::vector<char> dominated(n, 0);
  std::vector<int> chosen;
  int remaining = n;
  while (remaining > 0) {
    int best = -1;
    int best_gain = -1;
    for (int v = 0; v < n; ++v) {
      int gain = dominated[v] ? 0 : 1;
      for (int u : g.neighbors(v)) gain += dominated[u] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    chosen.push_back(best);
    if (!dominated[best]) {
      dominated[best] = 1;
      --remaining;
    }
    for (int u : g.neighbors(best)) {
      if (!dominated[u]) {
        dominated[u] = 1;
        --remaining;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

GraphAnalysis analyze(const Topology& g, int gamma) {
  if (gamma < 1) throw GraphError("gamma must be >= 1");
  GraphAnalysis a;
  a.gamma = gamma;
  a.distances = bfs_distances(g);
  a.power = power_graph(g, a.distances, gamma);
  a.degrees_gamma = a.power.degrees();
  a.degrees_gamma_plus = a.degrees_gamma;
  for (int& d : a.degrees_gamma_plus) ++d;
  a.clique_cover = greedy_clique_cover(a.power);
  a.dominating_set = greedy_dominating_set(a.power);
  for (const auto& row : a.distances)
    for (int d : row)
      if (d != kUnreachable) a.diameter = std::max(a.diameter, d);
  return a;
}

std::vector<LeaderLink> leader_assignment(const GraphAnalysis& a) {
  const int n = a.size();
  std::vector<char> is_leader(n, 0);
  for (int l : a.dominating_set) is_leader[l] = 1;
  std::vector<LeaderLink> out(n);
  for (int j = 0; j < n; ++j) {
    if (is_leader[j]) {
      out[j] = {j, 0};
      continue;
    }
    int best = -1;
    int best_d = kUnreachable;
    for (int l : a.dominating_set) {  // sorted, so ties keep the lowest index
      if (a.distances[l][j] < best_d) {
        best_d = a.distances[l][j];
        best = l;
      }
    }
    if (best < 0 || best_d == kUnreachable)
      throw GraphError("agent " + std::to_string(j) + " cannot reach any leader");
    out[j] = {best, best_d};
  }
  return out;
}

void write_adjacency(std::ostream& out, const Topology& g) {
  for (int i = 0; i < g.size(); ++i) {
    out << i << ':';
    for (int j : g.neighbors(i)) out << ' ' << j;
    out << '\n';
  }
}

}  // namespace comex
