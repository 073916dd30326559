#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "comex/rng.hpp"

namespace comex {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected simple graph over agents 0..n-1. Self-adjacency is implicit:
/// an agent always observes its own pulls, but neighbors() never contains it.
class Topology {
 public:
  Topology() = default;
  explicit Topology(int n);

  static Topology from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return static_cast<int>(neighbors_.size()); }
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
  int degree(int i) const { return static_cast<int>(neighbors_[i].size()); }
  std::vector<int> degrees() const;
  bool adjacent(int i, int j) const;
  std::size_t edge_count() const;

  void add_edge(int i, int j);

  bool operator==(const Topology&) const = default;

 private:
  std::vector<std::vector<int>> neighbors_;
};

struct ErdosRenyi {
  int n = 1;
  double p = 0.5;
};
struct Complete {
  int n = 1;
};
struct Path {
  int n = 1;
};
struct Star {
  int n = 1;
};
struct Cycle {
  int n = 3;
};

using GraphSpec = std::variant<ErdosRenyi, Complete, Path, Star, Cycle>;

std::string describe(const GraphSpec& spec);
int agent_count(const GraphSpec& spec);

inline constexpr int kConnectRetries = 1000;

Topology generate_topology(const GraphSpec& spec, Rng& rng, bool require_connected);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// All-pairs hop distances by breadth-first search; kUnreachable when disconnected.
std::vector<std::vector<int>> bfs_distances(const Topology& g);
bool is_connected(const Topology& g);

struct GraphAnalysis {
  int gamma = 1;
  Topology power;
  std::vector<std::vector<int>> distances;
  std::vector<int> degrees_gamma;       // d_gamma(i)
  std::vector<int> degrees_gamma_plus;  // d_gamma(i) + 1
  std::vector<std::vector<int>> clique_cover;
  std::vector<int> dominating_set;
  int diameter = 0;  // max finite distance

  int chi_hat() const { return static_cast<int>(clique_cover.size()); }
  int gammabar_hat() const { return static_cast<int>(dominating_set.size()); }
  int size() const { return power.size(); }
};

Topology power_graph(const Topology& g, const std::vector<std::vector<int>>& distances, int gamma);
std::vector<std::vector<int>> greedy_clique_cover(const Topology& g);
std::vector<int> greedy_dominating_set(const Topology& g);

GraphAnalysis analyze(const Topology& g, int gamma);

struct LeaderLink {
  int leader = 0;
  int distance = 0;
};

/// Every agent mapped to its nearest leader in G (leaders map to themselves).
std::vector<LeaderLink> leader_assignment(const GraphAnalysis& a);

/// "i: j k l" per line.
void write_adjacency(std::ostream& out, const Topology& g);

}  // namespace comex
