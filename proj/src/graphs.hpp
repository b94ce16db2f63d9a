#ifndef DERANGE_GRAPHS_HPP
#define DERANGE_GRAPHS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "bigmath.hpp"

namespace derange {

// r classes of c vertices each; vertices of class i are the contiguous
// block [i*c, (i+1)*c).
struct Shape {
  unsigned r = 0;
  unsigned c = 0;

  unsigned vertex_count() const { return r * c; }
  // n with 2n = rc; callers must ensure rc is even first.
  unsigned half_vertices() const { return r * c / 2; }
};

using Edge = std::pair<int, int>;  // stored with first < second

// Dense graph on at most 64 vertices, one adjacency word per vertex.
// Optionally carries a vertex -> class map (no intra-class edges then).
class Graph {
 public:
  static constexpr unsigned kMaxVertices = 64;

  explicit Graph(unsigned vertex_count);

  static Graph complete(unsigned vertex_count);
  static Graph complete_multipartite(const Shape& shape);

  unsigned order() const { return n_; }
  unsigned edge_count() const;
  unsigned degree(int v) const;
  bool adjacent(int u, int v) const;
  std::uint64_t neighbors(int v) const { return adj_[v]; }
  std::uint64_t full_mask() const;

  void add_edge(int u, int v);
  void remove_edge(int u, int v);

  void set_classes(const std::vector<int>& class_of);
  bool has_classes() const { return !class_of_.empty(); }
  int class_of(int v) const { return class_of_[v]; }
  unsigned class_count() const;

  // Same vertex set, complementary edges; classes are dropped (the
  // complement has intra-class edges).
  Graph complement() const;

  std::vector<Edge> edges() const;

 private:
  unsigned n_;
  std::vector<std::uint64_t> adj_;
  std::vector<int> class_of_;
};

struct Matching {
  std::vector<Edge> edges;

  bool empty() const { return edges.empty(); }
  std::size_t size() const { return edges.size(); }
};

// A perfect matching of K_{r x c} whose per-class-pair edge counts are
// all equal to a common m (= c/(r-1)).
struct BalancedMatching {
  Matching base;
  std::map<std::pair<int, int>, unsigned> pair_counts;
  unsigned edges_per_pair = 0;
};

Graph build_complete_multipartite(const Shape& shape);

// Deterministic (lexicographically smallest) perfect matching of
// K_{r x c}. With balanced = true the matching has exactly c/(r-1)
// edges between every pair of classes.
Matching canonical_perfect_matching(const Shape& shape, bool balanced);

// Classifies a perfect matching of K_{r x c} by its per-class-pair edge
// counts; nullopt if the counts are not all equal (or the matching is
// not perfect cross-class).
std::optional<BalancedMatching> classify_balanced(const Shape& shape,
                                                  const Matching& m);

Graph complement_in_complete(const Graph& g);

// Exact count of perfect matchings avoiding all edges of `forbidden`,
// by recursive extension from the lowest-index unmatched vertex.
BigInt enumerate_perfect_matchings(const Graph& g,
                                   const Matching* forbidden = nullptr);

// Listing variant for debugging; guarded to at most 12 vertices.
std::vector<Matching> list_perfect_matchings(const Graph& g,
                                             const Matching* forbidden = nullptr);

// Enumerates perfect matchings of K_{r x c} (avoiding `forbidden`) and
// counts those with equal per-class-pair edge counts.
BigInt count_balanced_pm_oracle(const Shape& shape,
                                const Matching* forbidden = nullptr);

// Edge-list interchange format: header "vertices N classes R size C",
// then one "u v" line per edge, 0-indexed, u < v, sorted. R = C = 0
// means no class structure.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

// Erdos-Renyi style graph on `order` vertices, edge probability 1/2;
// deterministic for a given generator state.
Graph random_graph(unsigned order, std::mt19937_64& rng);

}  // namespace derange

#endif
