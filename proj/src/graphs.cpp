#include "graphs.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace derange {

namespace {

std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

}  // namespace

Graph::Graph(unsigned vertex_count) : n_(vertex_count), adj_(vertex_count, 0) {
  if (vertex_count > kMaxVertices)
    fail_invalid("graph order exceeds 64 vertices");
}

Graph Graph::complete(unsigned vertex_count) {
  Graph g(vertex_count);
  for (unsigned u = 0; u < vertex_count; ++u)
    for (unsigned v = u + 1; v < vertex_count; ++v) g.add_edge(u, v);
  return g;
}

Graph Graph::complete_multipartite(const Shape& shape) {
  if (shape.r < 1 || shape.c < 1) fail_invalid("shape requires r >= 1 and c >= 1");
  unsigned n = shape.vertex_count();
  if (n > kMaxVertices) fail_invalid("graph order exceeds 64 vertices");
  Graph g(n);
  std::vector<int> classes(n);
  for (unsigned v = 0; v < n; ++v) classes[v] = static_cast<int>(v / shape.c);
  for (unsigned u = 0; u < n; ++u)
    for (unsigned v = u + 1; v < n; ++v)
      if (classes[u] != classes[v]) g.add_edge(u, v);
  g.set_classes(classes);
  return g;
}

unsigned Graph::edge_count() const {
  unsigned total = 0;
  for (unsigned v = 0; v < n_; ++v) total += std::popcount(adj_[v]);
  return total / 2;
}

unsigned Graph::degree(int v) const { return std::popcount(adj_[v]); }

bool Graph::adjacent(int u, int v) const { return (adj_[u] >> v) & 1; }

std::uint64_t Graph::full_mask() const {
  return n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
}

void Graph::add_edge(int u, int v) {
  if (u == v) fail_invalid("self-loops are not allowed");
  adj_[u] |= bit(v);
  adj_[v] |= bit(u);
}

void Graph::remove_edge(int u, int v) {
  adj_[u] &= ~bit(v);
  adj_[v] &= ~bit(u);
}

void Graph::set_classes(const std::vector<int>& class_of) {
  if (class_of.size() != n_) fail_invalid("class map size mismatch");
  class_of_ = class_of;
}

unsigned Graph::class_count() const {
  if (class_of_.empty()) return 0;
  return static_cast<unsigned>(
             *std::max_element(class_of_.begin(), class_of_.end())) +
         1;
}

Graph Graph::complement() const {
  Graph g(n_);
  for (unsigned v = 0; v < n_; ++v)
    g.adj_[v] = ~adj_[v] & full_mask() & ~bit(v);
  return g;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (unsigned u = 0; u < n_; ++u) {
    std::uint64_t rest = adj_[u] >> (u + 1) << (u + 1);
    while (rest) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      out.emplace_back(u, v);
    }
  }
  return out;
}

Graph build_complete_multipartite(const Shape& shape) {
  return Graph::complete_multipartite(shape);
}

Graph complement_in_complete(const Graph& g) { return g.complement(); }

namespace {

// A perfect matching of a complete multipartite graph with class sizes
// s_1..s_r exists iff the total is even and no class holds more than
// half the vertices.
bool matchable(const std::vector<int>& class_sizes) {
  int total = 0, mx = 0;
  for (int s : class_sizes) {
    total += s;
    mx = std::max(mx, s);
  }
  return total % 2 == 0 && mx <= total / 2;
}

}  // namespace

Matching canonical_perfect_matching(const Shape& shape, bool balanced) {
  if (shape.r < 1 || shape.c < 1) fail_invalid("shape requires r >= 1 and c >= 1");
  unsigned n = shape.vertex_count();
  if (n % 2 != 0)
    fail_invalid("no perfect matching: vertex count rc must be even");
  if (shape.r == 1)
    fail_invalid("no perfect matching: a single class has no edges");
  if (balanced && shape.c % (shape.r - 1) != 0)
    fail_invalid("(r-1) must divide c for a balanced perfect matching");

  unsigned m = balanced ? shape.c / (shape.r - 1) : 0;
  std::map<std::pair<int, int>, unsigned> quota;
  if (balanced)
    for (unsigned i = 0; i < shape.r; ++i)
      for (unsigned j = i + 1; j < shape.r; ++j) quota[{(int)i, (int)j}] = m;

  std::vector<int> sizes(shape.r, static_cast<int>(shape.c));
  std::vector<bool> used(n, false);
  Matching result;

  // Greedy lexicographic choice. For the unbalanced case feasibility of
  // the remainder is the half-count condition; for the balanced case the
  // per-pair quotas stay consistent automatically, so quota > 0 is the
  // whole test.
  for (unsigned u = 0; u < n; ++u) {
    if (used[u]) continue;
    int cu = static_cast<int>(u / shape.c);
    bool matched = false;
    for (unsigned v = u + 1; v < n; ++v) {
      if (used[v]) continue;
      int cv = static_cast<int>(v / shape.c);
      if (cv == cu) continue;
      if (balanced) {
        auto key = std::make_pair(std::min(cu, cv), std::max(cu, cv));
        if (quota[key] == 0) continue;
        quota[key] -= 1;
      } else {
        sizes[cu] -= 1;
        sizes[cv] -= 1;
        if (!matchable(sizes)) {
          sizes[cu] += 1;
          sizes[cv] += 1;
          continue;
        }
      }
      used[u] = used[v] = true;
      if (balanced) {
        sizes[cu] -= 1;
        sizes[cv] -= 1;
      }
      result.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
      matched = true;
      break;
    }
    if (!matched) fail_invalid("no perfect matching extends the prefix");
  }
  return result;
}

std::optional<BalancedMatching> classify_balanced(const Shape& shape,
                                                  const Matching& m) {
  if (m.size() * 2 != shape.vertex_count()) return std::nullopt;
  std::map<std::pair<int, int>, unsigned> counts;
  for (unsigned i = 0; i < shape.r; ++i)
    for (unsigned j = i + 1; j < shape.r; ++j) counts[{(int)i, (int)j}] = 0;
  for (const Edge& e : m.edges) {
    int cu = e.first / static_cast<int>(shape.c);
    int cv = e.second / static_cast<int>(shape.c);
    if (cu == cv) return std::nullopt;
    counts[{std::min(cu, cv), std::max(cu, cv)}] += 1;
  }
  unsigned common = counts.begin()->second;
  for (const auto& [pair, cnt] : counts)
    if (cnt != common) return std::nullopt;
  BalancedMatching b;
  b.base = m;
  b.pair_counts = std::move(counts);
  b.edges_per_pair = common;
  return b;
}

namespace {

struct PmSearch {
  const Graph& g;
  std::vector<std::uint64_t> allowed;  // adjacency minus forbidden edges

  explicit PmSearch(const Graph& graph, const Matching* forbidden) : g(graph) {
    allowed.resize(g.order());
    for (unsigned v = 0; v < g.order(); ++v) allowed[v] = g.neighbors(v);
    if (forbidden)
      for (const Edge& e : forbidden->edges) {
        allowed[e.first] &= ~(std::uint64_t{1} << e.second);
        allowed[e.second] &= ~(std::uint64_t{1} << e.first);
      }
  }

  BigInt count(std::uint64_t unmatched) const {
    if (unmatched == 0) return 1;
    int u = std::countr_zero(unmatched);
    std::uint64_t rest = unmatched & (unmatched - 1);
    std::uint64_t partners = allowed[u] & rest;
    BigInt total = 0;
    while (partners) {
      int v = std::countr_zero(partners);
      partners &= partners - 1;
      total += count(rest & ~(std::uint64_t{1} << v));
    }
    return total;
  }

  void list(std::uint64_t unmatched, Matching& acc,
            std::vector<Matching>& out) const {
    if (unmatched == 0) {
      out.push_back(acc);
      return;
    }
    int u = std::countr_zero(unmatched);
    std::uint64_t rest = unmatched & (unmatched - 1);
    std::uint64_t partners = allowed[u] & rest;
    while (partners) {
      int v = std::countr_zero(partners);
      partners &= partners - 1;
      acc.edges.emplace_back(u, v);
      list(rest & ~(std::uint64_t{1} << v), acc, out);
      acc.edges.pop_back();
    }
  }
};

}  // namespace

BigInt enumerate_perfect_matchings(const Graph& g, const Matching* forbidden) {
  if (g.order() % 2 != 0) return 0;
  PmSearch search(g, forbidden);
  return search.count(g.full_mask());
}

std::vector<Matching> list_perfect_matchings(const Graph& g,
                                             const Matching* forbidden) {
  if (g.order() > 12)
    fail_invalid("matching listing is limited to 12 vertices");
  std::vector<Matching> out;
  if (g.order() % 2 != 0) return out;
  PmSearch search(g, forbidden);
  Matching acc;
  search.list(g.full_mask(), acc, out);
  return out;
}

BigInt count_balanced_pm_oracle(const Shape& shape, const Matching* forbidden) {
  if (shape.r < 2) fail_invalid("balanced counts need at least two classes");
  if (shape.c % (shape.r - 1) != 0)
    fail_invalid("(r-1) must divide c for balanced matchings");
  Graph g = build_complete_multipartite(shape);
  unsigned m = shape.c / (shape.r - 1);

  // Depth-first extension tracking per-pair counts; prune any branch that
  // exceeds the common quota m.
  std::vector<std::uint64_t> allowed(g.order());
  for (unsigned v = 0; v < g.order(); ++v) allowed[v] = g.neighbors(v);
  if (forbidden)
    for (const Edge& e : forbidden->edges) {
      allowed[e.first] &= ~(std::uint64_t{1} << e.second);
      allowed[e.second] &= ~(std::uint64_t{1} << e.first);
    }
  std::vector<unsigned> pair_used(shape.r * shape.r, 0);

  BigInt total = 0;
  auto rec = [&](auto&& self, std::uint64_t unmatched) -> void {
    if (unmatched == 0) {
      total += 1;
      return;
    }
    int u = std::countr_zero(unmatched);
    std::uint64_t rest = unmatched & (unmatched - 1);
    std::uint64_t partners = allowed[u] & rest;
    int cu = u / static_cast<int>(shape.c);
    while (partners) {
      int v = std::countr_zero(partners);
      partners &= partners - 1;
      int cv = v / static_cast<int>(shape.c);
      unsigned& used =
          pair_used[std::min(cu, cv) * shape.r + std::max(cu, cv)];
      if (used >= m) continue;
      used += 1;
      self(self, rest & ~(std::uint64_t{1} << v));
      used -= 1;
    }
  };
  rec(rec, g.full_mask());
  return total;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  unsigned r = g.class_count();
  unsigned c = r ? g.order() / r : 0;
  out << "vertices " << g.order() << " classes " << r << " size " << c << "\n";
  for (const Edge& e : g.edges()) out << e.first << " " << e.second << "\n";
}

Graph read_edge_list(std::istream& in) {
  std::string kw_vertices, kw_classes, kw_size;
  unsigned n = 0, r = 0, c = 0;
  if (!(in >> kw_vertices >> n >> kw_classes >> r >> kw_size >> c) ||
      kw_vertices != "vertices" || kw_classes != "classes" || kw_size != "size")
    fail_invalid("bad edge-list header; expected 'vertices N classes R size C'");
  if (n > Graph::kMaxVertices) fail_invalid("graph order exceeds 64 vertices");
  if (r != 0 && r * c != n)
    fail_invalid("edge-list header inconsistent: classes * size != vertices");
  Graph g(n);
  int u, v;
  while (in >> u >> v) {
    if (u < 0 || v < 0 || u >= static_cast<int>(n) || v >= static_cast<int>(n))
      fail_invalid("edge endpoint out of range");
    if (u == v) fail_invalid("self-loop in edge list");
    g.add_edge(u, v);
  }
  if (r != 0) {
    std::vector<int> classes(n);
    for (unsigned i = 0; i < n; ++i) classes[i] = static_cast<int>(i / c);
    for (const Edge& e : g.edges())
      if (classes[e.first] == classes[e.second])
        fail_invalid("intra-class edge contradicts the class header");
    g.set_classes(classes);
  }
  return g;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open graph file: " + path);
  return read_edge_list(in);
}

Graph random_graph(unsigned order, std::mt19937_64& rng) {
  Graph g(order);
  for (unsigned u = 0; u < order; ++u)
    for (unsigned v = u + 1; v < order; ++v)
      if (rng() & 1) g.add_edge(u, v);
  return g;
}

}  // namespace derange
