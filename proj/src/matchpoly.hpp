#ifndef DERANGE_MATCHPOLY_HPP
#define DERANGE_MATCHPOLY_HPP

#include <string>
#include <vector>

#include "bigmath.hpp"
#include "graphs.hpp"

namespace derange {

// counts[k] = number of k-matchings; counts[0] = 1, counts[1] = |E|.
using MatchingSeq = std::vector<BigInt>;

// Which vertex the deletion recursion branches on. Results are identical
// for every policy; max_degree keeps the recursion narrow on dense hosts.
enum class PivotPolicy { lowest_index, max_degree };

// Exact matching sequence. Connected components are solved independently
// (memoized recursion over induced-subgraph bitmasks) and combined by
// convolution.
MatchingSeq mu(const Graph& g, PivotPolicy policy = PivotPolicy::max_degree);

// Closed form for complete graphs: mu_k(K_c) = c!/(2^k k! (c-2k)!).
MatchingSeq mu_complete(unsigned c);

// Paths and cycles of any length, by sequence recurrence; these cover
// complements far beyond the 64-vertex graph limit.
MatchingSeq mu_path(std::uint64_t length);
MatchingSeq mu_cycle(std::uint64_t length);

// Disjoint-union product rule: out[k] = sum_i a[i] * b[k-i].
MatchingSeq convolve(const MatchingSeq& a, const MatchingSeq& b);

// Trims trailing zeros (convenience for comparisons).
MatchingSeq trimmed(MatchingSeq seq);

struct BoundRow {
  unsigned k = 0;
  std::string bound;  // "crude_upper" | "lower" | "sharp_upper"
  bool holds = false;
  std::string lhs;  // exact integer comparison sides, for localizing failures
  std::string rhs;
};

struct BoundReport {
  unsigned d = 0;
  unsigned n = 0;  // half the vertex count
  std::vector<BoundRow> rows;
  bool all_hold = true;

  std::string to_json() const;
};

// Checks, for every k, the three mu_k estimates for a d-regular graph on
// 2n vertices: mu_k <= d^k n^k / k!, mu_k >= (d^k/k!)(n-2(k-1))^k (where
// the base is nonnegative), and mu_k <= C(n,k) d^k. All comparisons are
// exact integer comparisons after clearing the k! denominator.
BoundReport check_mu_bounds(const Graph& g, unsigned d);

}  // namespace derange

#endif
