#ifndef DERANGE_COUNTING_HPP
#define DERANGE_COUNTING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bigmath.hpp"
#include "graphs.hpp"
#include "matchpoly.hpp"

namespace derange {

inline constexpr std::uint64_t kDefaultTermBudget = 100'000'000;
inline constexpr std::uint64_t kMinTermBudget = 10'000;

enum class DerangementMethod { alternating_sum, euler_recurrence, sign_recurrence };

// Permutations of [n] with no fixed point. All three methods are exact;
// they exist to cross-check each other.
BigInt derangements(std::uint64_t n,
                    DerangementMethod method = DerangementMethod::alternating_sum);

// Perfect matchings of K_{2n} sharing no edge with a fixed perfect
// matching: sum_k (-1)^k C(n,k) (2n-2k-1)!!.
BigInt deranged_matchings(std::uint64_t n);

// pm(K_{2m,2m,2m}) = C(2m,m)^3 (m!)^3.
BigInt pm_tripartite(std::uint64_t m);

// Perfect matchings of K_{2m,2m,2m} avoiding a fixed balanced perfect
// matching, as a triple alternating sum.
BigInt pm_tripartite_minus_m(std::uint64_t m);

// Same count by raw subset inclusion-exclusion (8^m subsets); reference
// path, guarded to m <= 4.
BigInt pm_tripartite_minus_m_subsets(std::uint64_t m);

// Balanced perfect matchings of K_{r x (r-1)m}: every class pair
// carries exactly m edges.
BigInt bpm_r_partite(unsigned r, std::uint64_t m);

struct SumOptions {
  std::uint64_t term_budget = kDefaultTermBudget;
  unsigned jobs = 1;
};

// Balanced perfect matchings avoiding a fixed balanced perfect
// matching: alternating sum over excess vectors x in {0..m}^C(r,2).
// Consecutive terms differ in one coordinate and are updated by an
// exact ratio; fails with Status::budget if (m+1)^C(r,2) exceeds the
// term budget.
BigInt bpm_r_partite_minus_m(unsigned r, std::uint64_t m,
                             const SumOptions& opts = {});

// Every term recomputed from scratch; reference path for the
// incremental updates, guarded to (m+1)^C(r,2) <= 10^6.
BigInt bpm_r_partite_minus_m_reference(unsigned r, std::uint64_t m);

// Number of terms the bpm_r_partite_minus_m sum ranges over.
BigInt bpm_minus_m_term_count(unsigned r, std::uint64_t m);

// pm(G) from the matching sequence of the complement:
// sum_k (-1)^k mu_k(G-bar) (2n-2k-1)!!. The graph overload takes the
// complement graph itself.
BigInt pm_via_complement(const Graph& complement);
BigInt pm_via_complement(const MatchingSeq& mu_complement,
                         std::uint64_t vertex_count);

// Perfect matchings of the complete multipartite graph K_{r x c},
// optionally minus the canonical perfect matching. The plain count
// needs no explicit graph; the minus-M count builds the complement
// (r disjoint K_c plus the matching) and is capped at 64 vertices.
BigInt pm_multipartite(const Shape& shape, bool minus_m);

enum class Family {
  derangement,
  deranged_matching,
  tripartite,
  tripartite_minus_m,
  bpm,
  bpm_minus_m,
  multipartite,
  multipartite_minus_m,
  custom,
};

std::string family_name(Family family);
std::optional<Family> parse_family(const std::string& name);

struct CountParams {
  std::optional<std::int64_t> r;
  std::optional<std::int64_t> c;
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> n;
  std::string graph_path;  // custom family only
  std::uint64_t term_budget = kDefaultTermBudget;
  unsigned jobs = 1;
};

struct CountResult {
  std::string family;
  std::vector<std::pair<std::string, std::int64_t>> params;  // emission order
  BigInt value;
  std::string method;  // closed_form | pie_sum | complement_identity | recurrence | oracle

  std::string to_json() const;
  std::string to_csv() const;  // header + one row
  std::string to_plain() const;
};

// Validates parameters for the family (missing or out-of-range values
// fail with Status::invalid and a message naming the requirement) and
// dispatches to the matching counter.
CountResult count(Family family, const CountParams& params);

}  // namespace derange

#endif
